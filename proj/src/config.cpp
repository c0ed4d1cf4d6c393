#include "dirac/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "dirac/experiments.hpp"

namespace dirac {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(v);
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (item.empty()) throw std::invalid_argument("empty list entry");
    out.push_back(item);
  }
  if (out.empty()) throw std::invalid_argument("empty value");
  return out;
}

double to_double(const std::string& v) {
  double x = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || ptr != v.data() + v.size()) throw std::invalid_argument("'" + v + "' is not a number");
  return x;
}

std::uint64_t to_unsigned(const std::string& v) {
  std::uint64_t x = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || ptr != v.data() + v.size())
    throw std::invalid_argument("'" + v + "' is not a non-negative integer");
  return x;
}

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

template <class T, class F>
std::string join(const std::vector<T>& v, F f) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + f(v[i]);
  return s;
}

struct Key {
  std::string name;
  std::function<void(SimulationConfig&, const std::string&)> set;
  std::function<std::string(const SimulationConfig&)> get;
};

Key real_key(std::string name, double SimulationConfig::*m) {
  return {std::move(name), [m](SimulationConfig& c, const std::string& v) { c.*m = to_double(v); },
          [m](const SimulationConfig& c) { return fmt(c.*m); }};
}

Key string_key(std::string name, std::string SimulationConfig::*m) {
  return {std::move(name), [m](SimulationConfig& c, const std::string& v) { c.*m = v; },
          [m](const SimulationConfig& c) { return c.*m; }};
}

Key size_key(std::string name, std::size_t SimulationConfig::*m) {
  return {std::move(name), [m](SimulationConfig& c, const std::string& v) { c.*m = to_unsigned(v); },
          [m](const SimulationConfig& c) { return std::to_string(c.*m); }};
}

const std::vector<Key>& keys() {
  static const std::vector<Key> table = [] {
    using C = SimulationConfig;
    std::vector<Key> k{
        size_key("dimension", &C::dimension),
        size_key("components", &C::components),
        string_key("scheme", &C::scheme),
        {"grid.a",
         [](C& c, const std::string& v) {
           c.grid_a.clear();
           for (const auto& s : split_list(v)) c.grid_a.push_back(to_double(s));
         },
         [](const C& c) { return join(c.grid_a, fmt); }},
        {"grid.b",
         [](C& c, const std::string& v) {
           c.grid_b.clear();
           for (const auto& s : split_list(v)) c.grid_b.push_back(to_double(s));
         },
         [](const C& c) { return join(c.grid_b, fmt); }},
        {"grid.M",
         [](C& c, const std::string& v) {
           c.grid_M.clear();
           for (const auto& s : split_list(v)) c.grid_M.push_back(to_unsigned(s));
         },
         [](const C& c) { return join(c.grid_M, [](std::size_t m) { return std::to_string(m); }); }},
        real_key("time.tau", &C::tau),
        real_key("time.t_max", &C::t_max),
        real_key("time.t0", &C::t0),
        string_key("potential.kind", &C::potential_kind),
        real_key("potential.V0", &C::V0),
        real_key("potential.L", &C::L),
        {"potential.theta_case",
         [](C& c, const std::string& v) { c.theta_case = static_cast<int>(to_unsigned(v)); },
         [](const C& c) { return std::to_string(c.theta_case); }},
        string_key("potential.V_expr", &C::V_expr),
        {"constants.c", [](C& c, const std::string& v) { c.constants.c = to_double(v); },
         [](const C& c) { return fmt(c.constants.c); }},
        {"constants.m", [](C& c, const std::string& v) { c.constants.m = to_double(v); },
         [](const C& c) { return fmt(c.constants.m); }},
        {"constants.e", [](C& c, const std::string& v) { c.constants.e = to_double(v); },
         [](const C& c) { return fmt(c.constants.e); }},
        string_key("initial.kind", &C::initial_kind),
        real_key("initial.k0", &C::k0),
        real_key("initial.x0", &C::x0),
        string_key("output.prefix", &C::output_prefix),
        size_key("output.snapshot_stride", &C::snapshot_stride),
        {"convergence.schemes", [](C& c, const std::string& v) { c.convergence_schemes = split_list(v); },
         [](const C& c) { return join(c.convergence_schemes, [](const std::string& s) { return s; }); }},
        real_key("convergence.tau0", &C::convergence_tau0),
        size_key("convergence.levels", &C::convergence_levels),
        string_key("convergence.reference", &C::convergence_reference),
        real_key("convergence.reference_tau", &C::convergence_reference_tau),
        size_key("commutator.samples", &C::commutator_samples),
        size_key("commutator.M", &C::commutator_M),
        {"commutator.seed", [](C& c, const std::string& v) { c.commutator_seed = to_unsigned(v); },
         [](const C& c) { return std::to_string(c.commutator_seed); }},
        real_key("commutator.tolerance", &C::commutator_tolerance),
    };
    for (std::size_t j = 0; j < 3; ++j) {
      k.push_back({"potential.A" + std::to_string(j + 1) + "_expr",
                   [j](C& c, const std::string& v) { c.A_expr[j] = v; }, [j](const C& c) { return c.A_expr[j]; }});
    }
    for (std::size_t j = 0; j < 4; ++j) {
      k.push_back({"initial.re" + std::to_string(j + 1),
                   [j](C& c, const std::string& v) { c.initial_re[j] = v; },
                   [j](const C& c) { return c.initial_re[j]; }});
      k.push_back({"initial.im" + std::to_string(j + 1),
                   [j](C& c, const std::string& v) { c.initial_im[j] = v; },
                   [j](const C& c) { return c.initial_im[j]; }});
    }
    return k;
  }();
  return table;
}

[[noreturn]] void fail(const std::string& key, const std::string& why) { throw ConfigError(key + ": " + why); }

void check_expr(const std::string& key, const std::string& src) {
  try {
    expr::parse(src);
  } catch (const expr::ParseError& e) {
    fail(key, e.what());
  }
}

}  // namespace

SimulationConfig parse_config(const std::string& text) {
  SimulationConfig cfg;
  std::set<std::string> seen;
  std::istringstream in(text);
  std::string line;
  for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    const std::string where = "line " + std::to_string(lineno);
    if (eq == std::string::npos) throw ConfigError(where + ": expected 'key = value'");
    const std::string key = trim(std::string_view(body).substr(0, eq));
    const std::string value = trim(std::string_view(body).substr(eq + 1));
    if (key.empty()) throw ConfigError(where + ": missing key");
    if (value.empty()) throw ConfigError(where + ": missing value for '" + key + "'");
    const auto& table = keys();
    const auto it = std::find_if(table.begin(), table.end(), [&](const Key& k) { return k.name == key; });
    if (it == table.end()) throw ConfigError(where + ": unknown key '" + key + "'");
    if (!seen.insert(key).second) throw ConfigError(where + ": duplicate key '" + key + "'");
    try {
      it->set(cfg, value);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(where + ": " + key + ": " + e.what());
    }
  }
  validate(cfg);
  return cfg;
}

SimulationConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parse_config(ss.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

void validate(const SimulationConfig& c) {
  if (c.dimension < 1 || c.dimension > 3) fail("dimension", "must be 1, 2 or 3");
  if (c.components != 2 && c.components != 4) fail("components", "must be 2 or 4");
  if (c.components == 2 && c.dimension == 3) fail("components", "two-component spinors need dimension 1 or 2");
  try {
    builtin_plan(c.scheme);
  } catch (const UnknownScheme& e) {
    fail("scheme", e.what());
  }
  auto per_axis = [&](const char* key, std::size_t n) {
    if (n != 1 && n != c.dimension) fail(key, "give one value or one per axis");
  };
  per_axis("grid.a", c.grid_a.size());
  per_axis("grid.b", c.grid_b.size());
  per_axis("grid.M", c.grid_M.size());
  for (std::size_t j = 0; j < c.dimension; ++j) {
    const double a = c.grid_a[std::min(j, c.grid_a.size() - 1)];
    const double b = c.grid_b[std::min(j, c.grid_b.size() - 1)];
    const std::size_t M = c.grid_M[std::min(j, c.grid_M.size() - 1)];
    if (!(b > a) || !std::isfinite(a) || !std::isfinite(b)) fail("grid.b", "must exceed grid.a on every axis");
    if (M % 2 != 0) fail("grid.M", "M must be even");
    if (M < 4) fail("grid.M", "M must be at least 4");
  }
  if (!(c.tau > 0.0) || !std::isfinite(c.tau)) fail("time.tau", "must be positive");
  if (!std::isfinite(c.t0)) fail("time.t0", "must be finite");
  if (!(c.t_max > c.t0) || !std::isfinite(c.t_max)) fail("time.t_max", "must exceed time.t0");
  try {
    step_count(c.t0, c.t_max, c.tau);
  } catch (const StepCountError& e) {
    fail("time.tau", e.what());
  }
  if (!(c.constants.c > 0.0)) fail("constants.c", "must be positive");
  if (!(c.constants.m >= 0.0)) fail("constants.m", "must be non-negative");
  if (!std::isfinite(c.constants.e)) fail("constants.e", "must be finite");

  const std::string& k = c.potential_kind;
  if (k == "td1d" || k == "klein") {
    if (c.dimension != 1) fail("potential.kind", k + " requires dimension 1");
    if (k == "klein" && !(c.L > 0.0)) fail("potential.L", "must be positive");
  } else if (k == "honeycomb") {
    if (c.dimension != 2) fail("potential.kind", "honeycomb requires dimension 2");
    if (c.theta_case < 1 || c.theta_case > 3) fail("potential.theta_case", "must be 1, 2 or 3");
  } else if (k == "custom") {
    check_expr("potential.V_expr", c.V_expr);
    for (std::size_t j = 0; j < 3; ++j) {
      const std::string key = "potential.A" + std::to_string(j + 1) + "_expr";
      check_expr(key, c.A_expr[j]);
      if (j >= c.dimension && trim(c.A_expr[j]) != "0") fail(key, "exceeds the dimension");
    }
  } else if (k != "zero") {
    fail("potential.kind", "unknown potential '" + k + "' (zero, td1d, klein, honeycomb, custom)");
  }

  const std::string& ik = c.initial_kind;
  if (ik == "gaussian_pair") {
    if (c.dimension > 2) fail("initial.kind", "gaussian_pair requires dimension 1 or 2");
  } else if (ik == "klein") {
    if (c.dimension != 1 || c.components != 2) fail("initial.kind", "klein requires dimension 1 and 2 components");
  } else if (ik == "custom") {
    for (std::size_t j = 0; j < 4; ++j) {
      check_expr("initial.re" + std::to_string(j + 1), c.initial_re[j]);
      check_expr("initial.im" + std::to_string(j + 1), c.initial_im[j]);
    }
  } else {
    fail("initial.kind", "unknown initial data '" + ik + "' (gaussian_pair, klein, custom)");
  }

  if (c.output_prefix.empty()) fail("output.prefix", "must not be empty");
  for (const auto& s : c.convergence_schemes) {
    try {
      builtin_plan(s);
    } catch (const UnknownScheme& e) {
      fail("convergence.schemes", e.what());
    }
  }
  if (!(c.convergence_tau0 > 0.0)) fail("convergence.tau0", "must be positive");
  if (c.convergence_levels < 2) fail("convergence.levels", "need at least two time steps");
  if (c.convergence_reference != "self") {
    try {
      builtin_plan(c.convergence_reference);
    } catch (const UnknownScheme& e) {
      fail("convergence.reference", e.what());
    }
  }
  if (!(c.convergence_reference_tau > 0.0)) fail("convergence.reference_tau", "must be positive");
  if (c.commutator_samples == 0) fail("commutator.samples", "must be positive");
  if (c.commutator_M < 4 || c.commutator_M % 2 != 0) fail("commutator.M", "must be even and at least 4");
  if (!(c.commutator_tolerance > 0.0)) fail("commutator.tolerance", "must be positive");
}

std::string dump_config(const SimulationConfig& cfg) {
  std::string out;
  for (const auto& k : keys()) out += k.name + " = " + k.get(cfg) + "\n";
  return out;
}

PeriodicGrid make_grid(const SimulationConfig& c) {
  std::vector<Axis> axes;
  for (std::size_t j = 0; j < c.dimension; ++j)
    axes.push_back(Axis{c.grid_a[std::min(j, c.grid_a.size() - 1)], c.grid_b[std::min(j, c.grid_b.size() - 1)],
                        c.grid_M[std::min(j, c.grid_M.size() - 1)]});
  return PeriodicGrid(std::move(axes));
}

PotentialModel make_model(const SimulationConfig& c) {
  const std::string& k = c.potential_kind;
  if (k == "zero") return PotentialModel::zero(c.dimension, c.constants);
  if (k == "td1d") return PotentialModel::time_dependent_1d(c.constants);
  if (k == "klein") return PotentialModel::klein_step(c.V0, c.L, c.constants);
  if (k == "honeycomb") return PotentialModel::honeycomb(c.theta_case, c.constants);
  if (k == "custom") {
    std::vector<std::string> A(c.A_expr.begin(), c.A_expr.begin() + static_cast<std::ptrdiff_t>(c.dimension));
    return PotentialModel::custom(c.dimension, c.V_expr, A, c.constants);
  }
  throw ConfigError("potential.kind: unknown potential '" + k + "'");
}

SpinorField make_initial(const SimulationConfig& c, const PeriodicGrid& grid) {
  if (c.initial_kind == "gaussian_pair") return gaussian_pair(grid, c.components);
  if (c.initial_kind == "klein") return klein_initial(c.k0, c.x0, c.constants.c, c.constants.m, grid);
  SpinorField f(grid, c.components);
  std::vector<expr::Expr> re, im;
  for (std::size_t j = 0; j < c.components; ++j) {
    re.push_back(expr::parse(c.initial_re[j]));
    im.push_back(expr::parse(c.initial_im[j]));
  }
  for (std::size_t p = 0; p < grid.size(); ++p) {
    const Vec3 x = grid.coordinates(p);
    const auto env = expr::Env::txyz(c.t0, x[0], x[1], x[2]);
    for (std::size_t j = 0; j < c.components; ++j) f.at(p, j) = complex(expr::eval(re[j], env), expr::eval(im[j], env));
  }
  return f;
}

}  // namespace dirac
