// diracsim: command-line driver for the split-step Dirac solver.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "dirac/config.hpp"
#include "dirac/experiments.hpp"
#include "dirac/integrators.hpp"
#include "dirac/snapshot.hpp"

using namespace dirac;
using nlohmann::ordered_json;

namespace {

std::string sci(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15e", x);
  return buf;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << text;
}

std::string snapshot_name(const std::string& prefix, std::size_t n) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "_%08zu.dspn", n);
  return prefix + buf;
}

int cmd_run(const std::string& path) {
  const auto cfg = load_config(path);
  const auto grid = make_grid(cfg);
  const auto model = make_model(cfg);
  SpinorField field = make_initial(cfg, grid);
  const double m0 = mass(field);
  const std::size_t steps = step_count(cfg.t0, cfg.t_max, cfg.tau);
  const std::size_t stride = cfg.snapshot_stride ? cfg.snapshot_stride : steps;

  std::size_t written = 0;
  Stepper stepper(grid, cfg.components, model, builtin_plan(cfg.scheme));
  const auto start = std::chrono::steady_clock::now();
  stepper.evolve(
      field, cfg.t0, cfg.t_max, cfg.tau,
      [&](std::size_t n, double t, const SpinorField& f) {
        write_snapshot(snapshot_name(cfg.output_prefix, n), f, t);
        ++written;
      },
      stride);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  const double m1 = mass(field);
  ordered_json j;
  j["scheme"] = stepper.plan().name;
  j["steps"] = steps;
  j["t_final"] = cfg.t_max;
  j["initial_mass"] = m0;
  j["final_mass"] = m1;
  j["relative_mass_drift"] = std::abs(m1 - m0) / m0;
  j["snapshots"] = written;
  j["seconds"] = seconds;
  write_text(cfg.output_prefix + "_summary.json", j.dump(2) + "\n");
  std::cout << j.dump(2) << "\n";
  if (!std::isfinite(m1)) {
    std::cerr << "error: evolution produced non-finite values\n";
    return 1;
  }
  return 0;
}

int cmd_convergence(const std::string& path) {
  const auto cfg = load_config(path);
  const auto grid = make_grid(cfg);
  ConvergenceSetup setup{make_model(cfg), make_initial(cfg, grid), cfg.t0, cfg.t_max};
  std::vector<SplitStepPlan> schemes;
  for (const auto& s : cfg.convergence_schemes) schemes.push_back(builtin_plan(s));
  ReferenceSpec ref;
  ref.tau = cfg.convergence_reference_tau;
  if (cfg.convergence_reference != "self") ref.plan = builtin_plan(cfg.convergence_reference);
  const auto taus = halving_ladder(cfg.convergence_tau0, cfg.convergence_levels);
  const auto reports = convergence_study(setup, schemes, taus, ref);

  std::string csv = "scheme,tau,e_phi,rate_phi,e_rho,rate_rho,e_j,rate_j,seconds\n";
  for (const auto& r : reports) {
    for (std::size_t i = 0; i < r.cells.size(); ++i) {
      const auto& c = r.cells[i];
      auto rate = [&](const std::vector<double>& v) { return i == 0 ? std::string() : sci(v[i - 1]); };
      csv += r.scheme + "," + sci(c.tau) + "," + sci(c.errors.phi) + "," + rate(r.rate_phi) + "," +
             sci(c.errors.rho) + "," + rate(r.rate_rho) + "," + sci(c.errors.j) + "," + rate(r.rate_j) + "," +
             sci(c.seconds) + "\n";
    }
  }
  write_text(cfg.output_prefix + "_convergence.csv", csv);
  std::cout << csv;
  for (const auto& r : reports)
    if (!std::isfinite(r.cells.back().errors.phi)) return 1;
  return 0;
}

int cmd_klein(const std::string& path) {
  const auto cfg = load_config(path);
  if (cfg.dimension != 1 || cfg.components != 2) throw ConfigError("klein needs dimension 1 and 2 components");
  if (cfg.grid_M.size() != 1) throw ConfigError("grid.M: klein takes a single axis");
  KleinParams p;
  p.k0 = cfg.k0;
  p.x0 = cfg.x0;
  p.L = cfg.L;
  p.V0 = cfg.V0;
  p.c = cfg.constants.c;
  p.m = cfg.constants.m;
  p.e = cfg.constants.e;
  p.a = cfg.grid_a[0];
  p.b = cfg.grid_b[0];
  p.t_max = cfg.t_max;
  if (cfg.t0 != 0.0) throw ConfigError("time.t0: klein runs start at t = 0");
  const double h = (p.b - p.a) / static_cast<double>(cfg.grid_M[0]);
  const auto r = klein_run(p, h, cfg.tau, cfg.scheme);

  ordered_json j;
  j["k0"] = r.params.k0;
  j["V0"] = r.params.V0;
  j["L"] = r.params.L;
  j["E_k"] = r.E_k;
  j["T_ana"] = r.T_ana;
  j["T_num"] = r.T_num;
  j["rel_err"] = r.analytic_defined ? ordered_json(r.relative_error) : ordered_json(nullptr);
  j["analytic_defined"] = r.analytic_defined;
  j["seconds"] = r.seconds;
  write_text(cfg.output_prefix + "_klein.json", j.dump(2) + "\n");
  std::cout << j.dump(2) << "\n";
  return std::isfinite(r.T_num) ? 0 : 1;
}

int cmd_commutator(const std::string& path, bool random_potentials) {
  const auto cfg = load_config(path);
  std::function<PotentialModel(std::size_t, std::mt19937_64&)> make;
  auto cases = commutator_cases();
  if (random_potentials) {
    make = [&](std::size_t dim, std::mt19937_64& rng) { return random_trig_potential(dim, cfg.constants, rng); };
  } else if (cfg.potential_kind == "zero") {
    make = [&](std::size_t dim, std::mt19937_64&) { return PotentialModel::zero(dim, cfg.constants); };
  } else if (cfg.potential_kind == "custom") {
    // the configured expressions, restricted to each case's dimension
    make = [&](std::size_t dim, std::mt19937_64&) {
      std::vector<std::string> A(cfg.A_expr.begin(), cfg.A_expr.begin() + static_cast<std::ptrdiff_t>(dim));
      return PotentialModel::custom(dim, cfg.V_expr, A, cfg.constants);
    };
  } else {
    const auto model = make_model(cfg);
    make = [model](std::size_t, std::mt19937_64&) { return model; };
    std::erase_if(cases, [&](const auto& c) { return c.first != model.dim(); });
  }
  const auto results = commutator_check(make, cfg.commutator_M, cfg.commutator_samples, cfg.commutator_seed,
                                        cfg.commutator_tolerance, cases);
  std::string csv = "dimension,components,samples,max_rel_error,status\n";
  bool ok = true;
  for (const auto& r : results) {
    csv += std::to_string(r.dim) + "," + std::to_string(r.ncomp) + "," + std::to_string(r.samples) + "," +
           sci(r.max_relative_error) + "," + (r.passed ? "pass" : "fail") + "\n";
    ok = ok && r.passed;
  }
  write_text(cfg.output_prefix + "_commutator.csv", csv);
  std::cout << csv;
  return ok ? 0 : 1;
}

int cmd_plan(const std::string& scheme) {
  const auto plan = builtin_plan(scheme);
  std::cout << "scheme " << plan.name << ", order " << plan.order << "\n";
  std::cout << "# factors in application order; offsets are multiples of tau past t_n\n";
  for (std::size_t i = 0; i < plan.factors.size(); ++i) {
    const auto& f = plan.factors[i];
    std::cout << i << "  " << factor_kind_name(f.kind) << "  coef " << f.coefficient.str();
    if (f.offset) std::cout << "  offset " << f.offset->str();
    std::cout << "\n";
  }
  std::cout << "kinetic sum " << plan.kinetic_sum().str() << ", potential sum " << plan.potential_sum().str() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Split-step Fourier solver for the Dirac equation with time-dependent potentials"};
  app.require_subcommand(1);
  std::string config;
  bool random_potentials = false;
  std::string scheme;

  auto* run = app.add_subcommand("run", "evolve a configuration, write snapshots and a summary");
  run->add_option("config", config, "configuration file")->required();
  auto* conv = app.add_subcommand("convergence", "time-step ladder study, writes CSV");
  conv->add_option("config", config, "configuration file")->required();
  auto* klein = app.add_subcommand("klein", "Klein paradox transmission run, writes JSON");
  klein->add_option("config", config, "configuration file")->required();
  auto* comm = app.add_subcommand("commutator-check", "closed-form double commutators against brute force");
  comm->add_option("config", config, "configuration file")->required();
  comm->add_flag("--random-potentials", random_potentials, "use random trigonometric potentials");
  auto* plan = app.add_subcommand("plan", "print a scheme's factors and time offsets");
  plan->add_option("scheme", scheme, "s1, s2, s4, s4rk or s4c")->required();

  CLI11_PARSE(app, argc, argv);
  try {
    if (*run) return cmd_run(config);
    if (*conv) return cmd_convergence(config);
    if (*klein) return cmd_klein(config);
    if (*comm) return cmd_commutator(config, random_potentials);
    if (*plan) return cmd_plan(scheme);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
