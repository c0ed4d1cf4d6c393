#include "dirac/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <functional>
#include <limits>
#include <map>
#include <mutex>
#include <numeric>
#include <numbers>
#include <thread>
#include <cstdio>

namespace dirac {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

/// Runs jobs 0..count-1 on `threads` workers; rethrows the first failure.
void run_jobs(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& job) {
  if (threads == 0) threads = default_thread_count();
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) job(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < threads; ++w)
    pool.emplace_back([&] {
      for (std::size_t i; (i = next.fetch_add(1)) < count;) {
        try {
          job(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          next = count;
        }
      }
    });
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace

unsigned default_thread_count() {
  if (const char* env = std::getenv("DIRAC_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

std::size_t cells_for_spacing(double a, double b, double h) {
  if (!(h > 0.0) || !(b > a)) throw std::invalid_argument("cells_for_spacing: need h > 0 and b > a");
  const double q = (b - a) / h;
  const double M = std::round(q);
  if (std::abs(q - M) > 1e-9 * std::max(1.0, M))
    throw std::invalid_argument("mesh size does not divide the domain length");
  const auto n = static_cast<std::size_t>(M);
  if (n % 2 != 0) throw std::invalid_argument("mesh size gives an odd number of grid points");
  return n;
}

// ---------------------------------------------------------------------------
// Klein paradox

KleinAnalytic klein_analytic(double k0, double V0, double L, double c, double m) {
  KleinAnalytic r;
  const double mc2 = m * c * c;
  r.E_k = std::sqrt(k0 * k0 * c * c + mc2 * mc2);
  r.in_region = V0 > r.E_k + mc2;
  if (!r.in_region) return r;
  r.k = std::sqrt((r.E_k - V0) * (r.E_k - V0) - mc2 * mc2) / c;
  r.k_prime = -std::sqrt(r.E_k * r.E_k - mc2 * mc2) / c;
  const double pi = std::numbers::pi;
  const double num = std::sinh(pi * r.k * L) * std::sinh(pi * r.k_prime * L);
  const double den = std::sinh(pi * (V0 / c + r.k + r.k_prime) * L / 2) * std::sinh(pi * (V0 / c - r.k - r.k_prime) * L / 2);
  r.T = -num / den;
  return r;
}

double klein_transmission_analytic(double k0, double V0, double L, double c, double m) {
  return klein_analytic(k0, V0, L, c, m).T;
}

SpinorField klein_initial(double k0, double x0, double c, double m, const PeriodicGrid& grid) {
  if (grid.dim() != 1) throw std::invalid_argument("klein_initial: grid must be one-dimensional");
  const double mc2 = m * c * c;
  const double C = c * k0 / (mc2 + std::sqrt(mc2 * mc2 + c * c * k0 * k0));
  SpinorField f(grid, 2);
  for (std::size_t p = 0; p < grid.size(); ++p) {
    const double x = grid.axis(0).point(p);
    const complex phi = std::polar(std::exp(-(x - x0) * (x - x0) / 4.0), k0 * x);
    f.at(p, 0) = phi;
    f.at(p, 1) = C * phi;
  }
  return f;
}

KleinReport klein_run(const KleinParams& prm, double h, double tau, std::string_view scheme) {
  KleinReport rep;
  rep.params = prm;
  rep.h = h;
  rep.tau = tau;
  const auto an = klein_analytic(prm.k0, prm.V0, prm.L, prm.c, prm.m);
  rep.E_k = an.E_k;
  rep.k = an.k;
  rep.k_prime = an.k_prime;
  rep.T_ana = an.T;
  rep.analytic_defined = an.in_region;

  const std::size_t M = cells_for_spacing(prm.a, prm.b, h);
  const PeriodicGrid grid({Axis{prm.a, prm.b, M}});
  const PhysicalConstants k{prm.c, prm.m, prm.e};
  const auto model = PotentialModel::klein_step(prm.V0, prm.L, k);
  auto plan = builtin_plan(scheme);
  rep.scheme = plan.name;
  SpinorField field = klein_initial(prm.k0, prm.x0, prm.c, prm.m, grid);

  const auto start = Clock::now();
  Stepper(grid, 2, model, std::move(plan)).evolve(field, 0.0, prm.t_max, tau);
  rep.seconds = seconds_since(start);

  // 0-based indices M/2 .. M-1, the x >= 0 half of the domain
  double right = 0.0, left = 0.0;
  for (std::size_t p = 0; p < M; ++p) {
    const double w = std::norm(field.at(p, 0)) + std::norm(field.at(p, 1));
    (p >= M / 2 ? right : left) += w;
  }
  const double total = right + left;
  rep.T_num = right / total;
  rep.reflected = left / total;
  rep.relative_error = rep.analytic_defined ? std::abs(rep.T_num - rep.T_ana) / rep.T_ana
                                            : std::numeric_limits<double>::quiet_NaN();
  return rep;
}

// ---------------------------------------------------------------------------
// Gaussian pair

SpinorField gaussian_pair(const PeriodicGrid& grid, std::size_t ncomp) {
  if (grid.dim() > 2) throw std::invalid_argument("gaussian_pair: grid must be 1D or 2D");
  SpinorField f(grid, ncomp);
  const std::size_t second = ncomp == 2 ? 1 : 3;
  for (std::size_t p = 0; p < grid.size(); ++p) {
    const Vec3 x = grid.coordinates(p);
    const double r2 = x[0] * x[0] + x[1] * x[1];
    const double s2 = (x[0] - 1.0) * (x[0] - 1.0) + x[1] * x[1];
    f.at(p, 0) = std::exp(-r2 / 2.0);
    f.at(p, second) = std::exp(-s2 / 2.0);
  }
  return f;
}

ConvergenceSetup td1d_setup(double a, double b, double h, double t_max) {
  const PeriodicGrid grid({Axis{a, b, cells_for_spacing(a, b, h)}});
  return {PotentialModel::time_dependent_1d(), gaussian_pair(grid), 0.0, t_max};
}

ConvergenceSetup honeycomb_setup(int theta_case, double a, double b, double h, double t_max) {
  const std::size_t M = cells_for_spacing(a, b, h);
  const PeriodicGrid grid(std::vector<Axis>(2, Axis{a, b, M}));
  return {PotentialModel::honeycomb(theta_case), gaussian_pair(grid), 0.0, t_max};
}

// ---------------------------------------------------------------------------
// Convergence studies

std::vector<double> halving_ladder(double tau0, std::size_t count) {
  std::vector<double> out;
  for (std::size_t i = 0; i < count; ++i) out.push_back(std::ldexp(tau0, -static_cast<int>(i)));
  return out;
}

double ConvergenceReport::tail_rate(std::string_view norm, std::size_t count) const {
  const std::vector<double>* r = nullptr;
  if (norm == "phi") r = &rate_phi;
  else if (norm == "rho") r = &rate_rho;
  else if (norm == "j") r = &rate_j;
  else throw std::invalid_argument("tail_rate: norm must be phi, rho or j");
  if (r->empty()) return std::numeric_limits<double>::quiet_NaN();
  count = std::min(count, r->size());
  double s = 0.0;
  for (std::size_t i = r->size() - count; i < r->size(); ++i) s += (*r)[i];
  return s / static_cast<double>(count);
}

std::vector<ConvergenceReport> convergence_study(const ConvergenceSetup& setup, const std::vector<SplitStepPlan>& schemes,
                                                 const std::vector<double>& taus, const ReferenceSpec& reference,
                                                 unsigned threads) {
  if (schemes.empty() || taus.empty()) throw std::invalid_argument("convergence_study: need schemes and time steps");
  const auto& grid = setup.initial.grid();
  const std::size_t ncomp = setup.initial.ncomp();

  // Reference jobs: one shared run, or one per scheme.
  std::vector<SplitStepPlan> ref_plans;
  if (reference.plan) ref_plans.push_back(*reference.plan);
  else ref_plans = schemes;
  for (double tau : taus) step_count(setup.t0, setup.t_max, tau);
  step_count(setup.t0, setup.t_max, reference.tau);

  std::vector<std::optional<SpinorField>> ref_fields(ref_plans.size());
  std::vector<double> ref_seconds(ref_plans.size());
  std::vector<std::optional<SpinorField>> cell_fields(schemes.size() * taus.size());
  std::vector<double> cell_seconds(cell_fields.size());

  // Longest jobs first so the pool drains evenly.
  std::vector<std::size_t> order(ref_plans.size() + cell_fields.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  auto cost = [&](std::size_t i) {
    if (i < ref_plans.size()) return 1.0 / reference.tau;
    return 1.0 / taus[(i - ref_plans.size()) % taus.size()];
  };
  std::stable_sort(order.begin(), order.end(), [&](std::size_t l, std::size_t r) { return cost(l) > cost(r); });

  run_jobs(order.size(), threads, [&](std::size_t slot) {
    const std::size_t i = order[slot];
    SpinorField f = setup.initial;
    const auto start = Clock::now();
    if (i < ref_plans.size()) {
      Stepper(grid, ncomp, setup.model, ref_plans[i]).evolve(f, setup.t0, setup.t_max, reference.tau);
      ref_seconds[i] = seconds_since(start);
      ref_fields[i] = std::move(f);
    } else {
      const std::size_t c = i - ref_plans.size();
      const std::size_t s = c / taus.size(), t = c % taus.size();
      Stepper(grid, ncomp, setup.model, schemes[s]).evolve(f, setup.t0, setup.t_max, taus[t]);
      cell_seconds[c] = seconds_since(start);
      cell_fields[c] = std::move(f);
    }
  });

  std::vector<ConvergenceReport> reports;
  for (std::size_t s = 0; s < schemes.size(); ++s) {
    ConvergenceReport rep;
    rep.scheme = schemes[s].name;
    const std::size_t r = reference.plan ? 0 : s;
    rep.reference_seconds = ref_seconds[r];
    for (std::size_t t = 0; t < taus.size(); ++t) {
      const std::size_t c = s * taus.size() + t;
      rep.cells.push_back({taus[t], error_norms(*cell_fields[c], *ref_fields[r]), cell_seconds[c]});
    }
    for (std::size_t t = 0; t + 1 < taus.size(); ++t) {
      const auto& e0 = rep.cells[t].errors;
      const auto& e1 = rep.cells[t + 1].errors;
      const double ratio = std::log2(taus[t] / taus[t + 1]);
      rep.rate_phi.push_back(std::log2(e0.phi / e1.phi) / ratio);
      rep.rate_rho.push_back(std::log2(e0.rho / e1.rho) / ratio);
      rep.rate_j.push_back(std::log2(e0.j / e1.j) / ratio);
    }
    reports.push_back(std::move(rep));
  }
  return reports;
}

double seconds_per_step(const ConvergenceSetup& setup, const SplitStepPlan& plan, double tau, std::size_t steps) {
  SpinorField f = setup.initial;
  Stepper stepper(f.grid(), f.ncomp(), setup.model, plan);
  stepper.step(f, setup.t0, tau);  // warm the plan and table caches
  const auto start = Clock::now();
  for (std::size_t n = 0; n < steps; ++n) stepper.step(f, setup.t0 + static_cast<double>(n) * tau, tau);
  return seconds_since(start) / static_cast<double>(std::max<std::size_t>(steps, 1));
}

// ---------------------------------------------------------------------------
// Honeycomb dynamics

std::vector<HoneycombSnapshot> honeycomb_dynamics(int theta_case, const PeriodicGrid& grid, double tau,
                                                  std::vector<double> times) {
  if (grid.dim() != 2) throw std::invalid_argument("honeycomb_dynamics: grid must be two-dimensional");
  std::sort(times.begin(), times.end());
  std::map<std::size_t, double> wanted;
  for (double t : times) wanted[step_count(0.0, t, tau)] = t;

  const auto model = PotentialModel::honeycomb(theta_case);
  SpinorField field = gaussian_pair(grid);
  std::vector<HoneycombSnapshot> out;
  auto record = [&](double t, const SpinorField& f) {
    auto d = probability_density(f);
    out.push_back({t, std::move(d.per_component[0]), std::move(d.per_component[1]), std::move(d.total), mass(f), f});
  };
  if (wanted.empty()) return out;
  const std::size_t last = wanted.rbegin()->first;
  if (last == 0) {
    record(0.0, field);
    return out;
  }
  std::size_t stride = 0;
  for (const auto& [n, t] : wanted) stride = std::gcd(stride, n);
  Stepper stepper(grid, 2, model, builtin_plan("s4c"));
  stepper.evolve(
      field, 0.0, static_cast<double>(last) * tau, tau,
      [&](std::size_t n, double, const SpinorField& f) {
        if (auto it = wanted.find(n); it != wanted.end()) record(it->second, f);
      },
      stride);
  return out;
}

}  // namespace dirac

// ---------------------------------------------------------------------------
// Double commutator checks

namespace dirac {

SpinorField random_band_limited_field(const PeriodicGrid& grid, std::size_t ncomp, std::mt19937_64& rng,
                                      int max_mode) {
  const std::size_t d = grid.dim();
  std::normal_distribution<double> normal;
  std::vector<std::array<int, 3>> modes;
  for (int l0 = -max_mode; l0 <= max_mode; ++l0)
    for (int l1 = d > 1 ? -max_mode : 0; l1 <= (d > 1 ? max_mode : 0); ++l1)
      for (int l2 = d > 2 ? -max_mode : 0; l2 <= (d > 2 ? max_mode : 0); ++l2) modes.push_back({l0, l1, l2});
  std::vector<complex> coef(modes.size() * ncomp);
  for (auto& c : coef) c = complex(normal(rng), normal(rng));

  SpinorField f(grid, ncomp);
  for (std::size_t p = 0; p < grid.size(); ++p) {
    const Vec3 x = grid.coordinates(p);
    for (std::size_t m = 0; m < modes.size(); ++m) {
      double phase = 0.0;
      for (std::size_t j = 0; j < d; ++j) {
        const Axis& ax = grid.axis(j);
        phase += 2.0 * std::numbers::pi * modes[m][j] * (x[j] - ax.a) / ax.length();
      }
      const complex e = std::polar(1.0, phase);
      for (std::size_t c = 0; c < ncomp; ++c) f.at(p, c) += coef[m * ncomp + c] * e;
    }
  }
  return f;
}

PotentialModel random_trig_potential(std::size_t dim, PhysicalConstants k, std::mt19937_64& rng, bool magnetic) {
  std::uniform_real_distribution<double> amp(-1.0, 1.0), wave(-2.0, 2.0), phase(0.0, 2.0 * std::numbers::pi);
  const char* vars[3] = {"x", "y", "z"};
  auto fmt = [](double v) {
    char b[40];
    std::snprintf(b, sizeof b, "(%.17g)", v);
    return std::string(b);
  };
  auto term = [&](const char* fn) {
    std::string arg = fmt(wave(rng)) + "*t + " + fmt(phase(rng));
    for (std::size_t j = 0; j < dim; ++j) arg += " + " + fmt(wave(rng)) + "*" + vars[j];
    return fmt(amp(rng)) + "*" + fn + "(" + arg + ")";
  };
  auto smooth = [&] { return fmt(amp(rng)) + " + " + term("sin") + " + " + term("cos"); };
  std::vector<std::string> A;
  const std::string V = smooth();
  if (magnetic)
    for (std::size_t j = 0; j < dim; ++j) A.push_back(smooth());
  return PotentialModel::custom(dim, V, A, k);
}

double commutator_relative_error(const PotentialModel& model, double t, const SpinorField& field) {
  const auto closed = double_commutator_coefficients(model, t, 1.0, field.grid(), field.ncomp()).apply(field);
  const auto brute = double_commutator_bruteforce(field, t, model);
  double diff = 0.0, ref = 0.0;
  for (std::size_t i = 0; i < brute.data().size(); ++i) {
    diff += std::norm(closed.data()[i] - brute.data()[i]);
    ref += std::norm(brute.data()[i]);
  }
  return ref > 0.0 ? std::sqrt(diff / ref) : std::sqrt(diff);
}

const std::vector<std::pair<std::size_t, std::size_t>>& commutator_cases() {
  static const std::vector<std::pair<std::size_t, std::size_t>> cases{{1, 2}, {1, 4}, {2, 2}, {2, 4}, {3, 4}};
  return cases;
}

std::vector<CommutatorCase> commutator_check(
    const std::function<PotentialModel(std::size_t dim, std::mt19937_64& rng)>& make_model, std::size_t M,
    std::size_t samples, std::uint64_t seed, double tolerance,
    const std::vector<std::pair<std::size_t, std::size_t>>& cases) {
  std::vector<CommutatorCase> out;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> time(0.0, 2.0);
  for (const auto& [dim, ncomp] : cases) {
    const auto grid = PeriodicGrid::cube(dim, -std::numbers::pi, std::numbers::pi, M);
    CommutatorCase c{dim, ncomp, samples, 0.0, true};
    for (std::size_t s = 0; s < samples; ++s) {
      const auto model = make_model(dim, rng);
      const auto field = random_band_limited_field(grid, ncomp, rng);
      const double err = commutator_relative_error(model, time(rng), field);
      c.max_relative_error = std::max(c.max_relative_error, err);
    }
    c.passed = c.max_relative_error <= tolerance;
    out.push_back(c);
  }
  return out;
}

}  // namespace dirac
