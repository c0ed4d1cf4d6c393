// Acceptance run: one line per criterion. Full-size variants run only with
// DIRAC_LONG_TESTS=1 and report SKIP otherwise.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "commutator_oracle.hpp"
#include "dirac/experiments.hpp"
#include "expr_trees.hpp"
#include "oracles.hpp"

using namespace dirac;

namespace {

int failures = 0;

void report(const std::string& id, bool pass, const std::string& detail) {
  std::printf("criterion %-4s %s  %s\n", id.c_str(), pass ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

void skip(const std::string& id, const std::string& detail) {
  std::printf("criterion %-4s SKIP  %s (set DIRAC_LONG_TESTS=1)\n", id.c_str(), detail.c_str());
  std::fflush(stdout);
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

bool long_tests() {
  const char* v = std::getenv("DIRAC_LONG_TESTS");
  return v && std::string(v) == "1";
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

bool in(double x, double lo, double hi) { return x >= lo && x <= hi; }

const ConvergenceReport& find(const std::vector<ConvergenceReport>& rs, const std::string& name) {
  for (const auto& r : rs)
    if (r.scheme == name) return r;
  throw std::runtime_error("no report for " + name);
}

// ---------------------------------------------------------------------------

void criterion1() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(20240101);
  std::uniform_real_distribution<double> time(0.0, 2.0);
  double worst = 0;
  std::string per_case;
  for (auto [dim, ncomp] : commutator_cases()) {
    const auto g = PeriodicGrid::cube(dim, -std::numbers::pi, std::numbers::pi, dim == 3 ? 8 : 16);
    double w = 0;
    for (int s = 0; s < 50; ++s) {
      const auto m = random_trig_potential(dim, {}, rng);
      w = std::max(w, oracle::closed_form_error(m, time(rng), random_band_limited_field(g, ncomp, rng)));
    }
    per_case += fmt(" %zuD/%zu:%.1e", dim, ncomp, w);
    worst = std::max(worst, w);
  }
  const double secs = seconds_since(t0);
  report("1", worst <= 1e-9 && secs < 30.0,
         fmt("commutator closed forms vs nested oracle, 5 cases x 50 fields, max rel err %.2e (tol 1e-9),%s, %.1f s "
             "(limit 30 s)",
             worst, per_case.c_str(), secs));
}

void criterion2() {
  const auto setup = td1d_setup(-64, 64, 1.0 / 16, 1.0);
  double worst = 0;
  std::string detail;
  for (const auto& name : builtin_scheme_names()) {
    SpinorField f = setup.initial;
    const double m0 = mass(f);
    Stepper(f.grid(), 2, setup.model, builtin_plan(name)).evolve(f, 0, 1000.0 / 128, 1.0 / 128);
    const double drift = std::abs(mass(f) - m0) / m0;
    worst = std::max(worst, drift);
    detail += fmt(" %s:%.1e", name.c_str(), drift);
  }
  report("2", worst <= 1e-12, fmt("mass drift over 1000 steps, every scheme, max %.2e (tol 1e-12):%s", worst,
                                  detail.c_str()));
}

// Criteria 3, 4 and 7 share one ladder and one reference.
void criteria_1d() {
  const double t_max = 2.0;
  const auto setup = td1d_setup(-64, 64, 1.0 / 16, t_max);
  std::vector<SplitStepPlan> schemes;
  for (const auto& n : builtin_scheme_names()) schemes.push_back(builtin_plan(n));
  schemes.push_back(with_zeroed_offsets(builtin_plan("s4c")));
  const auto taus = halving_ladder(0.5, 7);
  const auto t0 = std::chrono::steady_clock::now();
  const auto rs = convergence_study(setup, schemes, taus, ReferenceSpec{builtin_plan("s4c"), 1e-5});
  const double secs = seconds_since(t0);

  std::printf("# 1D ladder, domain (-64,64), h = 1/16, t = %.0f, reference S4c tau = 1e-5 (%.0f s total)\n", t_max,
              secs);
  for (const auto& r : rs) {
    std::printf("#   %-11s e_phi", r.scheme.c_str());
    for (const auto& c : r.cells) std::printf(" %.2e", c.errors.phi);
    std::printf("\n#   %-11s rate ", "");
    for (double v : r.rate_phi) std::printf(" %5.2f", v);
    std::printf("\n");
  }

  const auto& s4c = find(rs, "s4c");
  const double p = s4c.tail_rate("phi"), q = s4c.tail_rate("rho"), j = s4c.tail_rate("j");
  report("3", in(p, 3.7, 4.3) && in(q, 3.7, 4.3) && in(j, 3.7, 4.3),
         fmt("S4c desk ladder (t = 2, h = 1/16), last-three mean rates phi %.3f rho %.3f J %.3f (band [3.7, 4.3])", p,
             q, j));

  struct Band {
    const char* name;
    double lo, hi;
  };
  bool ok = true;
  std::string detail;
  for (auto b : {Band{"s1", 0.85, 1.15}, Band{"s2", 1.9, 2.1}, Band{"s4", 3.7, 4.3}, Band{"s4rk", 3.7, 4.3}}) {
    const double r = find(rs, b.name).tail_rate("phi");
    ok = ok && in(r, b.lo, b.hi);
    detail += fmt(" %s %.3f [%.2f, %.2f]", b.name, r, b.lo, b.hi);
  }
  report("4", ok, "scheme ladder, last-three mean e_phi rates:" + detail);

  const auto& frozen = find(rs, "s4c-frozen");
  const double fr = frozen.tail_rate("phi");
  report("7", fr <= 2.2, fmt("S4c with zeroed offsets, observed rate %.3f (must be <= 2.2; with offsets %.3f)", fr, p));
}

void criterion3_long() {
  if (!long_tests()) {
    skip("3L", "S4c at full size (t = 5, h = 1/64), e_phi at tau0/2^6 vs 5.94E-10");
    return;
  }
  const auto setup = td1d_setup(-64, 64, 1.0 / 64, 5.0);
  const auto rs =
      convergence_study(setup, {builtin_plan("s4c")}, halving_ladder(0.5, 7), ReferenceSpec{builtin_plan("s4c"), 1e-5});
  const double e = rs[0].cells[6].errors.phi, r = rs[0].tail_rate("phi");
  report("3L", in(e, 5.94e-10 / 3, 5.94e-10 * 3) && in(r, 3.7, 4.3),
         fmt("full-size 1D run: e_phi(1/128) = %.3e (5.94E-10 within x3), last-three rate %.3f", e, r));
}

void criterion5() {
  const KleinParams params;
  const auto r = klein_run(params, 1.0 / 512, 2e-5);
  report("5a", r.relative_error <= 0.02,
         fmt("Klein desk run h = 1/512, tau = 2e-5: T_ana %.6f, T_num %.6f, rel err %.3e (tol 2e-2), T_num + R - 1 = "
             "%.1e, %.0f s",
             r.T_ana, r.T_num, r.relative_error, r.T_num + r.reflected - 1.0, r.seconds));

  KleinParams low = params;
  low.V0 = 2e4;
  const auto b = klein_run(low, 1.0 / 512, 2e-5);
  report("5b", !b.analytic_defined && b.T_num <= 1e-2,
         fmt("Klein V0 = 2e4 below E_k + mc^2: T_num %.3e (tol 1e-2)", b.T_num));

  if (!long_tests()) {
    skip("5L", "Klein at h = 1/2048, tau = 5e-6, tolerance 0.5%");
    return;
  }
  const auto l = klein_run(params, 1.0 / 2048, 5e-6);
  report("5L", l.relative_error <= 0.005,
         fmt("Klein h = 1/2048, tau = 5e-6: T_num %.6f, rel err %.3e (tol 5e-3), %.0f s", l.T_num, l.relative_error,
             l.seconds));
}

// One ladder per honeycomb case on (-8,8)^2 at spacing h. Prints the e_phi
// rows and reports whether every tail rate is in [3.7, 4.3].
bool honeycomb_ladders(double h, const std::string& scheme, std::string& detail) {
  const auto taus = halving_ladder(1.0 / 8, 6);
  bool ok = true;
  for (int c = 1; c <= 3; ++c) {
    const auto setup = honeycomb_setup(c, -8, 8, h, 1.0);
    const auto rs = convergence_study(setup, {builtin_plan(scheme)}, taus, ReferenceSpec{std::nullopt, taus.back() / 32});
    const auto& r = rs[0];
    std::printf("#   %s h = 1/%g case %d e_phi", scheme.c_str(), 1.0 / h, c);
    for (const auto& cell : r.cells) std::printf(" %.2e", cell.errors.phi);
    std::printf("  rates");
    for (double v : r.rate_phi) std::printf(" %.2f", v);
    std::printf("\n");
    std::fflush(stdout);
    const double p = r.tail_rate("phi"), q = r.tail_rate("rho"), j = r.tail_rate("j");
    ok = ok && in(p, 3.7, 4.3) && in(q, 3.7, 4.3) && in(j, 3.7, 4.3);
    detail += fmt(" case %d: %.3f/%.3f/%.3f (final rung %.2f/%.2f/%.2f)", c, p, q, j, r.rate_phi.back(),
                  r.rate_rho.back(), r.rate_j.back());
  }
  return ok;
}

void criterion6() {
  std::string detail;
  const bool ok = honeycomb_ladders(1.0 / 8, "s4c", detail);
  report("6", ok, "2D honeycomb desk ladders (h = 1/8, t = 1, tau 1/8..1/256), last-three rates phi/rho/J:" + detail);

  // Diagnostics only, not counted. With A = 0 the continuous [W,[T,W]]
  // vanishes, but the spectral one does not when V*psi is under-resolved;
  // S4c then carries a tau^2 term that S4 (no commutator) does not.
  std::string d4, d16;
  honeycomb_ladders(1.0 / 8, "s4", d4);
  std::printf("# diagnostic: S4 at h = 1/8, last-three rates phi/rho/J:%s\n", d4.c_str());
  honeycomb_ladders(1.0 / 16, "s4c", d16);
  std::printf("# diagnostic: S4c at h = 1/16, last-three rates phi/rho/J:%s\n", d16.c_str());
  std::fflush(stdout);

  if (!long_tests()) {
    skip("6L", "2D full size ((-25,25)^2, h = 1/16, t = 3), e_phi at tau0/2^6 vs 3.41E-9");
    return;
  }
  const auto setup = honeycomb_setup(1, -25, 25, 1.0 / 16, 3.0);
  const auto rs =
      convergence_study(setup, {builtin_plan("s4c")}, halving_ladder(0.5, 7), ReferenceSpec{builtin_plan("s4c"), 1e-4});
  const double e = rs[0].cells[6].errors.phi;
  report("6L", in(e, 3.41e-9 / 3, 3.41e-9 * 3), fmt("2D full size, case 1: e_phi(1/128) = %.3e (3.41E-9 within x3)", e));
}

void criterion8() {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  double worst_exp = 0;
  for (int n = 0; n < 500; ++n) {
    const double v0 = u(rng), s = u(rng);
    const Vec3 b{u(rng), u(rng), u(rng)};
    Matrix2 gen = -kI * v0 * Matrix2::identity();
    for (int j = 0; j < 3; ++j) gen -= kI * b[j] * oracle::sigma(j + 1);
    worst_exp = std::max(worst_exp, max_abs_diff(exp_pauli_affine(v0, b, s), oracle::expm(gen, s)));
  }
  for (int n = 0; n < 500; ++n) {
    const double v0 = u(rng), bc = u(rng), s = u(rng);
    const Vec3 a{u(rng), u(rng), u(rng)};
    Matrix4 gen = -kI * v0 * Matrix4::identity() - kI * bc * oracle::beta();
    for (int j = 0; j < 3; ++j) gen += kI * a[j] * oracle::alpha(j + 1);
    worst_exp = std::max(worst_exp, max_abs_diff(exp_dirac_affine(v0, a, bc, s), oracle::expm(gen, s)));
  }

  oracle::TreeGen gen(808);
  std::uniform_real_distribution<double> pt(-1.0, 1.0);
  double worst_d = 0;
  std::size_t checked = 0;
  for (int n = 0; n < 500; ++n) {
    const auto e = gen(4);
    const auto v = static_cast<expr::Var>(n % 4);
    const auto d = expr::differentiate(e, v);
    const auto k = static_cast<std::size_t>(v);
    for (int i = 0; i < 10; ++i) {
      auto env = expr::Env::txyz(pt(rng), pt(rng), pt(rng), pt(rng));
      try {
        const double sym = expr::eval(d, env);
        const double fd = oracle::derivative_adaptive(
            [&](double s) {
              auto shifted = env;
              shifted.values[k] = s;
              return expr::eval(e, shifted);
            },
            env.values[k]);
        worst_d = std::max(worst_d, std::abs(sym - fd) / std::max(1.0, std::abs(sym)));
        ++checked;
      } catch (const expr::EvalError&) {
      }
    }
  }
  report("8", worst_exp <= 1e-12 && worst_d <= 1e-6 && checked >= 4500,
         fmt("structured exponentials, 1000 cases, max err %.2e (tol 1e-12); symbolic derivatives, 500 trees x 10 "
             "points (%zu evaluable), max rel err %.2e (tol 1e-6)",
             worst_exp, checked, worst_d));
}

void cost_property() {
  const auto s1 = td1d_setup(-64, 64, 1.0 / 16, 1.0);
  const double a1 = seconds_per_step(s1, builtin_plan("s4c"), 1.0 / 128, 400);
  const double b1 = seconds_per_step(s1, builtin_plan("s2"), 1.0 / 128, 400);
  const auto s2 = honeycomb_setup(2, -8, 8, 1.0 / 8, 1.0);
  const double a2 = seconds_per_step(s2, builtin_plan("s4c"), 1.0 / 128, 100);
  const double b2 = seconds_per_step(s2, builtin_plan("s2"), 1.0 / 128, 100);
  report("cost", a1 / b1 <= 2.5 && a2 / b2 <= 2.5,
         fmt("S4c/S2 cost per step: 1D M = 2048 %.2f (%.3f ms), 2D M = 128^2 %.2f (%.3f ms), limit 2.5", a1 / b1,
             a1 * 1e3, a2 / b2, a2 * 1e3));
}

}  // namespace

int main() {
  std::printf("# worker threads: %u\n", default_thread_count());
  try {
    criterion1();
    criterion2();
    criteria_1d();
    criterion3_long();
    criterion5();
    criterion6();
    criterion8();
    cost_property();
  } catch (const std::exception& e) {
    std::printf("acceptance aborted: %s\n", e.what());
    return 2;
  }
  std::printf("# %d failing\n", failures);
  return failures == 0 ? 0 : 1;
}
