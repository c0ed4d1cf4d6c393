#include <doctest.h>

#include <cmath>

#include "dirac/experiments.hpp"
#include "dirac/integrators.hpp"
#include "oracles.hpp"

using namespace dirac;

namespace {

Coefficient q(std::int64_t n, std::int64_t d = 1) { return Coefficient::rational(n, d); }

std::vector<std::optional<Coefficient>> offsets(const SplitStepPlan& p) {
  std::vector<std::optional<Coefficient>> out;
  for (const auto& f : p.factors)
    if (f.kind != FactorKind::Kinetic) out.push_back(f.offset);
  return out;
}

}  // namespace

TEST_CASE("rationals") {
  CHECK(Rational(2, 4) == Rational(1, 2));
  CHECK(Rational(3, -6) == Rational(-1, 2));
  CHECK(Rational(1, 6) + Rational(1, 2) == Rational(2, 3));
  CHECK(Rational(4, 2).str() == "2");
  CHECK(Rational(-2, 3).str() == "-2/3");
  CHECK_THROWS(Rational(1, 0));
  CHECK((q(1, 2) + Coefficient::real(0.25L)).approx == doctest::Approx(0.75));
  CHECK(!(q(1, 2) + Coefficient::real(0.25L)).is_exact());
}

TEST_CASE("offsets are the kinetic sums applied before each potential factor") {
  const auto s1 = builtin_plan("s1");
  CHECK(offsets(s1) == std::vector<std::optional<Coefficient>>{q(0)});
  const auto s2 = builtin_plan("S2");
  CHECK(offsets(s2) == std::vector<std::optional<Coefficient>>{q(0), q(1)});
  const auto s4c = builtin_plan("s4c");
  CHECK(offsets(s4c) == std::vector<std::optional<Coefficient>>{q(0), q(1, 2), q(1)});
  CHECK(s4c.factors[2].kind == FactorKind::CompactPotential);
  CHECK(s4c.factors[2].coefficient == q(2, 3));
  CHECK(s4c.kinetic_sum() == q(1));
  CHECK(s4c.potential_sum() == q(1));
  CHECK(!s4c.has_negative_coefficient());
  CHECK(s4c.order == 4);
  for (const auto& f : s4c.factors)
    if (f.offset) CHECK(f.offset->is_exact());

  // kinetic factors carry no offset
  for (const auto& f : s2.factors) CHECK(f.offset.has_value() == (f.kind != FactorKind::Kinetic));
}

TEST_CASE("fourth-order plans") {
  const long double w1 = forest_ruth_w1(), w0 = 1 - 2 * w1;
  CHECK(static_cast<double>(w1) == doctest::Approx(1.3512071919596576));
  const auto s4 = builtin_plan("s4");
  CHECK(s4.has_negative_coefficient());
  const auto o = offsets(s4);
  REQUIRE(o.size() == 4);
  CHECK(o[1]->value() == doctest::Approx(double(w1)));
  CHECK(o[2]->value() == doctest::Approx(double(w1 + w0)));
  CHECK(std::abs(s4.kinetic_sum().approx - 1) < 1e-18L);
  CHECK(std::abs(s4.potential_sum().approx - 1) < 1e-18L);

  const auto rk = builtin_plan("s4rk");
  CHECK(std::abs(rk.kinetic_sum().approx - 1) < 1e-18L);
  CHECK(std::abs(rk.potential_sum().approx - 1) < 1e-18L);
  CHECK(rk.factors.size() == 13);
  CHECK(offsets(rk)[0]->value() == doctest::Approx(0.0792036964311957));
}

TEST_CASE("assigning offsets by hand and freezing them") {
  SplitStepPlan p;
  p.name = "custom";
  p.factors = {{FactorKind::Kinetic, q(1, 3), {}}, {FactorKind::Potential, q(1), {}}, {FactorKind::Kinetic, q(2, 3), {}}};
  CHECK(!p.offsets_assigned());
  CHECK_THROWS(Stepper(PeriodicGrid::cube(1, 0, 1, 8), 2, PotentialModel::zero(1), p));
  const auto a = assign_time_offsets(p);
  CHECK(a.offsets_assigned());
  CHECK(*a.factors[1].offset == q(1, 3));
  const auto frozen = with_zeroed_offsets(builtin_plan("s4c"));
  CHECK(frozen.name == "s4c-frozen");
  for (const auto& o : offsets(frozen)) CHECK(*o == q(0));
  CHECK_THROWS_AS(builtin_plan("s3"), UnknownScheme);
  CHECK(builtin_scheme_names().size() == 5);
}

TEST_CASE("step counts") {
  CHECK(step_count(0, 1, 0.1) == 10);
  CHECK(step_count(0, 2, 1e-5) == 200000);
  CHECK(step_count(0, 0.22, 2e-5) == 11000);
  CHECK(step_count(0, 5, 1.0 / 128) == 640);
  CHECK(step_count(1, 1, 0.3) == 0);
  CHECK_THROWS_AS(step_count(0, 1, 0.3), StepCountError);
  CHECK_THROWS_AS(step_count(0, 1, 0), StepCountError);
  CHECK_THROWS_AS(step_count(1, 0, 0.1), StepCountError);
}

TEST_CASE("free evolution equals one kinetic step of the full length") {
  std::mt19937_64 rng(1);
  const auto grid = PeriodicGrid::cube(1, -16, 16, 256);
  const auto f0 = random_band_limited_field(grid, 2, rng, 20);
  const auto zero = PotentialModel::zero(1);
  const auto want = kinetic_step(f0, 2.0);
  for (const auto& name : builtin_scheme_names()) {
    const auto got = evolve(f0, 0, 2, 1.0 / 64, builtin_plan(name), zero);
    CHECK_MESSAGE(oracle::rel_l2(got.data(), want.data()) <= 1e-11, name);
  }
}

TEST_CASE("mass is conserved by every scheme over 1000 steps") {
  const auto setup = td1d_setup(-16, 16, 1.0 / 8, 1.0);
  for (const auto& name : builtin_scheme_names()) {
    SpinorField f = setup.initial;
    const double m0 = mass(f);
    Stepper(f.grid(), 2, setup.model, builtin_plan(name)).evolve(f, 0, 10, 0.01);
    CHECK_MESSAGE(std::abs(mass(f) - m0) / m0 <= 1e-12, name);
  }
}

TEST_CASE("evolve: observer schedule and fusing match plain stepping") {
  const auto setup = td1d_setup(-16, 16, 1.0 / 8, 1.0);
  for (const char* name : {"s2", "s4c", "s4"}) {
    Stepper stepper(setup.initial.grid(), 2, setup.model, builtin_plan(name));
    SpinorField by_step = setup.initial;
    std::vector<SpinorField> stepped{by_step};
    for (int n = 0; n < 10; ++n) {
      stepper.step(by_step, n * 0.1, 0.1);
      stepped.push_back(by_step);
    }
    SpinorField f = setup.initial;
    std::vector<std::size_t> seen;
    std::vector<double> times;
    stepper.evolve(
        f, 0, 1, 0.1,
        [&](std::size_t n, double t, const SpinorField& g) {
          seen.push_back(n);
          times.push_back(t);
          CHECK(oracle::rel_l2(g.data(), stepped[n].data()) < 1e-13);
        },
        4);
    CHECK(seen == std::vector<std::size_t>{0, 4, 8, 10});
    CHECK(times[1] == doctest::Approx(0.4));
    CHECK(oracle::rel_l2(f.data(), by_step.data()) < 1e-13);

    // no observer: the final field is the same
    SpinorField g = setup.initial;
    stepper.evolve(g, 0, 1, 0.1);
    CHECK(oracle::rel_l2(g.data(), by_step.data()) < 1e-13);
  }
}

TEST_CASE("a single step of the free functions") {
  const auto setup = td1d_setup(-8, 8, 1.0 / 4, 1.0);
  const auto one = step(setup.initial, 0.5, 0.1, builtin_plan("s2"), setup.model);
  CHECK(mass(one) == doctest::Approx(mass(setup.initial)).epsilon(1e-13));
  CHECK(oracle::max_abs(step(setup.initial, 0, 0, builtin_plan("s2"), setup.model).data(), setup.initial.data()) ==
        0.0);
}

TEST_CASE("S2 with time offsets is second order, S1 first") {
  const auto setup = td1d_setup(-16, 16, 1.0 / 8, 1.0);
  const auto ref = evolve(setup.initial, 0, 1, 1.0 / 2048, builtin_plan("s4c"), setup.model);
  for (auto [name, order] : {std::pair<const char*, double>{"s1", 1}, {"s2", 2}}) {
    const auto a = evolve(setup.initial, 0, 1, 1.0 / 32, builtin_plan(name), setup.model);
    const auto b = evolve(setup.initial, 0, 1, 1.0 / 64, builtin_plan(name), setup.model);
    const double rate = std::log2(error_norms(a, ref).phi / error_norms(b, ref).phi);
    CHECK_MESSAGE(std::abs(rate - order) < 0.15, name, " rate ", rate);
  }
}
