#include <doctest.h>

#include <numbers>

#include "dirac/potentials.hpp"
#include "oracles.hpp"

using namespace dirac;
using std::numbers::pi;

namespace {
PotentialSample at(const PotentialModel& m, double t, std::vector<double> x) { return m.evaluate(t, x); }
}  // namespace

TEST_CASE("time-dependent 1D formulas") {
  const auto m = PotentialModel::time_dependent_1d();
  const auto s = at(m, 0, {0});
  CHECK(s.V == 1.0);
  CHECK(s.A[0] == 1.0);
  const double t = 0.7, x = -1.3;
  const auto q = at(m, t, {x});
  CHECK(q.V == doctest::Approx((1 - t * x) / (1 + t * t * x * x)));
  CHECK(q.A[0] == doctest::Approx((t * x + 1) * (t * x + 1) / (1 + t * t * x * x)));
  CHECK(m.has_magnetic());
  CHECK(!m.time_independent());
}

TEST_CASE("time-dependent 1D gradients against finite differences") {
  const auto m = PotentialModel::time_dependent_1d();
  for (double t : {1.0, 0.3, -2.0})
    for (double x : {1.0, -0.4, 2.5}) {
      const auto g = m.evaluate_gradients(t, std::vector<double>{x});
      const double dV = oracle::derivative([&](double s) { return at(m, t, {s}).V; }, x);
      const double dA = oracle::derivative([&](double s) { return at(m, t, {s}).A[0]; }, x);
      CHECK(g.dV[0] == doctest::Approx(dV).epsilon(1e-7));
      CHECK(g.dA[0][0] == doctest::Approx(dA).epsilon(1e-7));
    }
}

TEST_CASE("Klein step") {
  const auto m = PotentialModel::klein_step(6.13e4, 1e-4);
  CHECK(at(m, 0, {0}).V == doctest::Approx(3.065e4));
  CHECK(at(m, 0, {1}).V == doctest::Approx(6.13e4));
  CHECK(at(m, 0, {-1}).V == doctest::Approx(0).scale(1));
  CHECK(m.evaluate_gradients(0, std::vector<double>{0}).dV[0] == doctest::Approx(6.13e4 / 2e-4));
  CHECK(!m.has_magnetic());
  CHECK(m.time_independent());
  CHECK_THROWS(PotentialModel::klein_step(1, 0));
}

TEST_CASE("honeycomb") {
  CHECK(honeycomb_theta(1, 0.37) == pi);
  CHECK(honeycomb_theta(2, 1.0 / 3) == doctest::Approx(4 * pi / 3));
  CHECK(honeycomb_theta(3, 2.0) == doctest::Approx(2 * pi));
  CHECK_THROWS(honeycomb_theta(4, 0));

  const auto m1 = PotentialModel::honeycomb(1);
  CHECK(at(m1, 0, {0, 0}).V == doctest::Approx(3.0));

  // periods 1/3 and 2 leave the field unchanged
  const auto m2 = PotentialModel::honeycomb(2), m3 = PotentialModel::honeycomb(3);
  for (auto x : {std::vector<double>{0.3, -0.2}, std::vector<double>{1.1, 0.7}}) {
    CHECK(at(m2, 1.0 / 3, x).V == doctest::Approx(at(m2, 0, x).V));
    CHECK(at(m3, 2.0, x).V == doctest::Approx(at(m3, 0, x).V));
    CHECK(at(m3, 0.3, x).V != doctest::Approx(at(m3, 0, x).V));
    const auto g = m2.evaluate_gradients(0.2, x);
    CHECK(g.dV[0] == doctest::Approx(oracle::derivative([&](double s) { return at(m2, 0.2, {s, x[1]}).V; }, x[0])));
    CHECK(g.dV[1] == doctest::Approx(oracle::derivative([&](double s) { return at(m2, 0.2, {x[0], s}).V; }, x[1])));
  }
  CHECK(!m1.has_magnetic());
  CHECK(m1.time_independent());
  CHECK(!m2.time_independent());
}

TEST_CASE("zero and custom models") {
  const auto z = PotentialModel::zero(3);
  const auto g = z.evaluate_gradients(1, std::vector<double>{1, 2, 3});
  CHECK(at(z, 1, {1, 2, 3}).V == 0.0);
  for (int j = 0; j < 3; ++j) {
    CHECK(g.dV[j] == 0.0);
    for (int k = 0; k < 3; ++k) CHECK(g.dA[k][j] == 0.0);
  }

  const auto c = PotentialModel::custom(2, "x*y + t", {"sin(y)", "x^2"});
  const auto s = at(c, 2, {3, 0.5});
  CHECK(s.V == doctest::Approx(3.5));
  CHECK(s.A[0] == doctest::Approx(std::sin(0.5)));
  CHECK(s.A[1] == doctest::Approx(9));
  const auto cg = c.evaluate_gradients(2, std::vector<double>{3, 0.5});
  CHECK(cg.dV[0] == doctest::Approx(0.5));
  CHECK(cg.dV[1] == doctest::Approx(3));
  CHECK(cg.dA[0][1] == doctest::Approx(std::cos(0.5)));
  CHECK(cg.dA[1][0] == doctest::Approx(6));
  CHECK(c.has_magnetic());
  CHECK(!PotentialModel::custom(1, "x", {"0"}).has_magnetic());
  CHECK(PotentialModel::custom(1, "x", {}).time_independent());
}

TEST_CASE("dimension mismatch and bad sources") {
  const auto m = PotentialModel::honeycomb(1);
  CHECK_THROWS_AS(m.evaluate(0, std::vector<double>{1}), std::invalid_argument);
  CHECK_THROWS_AS(m.evaluate_gradients(0, std::vector<double>{1, 2, 3}), std::invalid_argument);
  CHECK_THROWS(PotentialModel::custom(1, "x +", {}));
  CHECK_THROWS(PotentialModel::custom(1, "x", {"1", "2"}));
  // evaluation at the singular point surfaces as an error, not a NaN
  const auto bad = PotentialModel::custom(1, "log(x)", {});
  CHECK_THROWS(bad.evaluate(0, std::vector<double>{-1}));
}

TEST_CASE("sampling on a grid") {
  const auto m = PotentialModel::time_dependent_1d();
  const PeriodicGrid g({Axis{-2, 2, 8}});
  std::vector<double> V;
  std::array<std::vector<double>, 3> A;
  m.sample(0.5, g, V, A);
  REQUIRE(V.size() == 8);
  for (std::size_t p = 0; p < 8; ++p) {
    const auto s = at(m, 0.5, {g.coordinates(p)[0]});
    CHECK(V[p] == s.V);
    CHECK(A[0][p] == s.A[0]);
  }
  CHECK_THROWS(m.sample(0, PeriodicGrid::cube(2, 0, 1, 4), V, A));
}
