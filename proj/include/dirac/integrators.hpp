#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "dirac/fields.hpp"
#include "dirac/potentials.hpp"
#include "dirac/propagators.hpp"

namespace dirac {

/// Normalised fraction with a positive denominator.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  Rational() = default;
  Rational(std::int64_t n, std::int64_t d = 1);

  long double value() const { return static_cast<long double>(num) / static_cast<long double>(den); }
  std::string str() const;

  friend Rational operator+(const Rational& l, const Rational& r);
  friend bool operator==(const Rational&, const Rational&) = default;
};

/// A multiple of tau: an exact fraction when one exists, otherwise a long
/// double. Sums stay exact as long as both operands are.
struct Coefficient {
  std::optional<Rational> exact;
  long double approx = 0.0L;

  static Coefficient rational(std::int64_t num, std::int64_t den = 1);
  static Coefficient real(long double v);

  double value() const { return static_cast<double>(approx); }
  bool is_exact() const { return exact.has_value(); }
  std::string str() const;

  friend Coefficient operator+(const Coefficient& l, const Coefficient& r);
  friend bool operator==(const Coefficient& l, const Coefficient& r);
};

enum class FactorKind { Kinetic, Potential, CompactPotential };

std::string_view factor_kind_name(FactorKind k);

struct PlanFactor {
  FactorKind kind = FactorKind::Kinetic;
  Coefficient coefficient;
  /// Evaluation time of a potential factor as a multiple of tau past t_n;
  /// empty for kinetic factors and before assign_time_offsets.
  std::optional<Coefficient> offset;
};

/// Factors listed in application order (rightmost operator first).
struct SplitStepPlan {
  std::string name;
  int order = 0;
  std::vector<PlanFactor> factors;

  bool offsets_assigned() const;
  Coefficient kinetic_sum() const;
  Coefficient potential_sum() const;
  bool has_negative_coefficient() const;
};

/// Each potential factor is evaluated at the sum of the kinetic coefficients
/// applied before it.
SplitStepPlan assign_time_offsets(SplitStepPlan plan);

/// Potential factors all evaluated at t_n. Only useful to show that the
/// offsets matter.
SplitStepPlan with_zeroed_offsets(SplitStepPlan plan);

class UnknownScheme : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// "s1", "s2", "s4", "s4rk", "s4c" (case-insensitive).
SplitStepPlan builtin_plan(std::string_view scheme);
const std::vector<std::string>& builtin_scheme_names();

/// Forest-Ruth weights w1 = 1/(2 - 2^(1/3)), w0 = 1 - 2 w1.
long double forest_ruth_w1();

class StepCountError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// (t_max - t0)/tau as an integer; throws StepCountError unless the quotient
/// is within a few ulps of one.
std::size_t step_count(double t0, double t_max, double tau);

using Observer = std::function<void(std::size_t n, double t, const SpinorField& field)>;

/// Applies a plan with propagators bound to one grid and model. The model
/// must outlive the stepper.
class Stepper {
 public:
  Stepper(const PeriodicGrid& grid, std::size_t ncomp, const PotentialModel& model, SplitStepPlan plan);

  const SplitStepPlan& plan() const { return plan_; }

  /// One step from t_n to t_n + tau, in place.
  void step(SpinorField& field, double t_n, double tau);

  /// Steps from t0 to t_max. The observer sees (n, t_n, field) whenever
  /// n % stride == 0 and at the final step. When the last factor of a step and
  /// the first factor of the next are potential factors at the same instant
  /// they are fused into one.
  void evolve(SpinorField& field, double t0, double t_max, double tau, const Observer& observer = {},
              std::size_t stride = 1);

 private:
  void apply_factor(SpinorField& field, const PlanFactor& f, double coef, double t_n, double tau);
  bool fusable() const;

  SplitStepPlan plan_;
  KineticPropagator kinetic_;
  PotentialPropagator potential_;
};

SpinorField step(const SpinorField& field, double t_n, double tau, const SplitStepPlan& plan,
                 const PotentialModel& model);

SpinorField evolve(const SpinorField& field0, double t0, double t_max, double tau, const SplitStepPlan& plan,
                   const PotentialModel& model, const Observer& observer = {}, std::size_t stride = 1);

}  // namespace dirac
