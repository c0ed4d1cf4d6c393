#include "dirac/integrators.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>

namespace dirac {

Rational::Rational(std::int64_t n, std::int64_t d) {
  if (d == 0) throw std::invalid_argument("Rational: zero denominator");
  if (d < 0) {
    n = -n;
    d = -d;
  }
  const std::int64_t g = std::gcd(n, d);
  num = g ? n / g : 0;
  den = g ? d / g : 1;
}

Rational operator+(const Rational& l, const Rational& r) {
  const std::int64_t g = std::lcm(l.den, r.den);
  return Rational(l.num * (g / l.den) + r.num * (g / r.den), g);
}

std::string Rational::str() const { return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den); }

Coefficient Coefficient::rational(std::int64_t num, std::int64_t den) {
  Coefficient c;
  c.exact = Rational(num, den);
  c.approx = c.exact->value();
  return c;
}

Coefficient Coefficient::real(long double v) {
  Coefficient c;
  c.approx = v;
  return c;
}

Coefficient operator+(const Coefficient& l, const Coefficient& r) {
  if (l.exact && r.exact) {
    const Rational s = *l.exact + *r.exact;
    return Coefficient::rational(s.num, s.den);
  }
  return Coefficient::real(l.approx + r.approx);
}

bool operator==(const Coefficient& l, const Coefficient& r) {
  if (l.exact && r.exact) return *l.exact == *r.exact;
  return l.approx == r.approx;
}

std::string Coefficient::str() const {
  if (exact) return exact->str();
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.19Lg", approx);
  return buf;
}

std::string_view factor_kind_name(FactorKind k) {
  switch (k) {
    case FactorKind::Kinetic: return "kinetic";
    case FactorKind::Potential: return "potential";
    case FactorKind::CompactPotential: return "compact-potential";
  }
  return "?";
}

bool SplitStepPlan::offsets_assigned() const {
  return std::all_of(factors.begin(), factors.end(),
                     [](const PlanFactor& f) { return f.kind == FactorKind::Kinetic || f.offset.has_value(); });
}

Coefficient SplitStepPlan::kinetic_sum() const {
  Coefficient s = Coefficient::rational(0);
  for (const auto& f : factors)
    if (f.kind == FactorKind::Kinetic) s = s + f.coefficient;
  return s;
}

Coefficient SplitStepPlan::potential_sum() const {
  Coefficient s = Coefficient::rational(0);
  for (const auto& f : factors)
    if (f.kind != FactorKind::Kinetic) s = s + f.coefficient;
  return s;
}

bool SplitStepPlan::has_negative_coefficient() const {
  return std::any_of(factors.begin(), factors.end(), [](const PlanFactor& f) { return f.coefficient.approx < 0; });
}

SplitStepPlan assign_time_offsets(SplitStepPlan plan) {
  Coefficient elapsed = Coefficient::rational(0);
  for (auto& f : plan.factors) {
    if (f.kind == FactorKind::Kinetic) {
      f.offset.reset();
      elapsed = elapsed + f.coefficient;
    } else {
      f.offset = elapsed;
    }
  }
  return plan;
}

SplitStepPlan with_zeroed_offsets(SplitStepPlan plan) {
  for (auto& f : plan.factors)
    if (f.kind != FactorKind::Kinetic) f.offset = Coefficient::rational(0);
  plan.name += "-frozen";
  return plan;
}

long double forest_ruth_w1() { return 1.0L / (2.0L - std::cbrt(2.0L)); }

namespace {

PlanFactor kin(Coefficient c) { return {FactorKind::Kinetic, c, std::nullopt}; }
PlanFactor pot(Coefficient c) { return {FactorKind::Potential, c, std::nullopt}; }
PlanFactor compact(Coefficient c) { return {FactorKind::CompactPotential, c, std::nullopt}; }
Coefficient q(std::int64_t n, std::int64_t d = 1) { return Coefficient::rational(n, d); }
Coefficient r(long double v) { return Coefficient::real(v); }

SplitStepPlan make(std::string name, int order, std::vector<PlanFactor> factors) {
  SplitStepPlan p;
  p.name = std::move(name);
  p.order = order;
  p.factors = std::move(factors);
  return assign_time_offsets(std::move(p));
}

// Six-stage fourth-order partitioned Runge-Kutta splitting of Blanes and
// Moan (2002), kinetic flow in the outer positions.
SplitStepPlan s4rk() {
  const long double a1 = 0.0792036964311957L, a2 = 0.353172906049774L, a3 = -0.0420650803577195L;
  const long double a4 = 1.0L - 2.0L * (a1 + a2 + a3);
  const long double b1 = 0.209515106613362L, b2 = -0.143851773179818L;
  const long double b3 = 0.5L - (b1 + b2);
  return make("s4rk", 4,
              {kin(r(a1)), pot(r(b1)), kin(r(a2)), pot(r(b2)), kin(r(a3)), pot(r(b3)), kin(r(a4)), pot(r(b3)),
               kin(r(a3)), pot(r(b2)), kin(r(a2)), pot(r(b1)), kin(r(a1))});
}

SplitStepPlan s4() {
  // Strang at w1, w0, w1 with the touching half potential steps merged.
  const long double w1 = forest_ruth_w1();
  const long double w0 = 1.0L - 2.0L * w1;
  return make("s4", 4,
              {pot(r(w1 / 2)), kin(r(w1)), pot(r((w1 + w0) / 2)), kin(r(w0)), pot(r((w0 + w1) / 2)), kin(r(w1)),
               pot(r(w1 / 2))});
}

}  // namespace

const std::vector<std::string>& builtin_scheme_names() {
  static const std::vector<std::string> names{"s1", "s2", "s4", "s4rk", "s4c"};
  return names;
}

SplitStepPlan builtin_plan(std::string_view scheme) {
  std::string s(scheme);
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char ch) { return std::tolower(ch); });
  if (s == "s1") return make("s1", 1, {pot(q(1)), kin(q(1))});
  if (s == "s2") return make("s2", 2, {pot(q(1, 2)), kin(q(1)), pot(q(1, 2))});
  if (s == "s4") return s4();
  if (s == "s4rk") return s4rk();
  if (s == "s4c")
    return make("s4c", 4, {pot(q(1, 6)), kin(q(1, 2)), compact(q(2, 3)), kin(q(1, 2)), pot(q(1, 6))});
  throw UnknownScheme("unknown scheme '" + std::string(scheme) + "' (expected s1, s2, s4, s4rk or s4c)");
}

std::size_t step_count(double t0, double t_max, double tau) {
  if (t_max == t0) return 0;
  if (!(tau > 0.0) || !std::isfinite(tau)) throw StepCountError("time step must be positive");
  if (!(t_max > t0)) throw StepCountError("t_max must not precede t0");
  const double quotient = (t_max - t0) / tau;
  const double n = std::round(quotient);
  if (std::abs(quotient - n) > 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, n) || n < 1.0) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "(t_max - t0)/tau = %.17g is not an integer", quotient);
    throw StepCountError(buf);
  }
  return static_cast<std::size_t>(n);
}

Stepper::Stepper(const PeriodicGrid& grid, std::size_t ncomp, const PotentialModel& model, SplitStepPlan plan)
    : plan_(std::move(plan)), kinetic_(grid, ncomp, model.constants()), potential_(grid, ncomp, model) {
  if (!plan_.offsets_assigned()) throw std::invalid_argument("Stepper: plan '" + plan_.name + "' has no time offsets");
}

void Stepper::apply_factor(SpinorField& field, const PlanFactor& f, double coef, double t_n, double tau) {
  switch (f.kind) {
    case FactorKind::Kinetic: kinetic_.apply(field, coef * tau); break;
    case FactorKind::Potential: potential_.apply(field, t_n + f.offset->value() * tau, coef * tau); break;
    case FactorKind::CompactPotential:
      potential_.apply_compact(field, t_n + f.offset->value() * tau, coef * tau, tau);
      break;
  }
}

void Stepper::step(SpinorField& field, double t_n, double tau) {
  if (tau == 0.0) return;
  for (const auto& f : plan_.factors) apply_factor(field, f, f.coefficient.value(), t_n, tau);
}

bool Stepper::fusable() const {
  const auto& fs = plan_.factors;
  if (fs.size() < 2) return false;
  const auto& first = fs.front();
  const auto& last = fs.back();
  return first.kind == FactorKind::Potential && last.kind == FactorKind::Potential && first.offset->approx == 0.0L &&
         *last.offset == plan_.kinetic_sum();
}

void Stepper::evolve(SpinorField& field, double t0, double t_max, double tau, const Observer& observer,
                     std::size_t stride) {
  const std::size_t steps = step_count(t0, t_max, tau);
  if (stride == 0) stride = 1;
  if (observer) observer(0, t0, field);
  if (steps == 0) return;

  const auto& fs = plan_.factors;
  const bool fuse = fusable();
  // coefficient of the trailing potential factor not yet applied
  double pending = 0.0;
  for (std::size_t n = 0; n < steps; ++n) {
    const double t_n = t0 + static_cast<double>(n) * tau;
    std::size_t begin = 0, end = fs.size();
    if (fuse) {
      apply_factor(field, fs.front(), pending + fs.front().coefficient.value(), t_n, tau);
      begin = 1;
      end = fs.size() - 1;
    }
    for (std::size_t i = begin; i < end; ++i) apply_factor(field, fs[i], fs[i].coefficient.value(), t_n, tau);
    const std::size_t done = n + 1;
    const bool observe = observer && (done % stride == 0 || done == steps);
    if (fuse) {
      pending = fs.back().coefficient.value();
      if (observe || done == steps) {
        apply_factor(field, fs.back(), pending, t_n, tau);
        pending = 0.0;
      }
    }
    if (observe) observer(done, t0 + static_cast<double>(done) * tau, field);
  }
}

SpinorField step(const SpinorField& field, double t_n, double tau, const SplitStepPlan& plan,
                 const PotentialModel& model) {
  SpinorField out = field;
  Stepper(field.grid(), field.ncomp(), model, plan).step(out, t_n, tau);
  return out;
}

SpinorField evolve(const SpinorField& field0, double t0, double t_max, double tau, const SplitStepPlan& plan,
                   const PotentialModel& model, const Observer& observer, std::size_t stride) {
  SpinorField out = field0;
  Stepper(field0.grid(), field0.ncomp(), model, plan).evolve(out, t0, t_max, tau, observer, stride);
  return out;
}

}  // namespace dirac
