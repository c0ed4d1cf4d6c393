#include "dirac/potentials.hpp"

#include <cmath>
#include <numbers>

namespace dirac {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

const double kHoneycombWave = 4.0 * std::numbers::pi / std::sqrt(3.0);

expr::Env env_at(double t, const Vec3& x) { return expr::Env::txyz(t, x[0], x[1], x[2]); }

}  // namespace

double honeycomb_theta(int theta_case, double t) {
  switch (theta_case) {
    case 1: return std::numbers::pi;
    case 2: return std::numbers::pi + std::numbers::pi * t;
    case 3: return std::numbers::pi + std::numbers::pi * std::cos(std::numbers::pi * t);
    default: throw std::invalid_argument("honeycomb_theta: case must be 1, 2 or 3, got " + std::to_string(theta_case));
  }
}

PotentialModel PotentialModel::zero(std::size_t dim, PhysicalConstants k) {
  if (dim < 1 || dim > 3) throw std::invalid_argument("PotentialModel: dimension must be 1, 2 or 3");
  return PotentialModel(dim, k, Zero{});
}

PotentialModel PotentialModel::time_dependent_1d(PhysicalConstants k) { return PotentialModel(1, k, TimeDependent1D{}); }

PotentialModel PotentialModel::klein_step(double V0, double L, PhysicalConstants k) {
  if (!(L > 0.0)) throw std::invalid_argument("klein_step: L must be positive");
  return PotentialModel(1, k, KleinStep{V0, L});
}

PotentialModel PotentialModel::honeycomb(int theta_case, PhysicalConstants k) {
  honeycomb_theta(theta_case, 0.0);  // validates the case
  return PotentialModel(2, k, Honeycomb2D{theta_case});
}

PotentialModel PotentialModel::custom(std::size_t dim, const std::string& V_source,
                                      const std::vector<std::string>& A_sources, PhysicalConstants k) {
  if (dim < 1 || dim > 3) throw std::invalid_argument("PotentialModel: dimension must be 1, 2 or 3");
  if (A_sources.size() > dim)
    throw std::invalid_argument("custom potential: " + std::to_string(A_sources.size()) +
                                " magnetic components given for dimension " + std::to_string(dim));
  Custom c;
  c.V_source = V_source.empty() ? "0" : V_source;
  c.A_sources = A_sources;
  c.A_sources.resize(dim);
  for (auto& s : c.A_sources)
    if (s.empty()) s = "0";
  c.V = expr::parse(c.V_source);
  for (const auto& s : c.A_sources) c.A.push_back(expr::parse(s));
  constexpr expr::Var axes[3] = {expr::Var::X, expr::Var::Y, expr::Var::Z};
  for (std::size_t j = 0; j < 3; ++j) c.dV[j] = expr::differentiate(c.V, axes[j]);
  for (const auto& a : c.A) {
    std::array<expr::Expr, 3> row;
    for (std::size_t j = 0; j < 3; ++j) row[j] = expr::differentiate(a, axes[j]);
    c.dA.push_back(row);
  }
  return PotentialModel(dim, k, std::move(c));
}

std::string PotentialModel::kind_name() const {
  return std::visit(overloaded{[](const Zero&) { return std::string("zero"); },
                               [](const TimeDependent1D&) { return std::string("td1d"); },
                               [](const KleinStep&) { return std::string("klein"); },
                               [](const Honeycomb2D&) { return std::string("honeycomb"); },
                               [](const Custom&) { return std::string("custom"); }},
                    kind_);
}

bool PotentialModel::has_magnetic() const {
  if (std::holds_alternative<TimeDependent1D>(kind_)) return true;
  if (const auto* c = std::get_if<Custom>(&kind_)) {
    for (const auto& a : c->A)
      if (!expr::is_zero_literal(a)) return true;
  }
  return false;
}

bool PotentialModel::time_independent() const {
  return std::visit(overloaded{[](const Zero&) { return true; }, [](const TimeDependent1D&) { return false; },
                               [](const KleinStep&) { return true; },
                               [](const Honeycomb2D& h) { return h.theta_case == 1; },
                               [](const Custom& c) {
                                 if (expr::depends_on(c.V, expr::Var::T)) return false;
                                 for (const auto& a : c.A)
                                   if (expr::depends_on(a, expr::Var::T)) return false;
                                 return true;
                               }},
                    kind_);
}

PotentialSample PotentialModel::evaluate(double t, std::span<const double> x) const {
  if (x.size() != dim_)
    throw std::invalid_argument("PotentialModel::evaluate: point has " + std::to_string(x.size()) +
                                " coordinates, model dimension is " + std::to_string(dim_));
  Vec3 p{0.0, 0.0, 0.0};
  std::copy(x.begin(), x.end(), p.begin());
  return at(t, p);
}

PotentialGradients PotentialModel::evaluate_gradients(double t, std::span<const double> x) const {
  if (x.size() != dim_)
    throw std::invalid_argument("PotentialModel::evaluate_gradients: point has " + std::to_string(x.size()) +
                                " coordinates, model dimension is " + std::to_string(dim_));
  Vec3 p{0.0, 0.0, 0.0};
  std::copy(x.begin(), x.end(), p.begin());
  return gradients_at(t, p);
}

PotentialSample PotentialModel::at(double t, const Vec3& x) const {
  PotentialSample s;
  std::visit(overloaded{[](const Zero&) {},
                        [&](const TimeDependent1D&) {
                          const double tx = t * x[0];
                          const double den = 1.0 + tx * tx;
                          s.V = (1.0 - tx) / den;
                          s.A[0] = (tx + 1.0) * (tx + 1.0) / den;
                        },
                        [&](const KleinStep& k) { s.V = 0.5 * k.V0 * (1.0 + std::tanh(x[0] / k.L)); },
                        [&](const Honeycomb2D& h) {
                          const double theta = honeycomb_theta(h.theta_case, t);
                          for (int k = 0; k < 3; ++k) {
                            const double ang = theta + 2.0 * std::numbers::pi * k / 3.0;
                            s.V += std::cos(kHoneycombWave * (std::cos(ang) * x[0] + std::sin(ang) * x[1]));
                          }
                        },
                        [&](const Custom& c) {
                          const auto env = env_at(t, x);
                          s.V = expr::eval(c.V, env);
                          for (std::size_t k = 0; k < c.A.size(); ++k) s.A[k] = expr::eval(c.A[k], env);
                        }},
             kind_);
  return s;
}

PotentialGradients PotentialModel::gradients_at(double t, const Vec3& x) const {
  PotentialGradients g;
  std::visit(overloaded{[](const Zero&) {},
                        [&](const TimeDependent1D&) {
                          const double tx = t * x[0];
                          const double den = 1.0 + tx * tx;
                          const double den2 = den * den;
                          // d/dx of (1 - tx)/den and (tx + 1)^2/den
                          g.dV[0] = (-t * den - (1.0 - tx) * 2.0 * t * tx) / den2;
                          g.dA[0][0] = (2.0 * t * (tx + 1.0) * den - (tx + 1.0) * (tx + 1.0) * 2.0 * t * tx) / den2;
                        },
                        [&](const KleinStep& k) {
                          const double th = std::tanh(x[0] / k.L);
                          g.dV[0] = 0.5 * k.V0 / k.L * (1.0 - th * th);
                        },
                        [&](const Honeycomb2D& h) {
                          const double theta = honeycomb_theta(h.theta_case, t);
                          for (int k = 0; k < 3; ++k) {
                            const double ang = theta + 2.0 * std::numbers::pi * k / 3.0;
                            const double e1 = std::cos(ang), e2 = std::sin(ang);
                            const double sn = std::sin(kHoneycombWave * (e1 * x[0] + e2 * x[1]));
                            g.dV[0] -= kHoneycombWave * e1 * sn;
                            g.dV[1] -= kHoneycombWave * e2 * sn;
                          }
                        },
                        [&](const Custom& c) {
                          const auto env = env_at(t, x);
                          try {
                            for (std::size_t j = 0; j < dim_; ++j) g.dV[j] = expr::eval(c.dV[j], env);
                            for (std::size_t k = 0; k < c.A.size(); ++k)
                              for (std::size_t j = 0; j < dim_; ++j) g.dA[k][j] = expr::eval(c.dA[k][j], env);
                          } catch (const expr::EvalError& err) {
                            throw GradientUnavailable(std::string("custom potential gradient: ") + err.what());
                          }
                        }},
             kind_);
  return g;
}

void PotentialModel::sample(double t, const PeriodicGrid& grid, std::vector<double>& V,
                            std::array<std::vector<double>, 3>& A) const {
  if (grid.dim() != dim_)
    throw std::invalid_argument("PotentialModel::sample: grid dimension " + std::to_string(grid.dim()) +
                                " does not match model dimension " + std::to_string(dim_));
  const std::size_t n = grid.size();
  V.assign(n, 0.0);
  for (std::size_t k = 0; k < 3; ++k) A[k].assign(k < dim_ ? n : 0, 0.0);

  if (std::holds_alternative<Zero>(kind_)) return;

  if (const auto* h = std::get_if<Honeycomb2D>(&kind_)) {
    // cos(a x + b y) from per-axis tables
    const double theta = honeycomb_theta(h->theta_case, t);
    const Axis& ax = grid.axis(0);
    const Axis& ay = grid.axis(1);
    std::vector<double> cx(ax.M), sx(ax.M), cy(ay.M), sy(ay.M);
    for (int k = 0; k < 3; ++k) {
      const double ang = theta + 2.0 * std::numbers::pi * k / 3.0;
      const double kx = kHoneycombWave * std::cos(ang), ky = kHoneycombWave * std::sin(ang);
      for (std::size_t i = 0; i < ax.M; ++i) {
        cx[i] = std::cos(kx * ax.point(i));
        sx[i] = std::sin(kx * ax.point(i));
      }
      for (std::size_t i = 0; i < ay.M; ++i) {
        cy[i] = std::cos(ky * ay.point(i));
        sy[i] = std::sin(ky * ay.point(i));
      }
      for (std::size_t iy = 0, p = 0; iy < ay.M; ++iy)
        for (std::size_t ix = 0; ix < ax.M; ++ix, ++p) V[p] += cx[ix] * cy[iy] - sx[ix] * sy[iy];
    }
    return;
  }

  for (std::size_t p = 0; p < n; ++p) {
    const auto s = at(t, grid.coordinates(p));
    V[p] = s.V;
    for (std::size_t k = 0; k < dim_; ++k) A[k][p] = s.A[k];
  }
}

}  // namespace dirac
