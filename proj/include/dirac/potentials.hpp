#pragma once

#include <array>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "dirac/algebra.hpp"
#include "dirac/expr.hpp"
#include "dirac/grid.hpp"

namespace dirac {

/// Speed of light in atomic units.
inline constexpr double kAtomicLightSpeed = 137.0359895;

struct PhysicalConstants {
  double c = 1.0;
  double m = 1.0;
  double e = 1.0;
  friend bool operator==(const PhysicalConstants&, const PhysicalConstants&) = default;
};

struct PotentialSample {
  double V = 0.0;
  Vec3 A{0.0, 0.0, 0.0};
};

struct PotentialGradients {
  Vec3 dV{0.0, 0.0, 0.0};
  /// dA[k][j] = d A_{k+1} / d x_{j+1}
  std::array<Vec3, 3> dA{};
};

class GradientUnavailable : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Angle of the rotating honeycomb lattice: case 1 fixed, case 2 uniform
/// rotation, case 3 oscillating.
double honeycomb_theta(int theta_case, double t);

/// Time-dependent electric potential V and magnetic potential A together with
/// the physical constants that scale the kinetic and potential operators.
class PotentialModel {
 public:
  struct Zero {};
  /// V = (1 - t x)/(1 + t^2 x^2), A1 = (t x + 1)^2/(1 + t^2 x^2).
  struct TimeDependent1D {};
  /// V = V0/2 (1 + tanh(x / L)), A = 0.
  struct KleinStep {
    double V0 = 0.0;
    double L = 1.0;
  };
  /// V = sum_k cos(4 pi / sqrt(3) e_k(t) . x), A = 0.
  struct Honeycomb2D {
    int theta_case = 1;
  };
  struct Custom {
    std::string V_source;
    std::vector<std::string> A_sources;
    expr::Expr V;
    std::vector<expr::Expr> A;
    std::array<expr::Expr, 3> dV;                // d/dx_j
    std::vector<std::array<expr::Expr, 3>> dA;  // [k][j]
  };
  using Kind = std::variant<Zero, TimeDependent1D, KleinStep, Honeycomb2D, Custom>;

  static PotentialModel zero(std::size_t dim, PhysicalConstants k = {});
  static PotentialModel time_dependent_1d(PhysicalConstants k = {});
  static PotentialModel klein_step(double V0, double L, PhysicalConstants k = {});
  static PotentialModel honeycomb(int theta_case, PhysicalConstants k = {});
  /// Expressions in t, x, y, z. `A_sources` may be shorter than `dim`; missing
  /// entries are zero.
  static PotentialModel custom(std::size_t dim, const std::string& V_source,
                               const std::vector<std::string>& A_sources, PhysicalConstants k = {});

  std::size_t dim() const { return dim_; }
  const PhysicalConstants& constants() const { return constants_; }
  const Kind& kind() const { return kind_; }
  std::string kind_name() const;

  /// False only when A vanishes identically.
  bool has_magnetic() const;
  bool time_independent() const;

  /// Throws std::invalid_argument when x.size() != dim().
  PotentialSample evaluate(double t, std::span<const double> x) const;
  PotentialGradients evaluate_gradients(double t, std::span<const double> x) const;

  /// Unchecked point evaluation; trailing coordinates beyond dim() are ignored.
  PotentialSample at(double t, const Vec3& x) const;
  PotentialGradients gradients_at(double t, const Vec3& x) const;

  /// V and A_1..A_dim on every grid point.
  void sample(double t, const PeriodicGrid& grid, std::vector<double>& V, std::array<std::vector<double>, 3>& A) const;

 private:
  PotentialModel(std::size_t dim, PhysicalConstants k, Kind kind) : dim_(dim), constants_(k), kind_(std::move(kind)) {}

  std::size_t dim_;
  PhysicalConstants constants_;
  Kind kind_;
};

}  // namespace dirac
