#pragma once

#include <array>
#include <map>
#include <memory>
#include <stdexcept>
#include <vector>

#include "dirac/fields.hpp"
#include "dirac/potentials.hpp"

namespace dirac {

/// Raised for a compact potential step whose double commutator contains
/// transport terms (d >= 2 with a nonzero magnetic potential).
class UnsupportedCommutatorTransport : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// exp(s T) for T = -c sum_j K_j d_j - i m c^2 B, applied per Fourier mode as
/// exp(-i s Gamma(mu)) = cos(s delta) I - i sin(s delta)/delta Gamma(mu).
/// K_j, B are sigma_j, sigma_3 for two components and alpha_j, beta for four.
class KineticPropagator {
 public:
  KineticPropagator(const PeriodicGrid& grid, std::size_t ncomp, PhysicalConstants constants);

  void apply(SpinorField& field, double s);

  /// delta(mu) = sqrt(m^2 c^4 + c^2 |mu|^2) for mode index `mode`.
  double dispersion(std::size_t mode) const;

 private:
  /// Per-mode entries of exp(-i s Gamma), formed in extended precision and
  /// rounded once: e00 e01 e10 e11 for two components; for four, the
  /// diagonal pair and the three distinct off-diagonal block entries.
  struct Table {
    std::vector<complex> entries;
  };
  const Table& table(double s);

  PeriodicGrid grid_;
  std::size_t ncomp_;
  PhysicalConstants k_;
  std::shared_ptr<const Fft> fft_;
  std::array<std::vector<double>, 3> modes_;  // per-point mu_j, in transform order
  std::map<double, Table> tables_;
};

/// Pointwise exp(s W(t)) and the one-dimensional / magnetic-free compact
/// variant exp(s (W + tau^2/48 [W, [T, W]])). Factor values are cached for
/// time-independent models.
class PotentialPropagator {
 public:
  PotentialPropagator(const PeriodicGrid& grid, std::size_t ncomp, const PotentialModel& model);

  void apply(SpinorField& field, double t_eval, double s);
  /// Throws UnsupportedCommutatorTransport for d >= 2 with a magnetic potential.
  void apply_compact(SpinorField& field, double t_eval, double s, double tau);

 private:
  struct Factor {
    bool scalar = true;
    std::vector<complex> values;  // one phase per point, or ncomp^2 entries per point
  };
  Factor build(double t_eval, double s, double correction) const;
  void apply_factor(const Factor& f, SpinorField& field) const;
  void apply_with(SpinorField& field, double t_eval, double s, double correction);

  PeriodicGrid grid_;
  std::size_t ncomp_;
  const PotentialModel* model_;
  std::map<std::pair<double, double>, Factor> cache_;
};

SpinorField kinetic_step(const SpinorField& field, double s, const PhysicalConstants& constants = {});
SpinorField potential_step(const SpinorField& field, double t_eval, double s, const PotentialModel& model);
SpinorField compact_potential_step(const SpinorField& field, double t_eval, double s, double tau,
                                   const PotentialModel& model);

/// Matrix coefficients of [W, [T, W]] = F_0 + sum_j F_j d_j on a grid.
/// F_0 carries the pointwise part; `first[j]` the coefficient of d_{j+1}.
struct CommutatorCoefficients {
  std::size_t dim = 1;
  std::size_t ncomp = 2;
  /// tau^2 / 48, the weight with which the commutator enters the compact factor.
  double weight = 0.0;
  std::vector<complex> zeroth;               // ncomp^2 per point
  std::array<std::vector<complex>, 3> first;  // ncomp^2 per point, j < dim

  /// Row-major ncomp x ncomp block of F_0 (order 0) or F_order (1..dim) at a point.
  std::span<const complex> block(std::size_t order, std::size_t point) const;
  /// (F_0 + sum_j F_j d_j) f with spectral derivatives of f.
  SpinorField apply(const SpinorField& field) const;
  bool vanishes() const;
};

enum class CommutatorForm {
  /// Agrees with the nested commutator for every V and A.
  Corrected,
  /// Older closed form with half of the product-rule terms of F_0 dropped
  /// and the gamma term doubled. Wrong whenever A varies in space in 2D or
  /// 3D; kept for comparison only.
  AsPrinted,
};

/// Closed-form double commutators (1D/2D two- and four-component, 3D
/// four-component) with the physical constants folded in: every term coming
/// from the derivative part of T scales with c e^2, the mass part with m c^2 e^2.
CommutatorCoefficients double_commutator_coefficients(const PotentialModel& model, double t, double tau,
                                                      const PeriodicGrid& grid, std::size_t ncomp,
                                                      CommutatorForm form = CommutatorForm::Corrected);

enum class OracleDerivatives {
  /// Derivatives of W from the model's analytic gradients, of the field spectrally.
  ProductRule,
  /// Every derivative taken spectrally on the products; exact only when
  /// the potentials are band-limited on the grid.
  Spectral,
};

/// [W, [T, W]] f = 2 W T W f - W W T f - T W W f evaluated directly.
SpinorField double_commutator_bruteforce(const SpinorField& field, double t, const PotentialModel& model,
                                         OracleDerivatives mode = OracleDerivatives::ProductRule);

}  // namespace dirac
