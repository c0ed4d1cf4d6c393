#pragma once

#include <functional>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "dirac/fields.hpp"
#include "dirac/integrators.hpp"
#include "dirac/potentials.hpp"

namespace dirac {

/// Worker count for concurrent jobs: DIRAC_THREADS if set, otherwise the
/// hardware concurrency (at least 1).
unsigned default_thread_count();

// --- Klein paradox --------------------------------------------------------

struct KleinParams {
  double k0 = 106.0;
  double x0 = -10.0;
  double L = 1e-4;
  double V0 = 6.13e4;
  double c = kAtomicLightSpeed;
  double m = 1.0;
  double e = 1.0;
  double a = -20.0;
  double b = 20.0;
  double t_max = 0.22;
};

struct KleinAnalytic {
  double E_k = 0.0;
  double k = 0.0;
  double k_prime = 0.0;
  double T = 0.0;
  /// False when V0 <= E_k + m c^2; T is then defined as zero.
  bool in_region = false;
};

KleinAnalytic klein_analytic(double k0, double V0, double L, double c, double m);
double klein_transmission_analytic(double k0, double V0, double L, double c, double m);

/// phi_1 = e^{i k0 x} e^{-(x-x0)^2/4}, phi_2 = C phi_1.
SpinorField klein_initial(double k0, double x0, double c, double m, const PeriodicGrid& grid);

struct KleinReport {
  KleinParams params;
  double h = 0.0;
  double tau = 0.0;
  std::string scheme;
  double E_k = 0.0;
  double k = 0.0;
  double k_prime = 0.0;
  double T_ana = 0.0;
  bool analytic_defined = false;
  double T_num = 0.0;
  double reflected = 0.0;
  /// |T_num - T_ana| / T_ana, or NaN when T_ana is not defined.
  double relative_error = 0.0;
  double seconds = 0.0;
};

KleinReport klein_run(const KleinParams& params, double h, double tau, std::string_view scheme = "s4c");

/// Number of cells of width h in (a, b); throws unless it is an even integer.
std::size_t cells_for_spacing(double a, double b, double h);

// --- Gaussian pair initial data --------------------------------------------

/// phi_1 = exp(-|x|^2/2), phi_2 = exp(-|x - e_1|^2/2) in 1D or 2D. With four
/// components the pair occupies psi_1 and psi_4.
SpinorField gaussian_pair(const PeriodicGrid& grid, std::size_t ncomp = 2);

// --- Convergence studies -----------------------------------------------------

struct ConvergenceSetup {
  PotentialModel model;
  SpinorField initial;
  double t0 = 0.0;
  double t_max = 1.0;
};

/// Time-dependent 1D potentials with the Gaussian pair, c = m = e = 1.
ConvergenceSetup td1d_setup(double a, double b, double h, double t_max);
/// Honeycomb potential, case 1..3, on (a, b)^2.
ConvergenceSetup honeycomb_setup(int theta_case, double a, double b, double h, double t_max);

struct ReferenceSpec {
  /// Scheme for the reference run; empty means each scheme is its own reference.
  std::optional<SplitStepPlan> plan;
  double tau = 1e-5;
};

struct ConvergenceCell {
  double tau = 0.0;
  ErrorNorms errors;
  double seconds = 0.0;
};

struct ConvergenceReport {
  std::string scheme;
  std::vector<ConvergenceCell> cells;
  /// rate[i] = log2(e(tau_i) / e(tau_{i+1})); one fewer than cells.
  std::vector<double> rate_phi, rate_rho, rate_j;
  double reference_seconds = 0.0;

  /// Mean of the last `count` rates of the chosen norm ("phi", "rho", "j").
  double tail_rate(std::string_view norm, std::size_t count = 3) const;
};

/// Every (scheme, tau) cell and every distinct reference evolves as an
/// independent job on `threads` workers (0 = default_thread_count()).
std::vector<ConvergenceReport> convergence_study(const ConvergenceSetup& setup, const std::vector<SplitStepPlan>& schemes,
                                                 const std::vector<double>& taus, const ReferenceSpec& reference,
                                                 unsigned threads = 0);

/// tau_0, tau_0/2, ..., tau_0/2^(count-1)
std::vector<double> halving_ladder(double tau0, std::size_t count);

/// Wall-clock seconds per step of `plan` on the setup, averaged over `steps`.
double seconds_per_step(const ConvergenceSetup& setup, const SplitStepPlan& plan, double tau, std::size_t steps);

// --- Honeycomb dynamics ------------------------------------------------------

struct HoneycombSnapshot {
  double t = 0.0;
  std::vector<double> rho1, rho2, rho_sum;
  double mass = 0.0;
  SpinorField field;
};

/// S4c evolution of the Gaussian pair under the honeycomb potential with
/// snapshots at the requested times (each a multiple of tau).
std::vector<HoneycombSnapshot> honeycomb_dynamics(int theta_case, const PeriodicGrid& grid, double tau,
                                                  std::vector<double> times);

// --- Double commutator checks ---------------------------------------------

/// Random complex combination of the Fourier modes with |l_j| <= max_mode.
SpinorField random_band_limited_field(const PeriodicGrid& grid, std::size_t ncomp, std::mt19937_64& rng,
                                      int max_mode = 3);

/// Custom model with random smooth trigonometric V and, if `magnetic`, A,
/// depending on t and the first `dim` coordinates.
PotentialModel random_trig_potential(std::size_t dim, PhysicalConstants k, std::mt19937_64& rng, bool magnetic = true);

/// ||closed form - brute force|| / ||brute force|| for one field (absolute
/// error when the brute-force result vanishes).
double commutator_relative_error(const PotentialModel& model, double t, const SpinorField& field);

struct CommutatorCase {
  std::size_t dim = 1;
  std::size_t ncomp = 2;
  std::size_t samples = 0;
  double max_relative_error = 0.0;
  bool passed = false;
};

/// The five (dimension, components) cases: 1D and 2D with 2 and 4
/// components, 3D with 4.
const std::vector<std::pair<std::size_t, std::size_t>>& commutator_cases();

/// For each case, `samples` random fields on an M^d grid over (-pi, pi)^d
/// against the model returned by `make_model(dim, rng)` at a random time.
std::vector<CommutatorCase> commutator_check(
    const std::function<PotentialModel(std::size_t dim, std::mt19937_64& rng)>& make_model, std::size_t M,
    std::size_t samples, std::uint64_t seed, double tolerance,
    const std::vector<std::pair<std::size_t, std::size_t>>& cases = commutator_cases());

}  // namespace dirac
