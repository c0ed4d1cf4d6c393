#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "dirac/fields.hpp"
#include "dirac/integrators.hpp"
#include "dirac/potentials.hpp"

namespace dirac {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Everything a run needs, read from `key = value` text.
struct SimulationConfig {
  std::size_t dimension = 1;
  std::size_t components = 2;
  std::string scheme = "s4c";

  // per axis; a single entry applies to every axis
  std::vector<double> grid_a{-32.0};
  std::vector<double> grid_b{32.0};
  std::vector<std::size_t> grid_M{1024};

  double tau = 0.01;
  double t_max = 1.0;
  double t0 = 0.0;

  std::string potential_kind = "zero";  // zero | td1d | klein | honeycomb | custom
  double V0 = 6.13e4;
  double L = 1e-4;
  int theta_case = 1;
  std::string V_expr = "0";
  std::array<std::string, 3> A_expr{"0", "0", "0"};

  PhysicalConstants constants;

  std::string initial_kind = "gaussian_pair";  // gaussian_pair | klein | custom
  double k0 = 106.0;
  double x0 = -10.0;
  std::array<std::string, 4> initial_re{"0", "0", "0", "0"};
  std::array<std::string, 4> initial_im{"0", "0", "0", "0"};

  std::string output_prefix = "out";
  /// Snapshot every this many steps; 0 writes only the initial and final fields.
  std::size_t snapshot_stride = 0;

  std::vector<std::string> convergence_schemes{"s4c"};
  double convergence_tau0 = 0.5;
  std::size_t convergence_levels = 7;
  /// "self" makes every scheme its own reference.
  std::string convergence_reference = "s4c";
  double convergence_reference_tau = 1e-5;

  std::size_t commutator_samples = 50;
  std::size_t commutator_M = 16;
  std::uint64_t commutator_seed = 1;
  double commutator_tolerance = 1e-9;

  friend bool operator==(const SimulationConfig&, const SimulationConfig&) = default;
};

/// Parses and validates; errors name the line or the offending key.
SimulationConfig parse_config(const std::string& text);
SimulationConfig load_config(const std::filesystem::path& path);

/// Throws ConfigError naming the first invalid key.
void validate(const SimulationConfig& cfg);

/// Text that parse_config maps back to an identical structure.
std::string dump_config(const SimulationConfig& cfg);

PeriodicGrid make_grid(const SimulationConfig& cfg);
PotentialModel make_model(const SimulationConfig& cfg);
SpinorField make_initial(const SimulationConfig& cfg, const PeriodicGrid& grid);

}  // namespace dirac
