#pragma once

#include <span>
#include <vector>

#include "dirac/algebra.hpp"
#include "dirac/grid.hpp"

namespace dirac {

/// Two- or four-component complex spinor sampled on a periodic grid.
/// Storage is point-major with the component index fastest.
class SpinorField {
 public:
  SpinorField(PeriodicGrid grid, std::size_t ncomp);
  SpinorField(PeriodicGrid grid, std::size_t ncomp, std::vector<complex> data);

  const PeriodicGrid& grid() const { return grid_; }
  std::size_t ncomp() const { return ncomp_; }
  std::size_t points() const { return grid_.size(); }

  std::span<complex> data() { return data_; }
  std::span<const complex> data() const { return data_; }
  std::vector<complex>& storage() { return data_; }

  complex& at(std::size_t point, std::size_t comp) { return data_[point * ncomp_ + comp]; }
  const complex& at(std::size_t point, std::size_t comp) const { return data_[point * ncomp_ + comp]; }

  complex* spinor(std::size_t point) { return data_.data() + point * ncomp_; }
  const complex* spinor(std::size_t point) const { return data_.data() + point * ncomp_; }

  bool same_shape(const SpinorField& other) const { return ncomp_ == other.ncomp_ && grid_ == other.grid_; }

 private:
  PeriodicGrid grid_;
  std::size_t ncomp_;
  std::vector<complex> data_;
};

/// h^d sum_points |Phi|^2.
double mass(const SpinorField& field);

struct Densities {
  std::vector<double> total;
  std::vector<std::vector<double>> per_component;
};

Densities probability_density(const SpinorField& field);

/// J_l = Phi^* K_l Phi at every point, K_l = sigma_l (two components) or
/// alpha_l (four components), l = 1-based.
std::vector<double> current_component(const SpinorField& field, int l);

/// The d current components J_1..J_d.
std::vector<std::vector<double>> current_density(const SpinorField& field);

struct ErrorNorms {
  double phi = 0.0;
  double rho = 0.0;
  double j = 0.0;
};

/// Discrete l2 errors of wave function, density and current. The current
/// error runs over every component the spinor size defines (sigma_1, sigma_2
/// for two components; alpha_1..alpha_3 for four).
ErrorNorms error_norms(const SpinorField& numeric, const SpinorField& reference);

/// Largest |Im(Phi^* K_l Phi)| over the grid; zero up to roundoff for Hermitian K_l.
double current_imaginary_residue(const SpinorField& field, int l);

}  // namespace dirac
