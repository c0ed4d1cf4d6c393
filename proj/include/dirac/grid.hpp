#pragma once

#include <array>
#include <memory>
#include <span>
#include <vector>

#include "dirac/algebra.hpp"

namespace dirac {

struct Axis {
  double a = 0.0;
  double b = 0.0;
  std::size_t M = 0;

  double spacing() const { return (b - a) / static_cast<double>(M); }
  double length() const { return b - a; }
  double point(std::size_t l) const { return a + static_cast<double>(l) * spacing(); }
  friend bool operator==(const Axis&, const Axis&) = default;
};

/// Uniform periodic grid in 1..3 dimensions. Points are linearised with the
/// first axis fastest: p = i0 + M0 * (i1 + M1 * i2).
class PeriodicGrid {
 public:
  explicit PeriodicGrid(std::vector<Axis> axes);

  /// Same interval and point count on every axis.
  static PeriodicGrid cube(std::size_t dim, double a, double b, std::size_t M);

  std::size_t dim() const { return axes_.size(); }
  const Axis& axis(std::size_t j) const;
  const std::vector<Axis>& axes() const { return axes_; }
  std::size_t size() const { return size_; }
  /// Product of spacings, the quadrature weight of one cell.
  double cell_volume() const;

  /// Multi-index of the linear point index p.
  std::array<std::size_t, 3> index(std::size_t p) const;
  /// Coordinates of point p; unused trailing entries are zero.
  Vec3 coordinates(std::size_t p) const;

  friend bool operator==(const PeriodicGrid& l, const PeriodicGrid& r) { return l.axes_ == r.axes_; }

 private:
  std::vector<Axis> axes_;
  std::size_t size_ = 0;
};

/// Angular frequencies 2 pi l / (b - a) in transform order 0..M/2-1, -M/2..-1.
std::vector<double> fourier_modes(const PeriodicGrid& grid, std::size_t axis);

/// Batched multi-dimensional FFT over the `ncomp` interleaved components of a
/// field. Forward is unnormalised; inverse carries 1/M per axis.
class Fft {
 public:
  /// Plans are shared between callers; construction is thread-safe.
  static std::shared_ptr<const Fft> get(const PeriodicGrid& grid, std::size_t ncomp);

  ~Fft();
  Fft(const Fft&) = delete;
  Fft& operator=(const Fft&) = delete;

  void forward(std::span<complex> data) const;
  void inverse(std::span<complex> data) const;

  std::size_t length() const { return length_; }

 private:
  Fft(const PeriodicGrid& grid, std::size_t ncomp);

  void* forward_plan_ = nullptr;
  void* inverse_plan_ = nullptr;
  std::size_t length_ = 0;
  double scale_ = 1.0;
};

/// d/dx_axis of an interleaved multi-component lattice function via the FFT.
std::vector<complex> spectral_derivative(const PeriodicGrid& grid, std::span<const complex> data,
                                         std::size_t ncomp, std::size_t axis);

}  // namespace dirac
