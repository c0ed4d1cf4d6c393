#include "dirac/grid.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <tuple>

namespace dirac {

PeriodicGrid::PeriodicGrid(std::vector<Axis> axes) : axes_(std::move(axes)) {
  if (axes_.empty() || axes_.size() > 3)
    throw std::invalid_argument("PeriodicGrid: dimension must be 1, 2 or 3");
  size_ = 1;
  for (std::size_t j = 0; j < axes_.size(); ++j) {
    const Axis& ax = axes_[j];
    if (ax.M < 4 || ax.M % 2 != 0)
      throw std::invalid_argument("PeriodicGrid: M must be even and >= 4 on axis " + std::to_string(j) +
                                  ", got " + std::to_string(ax.M));
    if (!(ax.b > ax.a)) throw std::invalid_argument("PeriodicGrid: need b > a on axis " + std::to_string(j));
    size_ *= ax.M;
  }
}

PeriodicGrid PeriodicGrid::cube(std::size_t dim, double a, double b, std::size_t M) {
  return PeriodicGrid(std::vector<Axis>(dim, Axis{a, b, M}));
}

const Axis& PeriodicGrid::axis(std::size_t j) const {
  if (j >= axes_.size()) throw std::out_of_range("PeriodicGrid: axis " + std::to_string(j) + " out of range");
  return axes_[j];
}

double PeriodicGrid::cell_volume() const {
  double v = 1.0;
  for (const auto& ax : axes_) v *= ax.spacing();
  return v;
}

std::array<std::size_t, 3> PeriodicGrid::index(std::size_t p) const {
  std::array<std::size_t, 3> idx{0, 0, 0};
  for (std::size_t j = 0; j < axes_.size(); ++j) {
    idx[j] = p % axes_[j].M;
    p /= axes_[j].M;
  }
  return idx;
}

Vec3 PeriodicGrid::coordinates(std::size_t p) const {
  const auto idx = index(p);
  Vec3 x{0.0, 0.0, 0.0};
  for (std::size_t j = 0; j < axes_.size(); ++j) x[j] = axes_[j].point(idx[j]);
  return x;
}

std::vector<double> fourier_modes(const PeriodicGrid& grid, std::size_t axis) {
  const Axis& ax = grid.axis(axis);
  const auto M = static_cast<long>(ax.M);
  const double w = 2.0 * std::numbers::pi / ax.length();
  std::vector<double> mu(ax.M);
  for (long l = 0; l < M; ++l) mu[static_cast<std::size_t>(l)] = w * static_cast<double>(l < M / 2 ? l : l - M);
  return mu;
}

namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

Fft::Fft(const PeriodicGrid& grid, std::size_t ncomp) {
  // FFTW wants the slowest axis first.
  std::vector<int> n;
  for (std::size_t j = grid.dim(); j-- > 0;) n.push_back(static_cast<int>(grid.axis(j).M));
  length_ = grid.size() * ncomp;
  scale_ = 1.0 / static_cast<double>(grid.size());

  auto* buf = fftw_alloc_complex(length_);
  const int howmany = static_cast<int>(ncomp);
  const int stride = static_cast<int>(ncomp);
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  forward_plan_ = fftw_plan_many_dft(static_cast<int>(n.size()), n.data(), howmany, buf, nullptr, stride, 1, buf,
                                     nullptr, stride, 1, FFTW_FORWARD, flags);
  inverse_plan_ = fftw_plan_many_dft(static_cast<int>(n.size()), n.data(), howmany, buf, nullptr, stride, 1, buf,
                                     nullptr, stride, 1, FFTW_BACKWARD, flags);
  fftw_free(buf);
  if (!forward_plan_ || !inverse_plan_) throw std::runtime_error("Fft: FFTW planning failed");
}

Fft::~Fft() {
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(forward_plan_));
  fftw_destroy_plan(static_cast<fftw_plan>(inverse_plan_));
}

std::shared_ptr<const Fft> Fft::get(const PeriodicGrid& grid, std::size_t ncomp) {
  using Key = std::tuple<std::size_t, std::size_t, std::size_t, std::size_t, std::size_t>;
  static std::map<Key, std::weak_ptr<const Fft>> cache;
  Key key{grid.dim(), grid.axis(0).M, grid.dim() > 1 ? grid.axis(1).M : 0, grid.dim() > 2 ? grid.axis(2).M : 0,
          ncomp};
  std::lock_guard lock(planner_mutex());
  if (auto it = cache.find(key); it != cache.end()) {
    if (auto p = it->second.lock()) return p;
  }
  std::shared_ptr<const Fft> p(new Fft(grid, ncomp));
  cache[key] = p;
  return p;
}

void Fft::forward(std::span<complex> data) const {
  if (data.size() != length_) throw std::invalid_argument("Fft::forward: length mismatch");
  auto* ptr = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(static_cast<fftw_plan>(forward_plan_), ptr, ptr);
}

void Fft::inverse(std::span<complex> data) const {
  if (data.size() != length_) throw std::invalid_argument("Fft::inverse: length mismatch");
  auto* ptr = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(static_cast<fftw_plan>(inverse_plan_), ptr, ptr);
  for (auto& v : data) v *= scale_;
}

std::vector<complex> spectral_derivative(const PeriodicGrid& grid, std::span<const complex> data, std::size_t ncomp,
                                         std::size_t axis) {
  if (data.size() != grid.size() * ncomp)
    throw std::invalid_argument("spectral_derivative: field does not match grid shape");
  const auto mu = fourier_modes(grid, axis);
  auto fft = Fft::get(grid, ncomp);
  std::vector<complex> out(data.begin(), data.end());
  fft->forward(out);
  for (std::size_t p = 0; p < grid.size(); ++p) {
    const complex factor(0.0, mu[grid.index(p)[axis]]);
    for (std::size_t c = 0; c < ncomp; ++c) out[p * ncomp + c] *= factor;
  }
  fft->inverse(out);
  return out;
}

}  // namespace dirac
