#include "dirac/fields.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace dirac {

SpinorField::SpinorField(PeriodicGrid grid, std::size_t ncomp)
    : grid_(std::move(grid)), ncomp_(ncomp), data_(grid_.size() * ncomp) {
  if (ncomp != 2 && ncomp != 4) throw std::invalid_argument("SpinorField: ncomp must be 2 or 4");
}

SpinorField::SpinorField(PeriodicGrid grid, std::size_t ncomp, std::vector<complex> data)
    : grid_(std::move(grid)), ncomp_(ncomp), data_(std::move(data)) {
  if (ncomp != 2 && ncomp != 4) throw std::invalid_argument("SpinorField: ncomp must be 2 or 4");
  if (data_.size() != grid_.size() * ncomp_)
    throw std::invalid_argument("SpinorField: data length " + std::to_string(data_.size()) + " does not match " +
                                std::to_string(grid_.size()) + " points x " + std::to_string(ncomp_));
}

double mass(const SpinorField& field) {
  double sum = 0.0;
  for (const auto& v : field.data()) sum += std::norm(v);
  return sum * field.grid().cell_volume();
}

Densities probability_density(const SpinorField& field) {
  const std::size_t n = field.points(), nc = field.ncomp();
  Densities d;
  d.total.assign(n, 0.0);
  d.per_component.assign(nc, std::vector<double>(n, 0.0));
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t c = 0; c < nc; ++c) {
      const double r = std::norm(field.at(p, c));
      d.per_component[c][p] = r;
      d.total[p] += r;
    }
  }
  return d;
}

namespace {

// Phi^* K Phi for the Hermitian current matrices. Written out directly so the
// result is real by construction; the full complex form is kept for the
// residue check.
complex current_form(const complex* s, std::size_t nc, int l) {
  if (nc == 2) {
    const Matrix2 k = pauli(l);
    complex y[2];
    k.apply(s, y);
    return std::conj(s[0]) * y[0] + std::conj(s[1]) * y[1];
  }
  const Matrix4 k = alpha(l);
  complex y[4];
  k.apply(s, y);
  complex acc{};
  for (int c = 0; c < 4; ++c) acc += std::conj(s[c]) * y[c];
  return acc;
}

int current_count(std::size_t ncomp) { return ncomp == 2 ? 2 : 3; }

}  // namespace

std::vector<double> current_component(const SpinorField& field, int l) {
  if (l < 1 || l > current_count(field.ncomp()))
    throw std::out_of_range("current_component: index " + std::to_string(l) + " out of range");
  std::vector<double> j(field.points());
  for (std::size_t p = 0; p < field.points(); ++p) j[p] = current_form(field.spinor(p), field.ncomp(), l).real();
  return j;
}

std::vector<std::vector<double>> current_density(const SpinorField& field) {
  std::vector<std::vector<double>> out;
  for (std::size_t l = 1; l <= field.grid().dim(); ++l) out.push_back(current_component(field, static_cast<int>(l)));
  return out;
}

double current_imaginary_residue(const SpinorField& field, int l) {
  double worst = 0.0;
  for (std::size_t p = 0; p < field.points(); ++p)
    worst = std::max(worst, std::abs(current_form(field.spinor(p), field.ncomp(), l).imag()));
  return worst;
}

ErrorNorms error_norms(const SpinorField& numeric, const SpinorField& reference) {
  if (!numeric.same_shape(reference)) throw std::invalid_argument("error_norms: fields live on different grids");
  const std::size_t n = numeric.points(), nc = numeric.ncomp();
  const int nj = current_count(nc);
  double sphi = 0.0, srho = 0.0, sj = 0.0;
  for (std::size_t p = 0; p < n; ++p) {
    const complex* a = numeric.spinor(p);
    const complex* b = reference.spinor(p);
    double ra = 0.0, rb = 0.0;
    for (std::size_t c = 0; c < nc; ++c) {
      sphi += std::norm(a[c] - b[c]);
      ra += std::norm(a[c]);
      rb += std::norm(b[c]);
    }
    srho += (ra - rb) * (ra - rb);
    for (int l = 1; l <= nj; ++l) {
      const double dj = current_form(a, nc, l).real() - current_form(b, nc, l).real();
      sj += dj * dj;
    }
  }
  // sqrt(h^d sum) is the same number as the h * sqrt(sum) form used for
  // square 2D grids.
  const double w = numeric.grid().cell_volume();
  return {std::sqrt(w * sphi), std::sqrt(w * srho), std::sqrt(w * sj)};
}

}  // namespace dirac
