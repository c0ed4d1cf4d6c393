// Independent reference computations for the tests. Nothing here calls into
// the library except for plain data types.
#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

#include "dirac/algebra.hpp"
#include "dirac/grid.hpp"

namespace oracle {

using dirac::complex;
using lcomplex = std::complex<long double>;

template <std::size_t N>
using LMat = std::array<lcomplex, N * N>;

template <std::size_t N>
LMat<N> lmul(const LMat<N>& l, const LMat<N>& r) {
  LMat<N> out{};
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t k = 0; k < N; ++k)
      for (std::size_t j = 0; j < N; ++j) out[i * N + j] += l[i * N + k] * r[k * N + j];
  return out;
}

// exp(s M): Taylor series in long double after scaling the norm below 1/8,
// then repeated squaring.
template <std::size_t N>
dirac::SmallMatrix<N> expm(const dirac::SmallMatrix<N>& m, double s) {
  LMat<N> a{};
  long double norm = 0;
  for (std::size_t i = 0; i < N * N; ++i) {
    a[i] = lcomplex(m.a[i].real(), m.a[i].imag()) * static_cast<long double>(s);
    norm += std::abs(a[i]);
  }
  int squarings = 0;
  while (norm > 0.125L) {
    norm /= 2;
    ++squarings;
  }
  const long double scale = std::ldexp(1.0L, -squarings);
  for (auto& v : a) v *= scale;
  LMat<N> sum{}, term{};
  for (std::size_t i = 0; i < N; ++i) sum[i * N + i] = term[i * N + i] = 1;
  for (int k = 1; k <= 30; ++k) {
    term = lmul<N>(term, a);
    for (auto& v : term) v /= static_cast<long double>(k);
    for (std::size_t i = 0; i < N * N; ++i) sum[i] += term[i];
  }
  for (int q = 0; q < squarings; ++q) sum = lmul<N>(sum, sum);
  dirac::SmallMatrix<N> out;
  for (std::size_t i = 0; i < N * N; ++i) out.a[i] = complex(double(sum[i].real()), double(sum[i].imag()));
  return out;
}

// Literal Pauli and Dirac matrices (standard representation).
inline dirac::Matrix2 sigma(int j) {
  dirac::Matrix2 m;
  const complex i(0, 1);
  if (j == 1) m.a = {0, 1, 1, 0};
  if (j == 2) m.a = {0, -i, i, 0};
  if (j == 3) m.a = {1, 0, 0, -1};
  return m;
}

inline dirac::Matrix4 block(const dirac::Matrix2& tl, const dirac::Matrix2& tr, const dirac::Matrix2& bl,
                            const dirac::Matrix2& br) {
  dirac::Matrix4 m;
  for (std::size_t r = 0; r < 2; ++r)
    for (std::size_t c = 0; c < 2; ++c) {
      m(r, c) = tl(r, c);
      m(r, c + 2) = tr(r, c);
      m(r + 2, c) = bl(r, c);
      m(r + 2, c + 2) = br(r, c);
    }
  return m;
}

inline dirac::Matrix4 alpha(int j) { return block({}, sigma(j), sigma(j), {}); }
inline dirac::Matrix4 beta() { return block(dirac::Matrix2::identity(), {}, {}, -dirac::Matrix2::identity()); }
inline dirac::Matrix4 gamma() { return block({}, dirac::Matrix2::identity(), dirac::Matrix2::identity(), {}); }

// O(M^2) DFT along a 1D signal, forward unnormalised.
inline std::vector<complex> dft(const std::vector<complex>& x, int sign = -1) {
  const std::size_t M = x.size();
  std::vector<complex> out(M);
  for (std::size_t k = 0; k < M; ++k) {
    long double re = 0, im = 0;
    for (std::size_t n = 0; n < M; ++n) {
      const long double ang = sign * 2.0L * std::numbers::pi_v<long double> * (long double)(k * n % M) / M;
      re += x[n].real() * std::cos(ang) - x[n].imag() * std::sin(ang);
      im += x[n].real() * std::sin(ang) + x[n].imag() * std::cos(ang);
    }
    out[k] = complex(double(re), double(im));
  }
  return out;
}

// Richardson-extrapolated central difference, error O(h^4).
inline double derivative(const std::function<double(double)>& f, double x, double h = 1e-3) {
  const double d1 = (f(x + h) - f(x - h)) / (2 * h);
  const double d2 = (f(x + h / 2) - f(x - h / 2)) / h;
  return (4 * d2 - d1) / 3;
}

// Richardson differences on a halving ladder of steps from 0.1 down to ~1e-9;
// returns the estimate that agrees best with its coarser neighbour, so a
// rapidly varying function gets a small enough step without a hand-tuned h.
inline double derivative_adaptive(const std::function<double(double)>& f, double x) {
  double h = 0.1, prev = derivative(f, x, h), best = prev, best_gap = INFINITY;
  for (int k = 1; k < 28; ++k) {
    h /= 2;
    const double cur = derivative(f, x, h);
    const double gap = std::abs(cur - prev);
    if (gap < best_gap) {
      best_gap = gap;
      best = cur;
    }
    prev = cur;
  }
  return best;
}

// sqrt(sum |a - b|^2) / sqrt(sum |b|^2)
inline double rel_l2(std::span<const complex> a, std::span<const complex> b) {
  double num = 0, den = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += std::norm(a[i] - b[i]);
    den += std::norm(b[i]);
  }
  return std::sqrt(num / den);
}

inline double max_abs(std::span<const complex> a, std::span<const complex> b) {
  double m = 0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace oracle
