#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

namespace dirac {

using complex = std::complex<double>;
using Vec3 = std::array<double, 3>;

inline constexpr complex kI{0.0, 1.0};

/// Fixed-size dense complex matrix, row-major.
template <std::size_t N>
struct SmallMatrix {
  std::array<complex, N * N> a{};

  static constexpr std::size_t size() { return N; }

  static SmallMatrix identity() {
    SmallMatrix m;
    for (std::size_t i = 0; i < N; ++i) m(i, i) = 1.0;
    return m;
  }

  complex& operator()(std::size_t r, std::size_t c) { return a[r * N + c]; }
  const complex& operator()(std::size_t r, std::size_t c) const { return a[r * N + c]; }

  SmallMatrix& operator+=(const SmallMatrix& o) {
    for (std::size_t i = 0; i < N * N; ++i) a[i] += o.a[i];
    return *this;
  }
  SmallMatrix& operator-=(const SmallMatrix& o) {
    for (std::size_t i = 0; i < N * N; ++i) a[i] -= o.a[i];
    return *this;
  }
  SmallMatrix& operator*=(complex s) {
    for (auto& v : a) v *= s;
    return *this;
  }

  friend SmallMatrix operator+(SmallMatrix l, const SmallMatrix& r) { return l += r; }
  friend SmallMatrix operator-(SmallMatrix l, const SmallMatrix& r) { return l -= r; }
  friend SmallMatrix operator-(SmallMatrix m) { return m *= -1.0; }
  friend SmallMatrix operator*(complex s, SmallMatrix m) { return m *= s; }
  friend SmallMatrix operator*(SmallMatrix m, complex s) { return m *= s; }
  friend SmallMatrix operator*(double s, SmallMatrix m) { return m *= complex(s); }

  friend SmallMatrix operator*(const SmallMatrix& l, const SmallMatrix& r) {
    SmallMatrix out;
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t k = 0; k < N; ++k) {
        const complex lik = l(i, k);
        if (lik == complex{}) continue;
        for (std::size_t j = 0; j < N; ++j) out(i, j) += lik * r(k, j);
      }
    return out;
  }

  friend bool operator==(const SmallMatrix&, const SmallMatrix&) = default;

  SmallMatrix adjoint() const {
    SmallMatrix out;
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t j = 0; j < N; ++j) out(i, j) = std::conj((*this)(j, i));
    return out;
  }

  /// y = M x for a spinor stored contiguously.
  void apply(const complex* x, complex* y) const {
    for (std::size_t i = 0; i < N; ++i) {
      complex acc{};
      for (std::size_t j = 0; j < N; ++j) acc += a[i * N + j] * x[j];
      y[i] = acc;
    }
  }
};

using Matrix2 = SmallMatrix<2>;
using Matrix4 = SmallMatrix<4>;

template <std::size_t N>
double max_abs_diff(const SmallMatrix<N>& l, const SmallMatrix<N>& r) {
  double m = 0.0;
  for (std::size_t i = 0; i < N * N; ++i) m = std::max(m, std::abs(l.a[i] - r.a[i]));
  return m;
}

enum class DiracMatrix { Alpha1, Alpha2, Alpha3, Beta, Gamma };

/// Pauli matrix sigma_j, j in {1,2,3}.
Matrix2 pauli(int j);

/// Dirac matrices in the standard (Dirac) representation; gamma is the
/// off-diagonal identity block so that alpha_1 alpha_2 = i gamma alpha_3.
Matrix4 dirac_matrix(DiracMatrix which);

/// Accepts "alpha1".."alpha3", "beta", "gamma" (also the Greek-letter spellings).
Matrix4 dirac_matrix(std::string_view name);

/// alpha_j for j in {1,2,3}.
Matrix4 alpha(int j);

/// sin(x)/x, by Taylor series near zero so the x -> 0 limit is exact.
double sinc(double x);

/// exp(s (-i v0 I - i b.sigma)), closed form.
Matrix2 exp_pauli_affine(double v0, const Vec3& b, double s);

/// exp(s (-i v0 I + i a.alpha - i bcoef beta)), using (a.alpha + b beta)^2 = (|a|^2 + b^2) I.
Matrix4 exp_dirac_affine(double v0, const Vec3& a, double bcoef, double s);

/// exp(s M) by 13-term Taylor with scaling and squaring.
template <std::size_t N>
SmallMatrix<N> exp_dense(const SmallMatrix<N>& m, double s);

/// Runtime-dimension variant; dim must be 2 or 4 and entries row-major dim*dim.
std::vector<complex> exp_dense(std::span<const complex> entries, std::size_t dim, double s);

extern template Matrix2 exp_dense<2>(const Matrix2&, double);
extern template Matrix4 exp_dense<4>(const Matrix4&, double);

}  // namespace dirac
