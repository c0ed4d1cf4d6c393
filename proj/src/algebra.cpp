#include "dirac/algebra.hpp"

#include <cmath>
#include <string>

namespace dirac {

Matrix2 pauli(int j) {
  Matrix2 m;
  switch (j) {
    case 1:
      m(0, 1) = 1.0;
      m(1, 0) = 1.0;
      break;
    case 2:
      m(0, 1) = -kI;
      m(1, 0) = kI;
      break;
    case 3:
      m(0, 0) = 1.0;
      m(1, 1) = -1.0;
      break;
    default:
      throw std::out_of_range("pauli: index must be 1, 2 or 3, got " + std::to_string(j));
  }
  return m;
}

namespace {

// [[0, s], [s, 0]] with 2x2 blocks
Matrix4 offdiag_blocks(const Matrix2& s) {
  Matrix4 m;
  for (std::size_t r = 0; r < 2; ++r)
    for (std::size_t c = 0; c < 2; ++c) {
      m(r, c + 2) = s(r, c);
      m(r + 2, c) = s(r, c);
    }
  return m;
}

}  // namespace

Matrix4 dirac_matrix(DiracMatrix which) {
  switch (which) {
    case DiracMatrix::Alpha1: return offdiag_blocks(pauli(1));
    case DiracMatrix::Alpha2: return offdiag_blocks(pauli(2));
    case DiracMatrix::Alpha3: return offdiag_blocks(pauli(3));
    case DiracMatrix::Beta: {
      Matrix4 m;
      m(0, 0) = 1.0;
      m(1, 1) = 1.0;
      m(2, 2) = -1.0;
      m(3, 3) = -1.0;
      return m;
    }
    case DiracMatrix::Gamma: return offdiag_blocks(Matrix2::identity());
  }
  throw std::invalid_argument("dirac_matrix: bad enumerator");
}

Matrix4 dirac_matrix(std::string_view name) {
  if (name == "alpha1" || name == "α1") return dirac_matrix(DiracMatrix::Alpha1);
  if (name == "alpha2" || name == "α2") return dirac_matrix(DiracMatrix::Alpha2);
  if (name == "alpha3" || name == "α3") return dirac_matrix(DiracMatrix::Alpha3);
  if (name == "beta" || name == "β") return dirac_matrix(DiracMatrix::Beta);
  if (name == "gamma" || name == "γ") return dirac_matrix(DiracMatrix::Gamma);
  throw std::invalid_argument("dirac_matrix: unknown name '" + std::string(name) + "'");
}

Matrix4 alpha(int j) {
  switch (j) {
    case 1: return dirac_matrix(DiracMatrix::Alpha1);
    case 2: return dirac_matrix(DiracMatrix::Alpha2);
    case 3: return dirac_matrix(DiracMatrix::Alpha3);
    default: throw std::out_of_range("alpha: index must be 1, 2 or 3, got " + std::to_string(j));
  }
}

double sinc(double x) {
  if (std::abs(x) < 1e-4) {
    const double x2 = x * x;
    return 1.0 - x2 / 6.0 * (1.0 - x2 / 20.0);
  }
  return std::sin(x) / x;
}

Matrix2 exp_pauli_affine(double v0, const Vec3& b, double s) {
  const double r = std::sqrt(b[0] * b[0] + b[1] * b[1] + b[2] * b[2]);
  const double co = std::cos(s * r);
  const double sn = s * sinc(s * r);
  const complex phase = std::polar(1.0, -s * v0);
  // cos I - i sn (b.sigma)
  Matrix2 m;
  m(0, 0) = phase * complex(co, -sn * b[2]);
  m(1, 1) = phase * complex(co, sn * b[2]);
  // b1 sigma1 + b2 sigma2 = [[0, b1 - i b2], [b1 + i b2, 0]]
  m(0, 1) = phase * (-kI * sn * complex(b[0], -b[1]));
  m(1, 0) = phase * (-kI * sn * complex(b[0], b[1]));
  return m;
}

Matrix4 exp_dirac_affine(double v0, const Vec3& a, double bcoef, double s) {
  const double r = std::sqrt(a[0] * a[0] + a[1] * a[1] + a[2] * a[2] + bcoef * bcoef);
  const double co = std::cos(s * r);
  const double sn = s * sinc(s * r);
  const complex phase = std::polar(1.0, -s * v0);
  // X = i (a.alpha - bcoef beta); a.alpha = [[0, a.sigma], [a.sigma, 0]]
  const complex ap(a[0], -a[1]);  // (a.sigma)_{01}
  const complex am(a[0], a[1]);   // (a.sigma)_{10}
  Matrix4 m;
  const complex isn = kI * sn;
  for (std::size_t i = 0; i < 4; ++i) m(i, i) = co;
  m(0, 0) -= isn * bcoef;
  m(1, 1) -= isn * bcoef;
  m(2, 2) += isn * bcoef;
  m(3, 3) += isn * bcoef;
  const complex s00 = isn * a[2], s01 = isn * ap, s10 = isn * am, s11 = -isn * a[2];
  m(0, 2) = s00;
  m(0, 3) = s01;
  m(1, 2) = s10;
  m(1, 3) = s11;
  m(2, 0) = s00;
  m(2, 1) = s01;
  m(3, 0) = s10;
  m(3, 1) = s11;
  m *= phase;
  return m;
}

template <std::size_t N>
SmallMatrix<N> exp_dense(const SmallMatrix<N>& m, double s) {
  SmallMatrix<N> x = m * complex(s);
  double norm1 = 0.0;
  for (std::size_t c = 0; c < N; ++c) {
    double col = 0.0;
    for (std::size_t r = 0; r < N; ++r) col += std::abs(x(r, c));
    norm1 = std::max(norm1, col);
  }
  int squarings = 0;
  if (norm1 > 0.5) {
    squarings = static_cast<int>(std::ceil(std::log2(norm1 / 0.5)));
    x *= complex(std::ldexp(1.0, -squarings));
  }
  // Horner form of sum_{k<=13} x^k / k!
  SmallMatrix<N> result = SmallMatrix<N>::identity();
  for (int k = 13; k >= 1; --k) {
    result = SmallMatrix<N>::identity() + (x * result) * complex(1.0 / k);
  }
  for (int i = 0; i < squarings; ++i) result = result * result;
  return result;
}

template Matrix2 exp_dense<2>(const Matrix2&, double);
template Matrix4 exp_dense<4>(const Matrix4&, double);

std::vector<complex> exp_dense(std::span<const complex> entries, std::size_t dim, double s) {
  if (dim != 2 && dim != 4)
    throw std::invalid_argument("exp_dense: unsupported dimension " + std::to_string(dim));
  if (entries.size() != dim * dim)
    throw std::invalid_argument("exp_dense: expected " + std::to_string(dim * dim) + " entries");
  if (dim == 2) {
    Matrix2 m;
    std::copy(entries.begin(), entries.end(), m.a.begin());
    const auto e = exp_dense(m, s);
    return {e.a.begin(), e.a.end()};
  }
  Matrix4 m;
  std::copy(entries.begin(), entries.end(), m.a.begin());
  const auto e = exp_dense(m, s);
  return {e.a.begin(), e.a.end()};
}

}  // namespace dirac
