#include "dirac/propagators.hpp"

#include <cmath>
#include <string>

namespace dirac {

namespace {

void check_components(std::size_t dim, std::size_t ncomp) {
  if (ncomp != 2 && ncomp != 4) throw std::invalid_argument("spinor must have 2 or 4 components");
  if (ncomp == 2 && dim > 2)
    throw std::invalid_argument("two-component spinors are only defined for d = 1, 2; use four components in 3D");
}

/// The constant matrices of one representation.
template <std::size_t N>
struct Representation {
  std::array<SmallMatrix<N>, 3> K;  // sigma_j / alpha_j
  SmallMatrix<N> B;                 // sigma_3 / beta
  SmallMatrix<N> G;                 // gamma (zero for two components)
  std::array<SmallMatrix<N>, 3> GK; // gamma alpha_j; sigma_3 stands in for gamma alpha_3
};

Representation<2> pauli_representation() {
  Representation<2> r;
  r.K = {pauli(1), pauli(2), pauli(3)};
  r.B = pauli(3);
  r.GK[2] = pauli(3);
  return r;
}

Representation<4> dirac_representation() {
  Representation<4> r;
  r.K = {alpha(1), alpha(2), alpha(3)};
  r.B = dirac_matrix(DiracMatrix::Beta);
  r.G = dirac_matrix(DiracMatrix::Gamma);
  for (int j = 0; j < 3; ++j) r.GK[j] = r.G * r.K[j];
  return r;
}

template <std::size_t N>
const Representation<N>& representation() {
  if constexpr (N == 2) {
    static const auto r = pauli_representation();
    return r;
  } else {
    static const auto r = dirac_representation();
    return r;
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// Kinetic factor

KineticPropagator::KineticPropagator(const PeriodicGrid& grid, std::size_t ncomp, PhysicalConstants constants)
    : grid_(grid), ncomp_(ncomp), k_(constants), fft_(Fft::get(grid, ncomp)) {
  check_components(grid.dim(), ncomp);
  for (std::size_t j = 0; j < grid.dim(); ++j) {
    const auto mu = fourier_modes(grid, j);
    modes_[j].resize(grid.size());
    for (std::size_t p = 0; p < grid.size(); ++p) modes_[j][p] = mu[grid.index(p)[j]];
  }
}

double KineticPropagator::dispersion(std::size_t mode) const {
  const double mc2 = k_.m * k_.c * k_.c;
  double mu2 = 0.0;
  for (std::size_t j = 0; j < grid_.dim(); ++j) mu2 += modes_[j][mode] * modes_[j][mode];
  return std::sqrt(mc2 * mc2 + k_.c * k_.c * mu2);
}

const KineticPropagator::Table& KineticPropagator::table(double s) {
  if (auto it = tables_.find(s); it != tables_.end()) return it->second;
  if (tables_.size() >= 16) tables_.clear();
  using ld = long double;
  using cld = std::complex<long double>;
  const ld c = k_.c;
  const ld mc2 = static_cast<ld>(k_.m) * c * c;
  const std::size_t d = grid_.dim();
  const std::size_t per_mode = ncomp_ == 2 ? 4 : 5;
  Table t;
  t.entries.resize(grid_.size() * per_mode);
  for (std::size_t p = 0; p < grid_.size(); ++p) {
    const ld mu1 = modes_[0][p];
    const ld mu2 = d > 1 ? modes_[1][p] : 0.0L;
    const ld mu3 = d > 2 ? modes_[2][p] : 0.0L;
    const ld delta = std::sqrt(mc2 * mc2 + c * c * (mu1 * mu1 + mu2 * mu2 + mu3 * mu3));
    const ld theta = s * delta;
    const ld co = std::cos(theta);
    // sin(theta)/delta without cancellation near theta = 0
    const ld sv = std::abs(theta) < 1e-4L ? s * (1.0L - theta * theta / 6.0L * (1.0L - theta * theta / 20.0L))
                                          : std::sin(theta) / delta;
    const cld misv(0.0L, -sv);
    const cld up(c * mu1, -c * mu2), dn(c * mu1, c * mu2);  // (c mu.sigma)_{01}, _{10}
    complex* e = t.entries.data() + p * per_mode;
    if (ncomp_ == 2) {
      // Gamma = [[mc2, c(mu1 - i mu2)], [c(mu1 + i mu2), -mc2]]
      e[0] = complex(cld(co, -sv * mc2));
      e[1] = complex(misv * up);
      e[2] = complex(misv * dn);
      e[3] = complex(cld(co, sv * mc2));
    } else {
      // Gamma = [[mc2 I, c mu.sigma], [c mu.sigma, -mc2 I]]
      e[0] = complex(cld(co, -sv * mc2));
      e[1] = complex(cld(co, sv * mc2));
      e[2] = complex(misv * (c * mu3));
      e[3] = complex(misv * up);
      e[4] = complex(misv * dn);
    }
  }
  return tables_.emplace(s, std::move(t)).first->second;
}

void KineticPropagator::apply(SpinorField& field, double s) {
  if (field.ncomp() != ncomp_ || !(field.grid() == grid_))
    throw std::invalid_argument("KineticPropagator: field shape does not match");
  if (s == 0.0) return;
  const Table& t = table(s);
  fft_->forward(field.data());
  const std::size_t n = grid_.size();
  complex* d = field.data().data();
  const complex* e = t.entries.data();
  if (ncomp_ == 2) {
    for (std::size_t p = 0; p < n; ++p, e += 4) {
      complex* u = d + 2 * p;
      const complex a = u[0], b = u[1];
      u[0] = e[0] * a + e[1] * b;
      u[1] = e[2] * a + e[3] * b;
    }
  } else {
    for (std::size_t p = 0; p < n; ++p, e += 5) {
      complex* u = d + 4 * p;
      const complex u0 = u[0], u1 = u[1], u2 = u[2], u3 = u[3];
      u[0] = e[0] * u0 + e[2] * u2 + e[3] * u3;
      u[1] = e[0] * u1 + e[4] * u2 - e[2] * u3;
      u[2] = e[1] * u2 + e[2] * u0 + e[3] * u1;
      u[3] = e[1] * u3 + e[4] * u0 - e[2] * u1;
    }
  }
  fft_->inverse(field.data());
}

// ---------------------------------------------------------------------------
// Potential factors

PotentialPropagator::PotentialPropagator(const PeriodicGrid& grid, std::size_t ncomp, const PotentialModel& model)
    : grid_(grid), ncomp_(ncomp), model_(&model) {
  check_components(grid.dim(), ncomp);
  if (grid.dim() != model.dim())
    throw std::invalid_argument("PotentialPropagator: grid dimension " + std::to_string(grid.dim()) +
                                " does not match potential dimension " + std::to_string(model.dim()));
}

PotentialPropagator::Factor PotentialPropagator::build(double t_eval, double s, double correction) const {
  std::vector<double> V;
  std::array<std::vector<double>, 3> A;
  model_->sample(t_eval, grid_, V, A);
  const double e = model_->constants().e;
  const std::size_t n = grid_.size();
  const std::size_t d = grid_.dim();
  Factor f;
  if (!model_->has_magnetic()) {
    f.scalar = true;
    f.values.resize(n);
    for (std::size_t p = 0; p < n; ++p) f.values[p] = std::polar(1.0, -s * e * V[p]);
    return f;
  }
  f.scalar = false;
  f.values.resize(n * ncomp_ * ncomp_);
  for (std::size_t p = 0; p < n; ++p) {
    Vec3 a{0.0, 0.0, 0.0};
    for (std::size_t k = 0; k < d; ++k) a[k] = e * A[k][p];
    const double mass_term = correction * A[0][p] * A[0][p];
    if (ncomp_ == 2) {
      const Matrix2 m = exp_pauli_affine(e * V[p], Vec3{-a[0], -a[1], mass_term}, s);
      std::copy(m.a.begin(), m.a.end(), f.values.begin() + static_cast<std::ptrdiff_t>(p * 4));
    } else {
      const Matrix4 m = exp_dirac_affine(e * V[p], a, mass_term, s);
      std::copy(m.a.begin(), m.a.end(), f.values.begin() + static_cast<std::ptrdiff_t>(p * 16));
    }
  }
  return f;
}

void PotentialPropagator::apply_factor(const Factor& f, SpinorField& field) const {
  const std::size_t n = grid_.size();
  complex* d = field.data().data();
  if (f.scalar) {
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t c = 0; c < ncomp_; ++c) d[p * ncomp_ + c] *= f.values[p];
    return;
  }
  if (ncomp_ == 2) {
    for (std::size_t p = 0; p < n; ++p) {
      const complex* m = f.values.data() + 4 * p;
      complex* u = d + 2 * p;
      const complex a = u[0], b = u[1];
      u[0] = m[0] * a + m[1] * b;
      u[1] = m[2] * a + m[3] * b;
    }
  } else {
    for (std::size_t p = 0; p < n; ++p) {
      const complex* m = f.values.data() + 16 * p;
      complex* u = d + 4 * p;
      const complex x[4] = {u[0], u[1], u[2], u[3]};
      for (int r = 0; r < 4; ++r) u[r] = m[4 * r] * x[0] + m[4 * r + 1] * x[1] + m[4 * r + 2] * x[2] + m[4 * r + 3] * x[3];
    }
  }
}

void PotentialPropagator::apply_with(SpinorField& field, double t_eval, double s, double correction) {
  if (field.ncomp() != ncomp_ || !(field.grid() == grid_))
    throw std::invalid_argument("PotentialPropagator: field shape does not match");
  if (s == 0.0) return;
  if (!model_->time_independent()) {
    apply_factor(build(t_eval, s, correction), field);
    return;
  }
  const auto key = std::make_pair(s, correction);
  auto it = cache_.find(key);
  if (it == cache_.end()) {
    if (cache_.size() >= 16) cache_.clear();
    it = cache_.emplace(key, build(t_eval, s, correction)).first;
  }
  apply_factor(it->second, field);
}

void PotentialPropagator::apply(SpinorField& field, double t_eval, double s) { apply_with(field, t_eval, s, 0.0); }

void PotentialPropagator::apply_compact(SpinorField& field, double t_eval, double s, double tau) {
  if (!model_->has_magnetic()) {
    apply_with(field, t_eval, s, 0.0);
    return;
  }
  if (grid_.dim() >= 2)
    throw UnsupportedCommutatorTransport(
        "compact potential step with a magnetic potential in " + std::to_string(grid_.dim()) +
        "D needs transport of the double commutator, which is not supported");
  const auto& k = model_->constants();
  // (tau^2/48) * 4 e^2 m c^2 A_1^2 on the sigma_3 / beta direction
  apply_with(field, t_eval, s, tau * tau * k.e * k.e * k.m * k.c * k.c / 12.0);
}

SpinorField kinetic_step(const SpinorField& field, double s, const PhysicalConstants& constants) {
  SpinorField out = field;
  KineticPropagator(field.grid(), field.ncomp(), constants).apply(out, s);
  return out;
}

SpinorField potential_step(const SpinorField& field, double t_eval, double s, const PotentialModel& model) {
  SpinorField out = field;
  PotentialPropagator(field.grid(), field.ncomp(), model).apply(out, t_eval, s);
  return out;
}

SpinorField compact_potential_step(const SpinorField& field, double t_eval, double s, double tau,
                                   const PotentialModel& model) {
  SpinorField out = field;
  PotentialPropagator(field.grid(), field.ncomp(), model).apply_compact(out, t_eval, s, tau);
  return out;
}

// ---------------------------------------------------------------------------
// Double commutator, closed form

std::span<const complex> CommutatorCoefficients::block(std::size_t order, std::size_t point) const {
  const std::size_t nn = ncomp * ncomp;
  if (order == 0) return std::span<const complex>(zeroth).subspan(point * nn, nn);
  if (order > dim) throw std::out_of_range("CommutatorCoefficients::block: order exceeds dimension");
  return std::span<const complex>(first[order - 1]).subspan(point * nn, nn);
}

bool CommutatorCoefficients::vanishes() const {
  for (const auto& v : zeroth)
    if (v != complex{}) return false;
  for (std::size_t j = 0; j < dim; ++j)
    for (const auto& v : first[j])
      if (v != complex{}) return false;
  return true;
}

SpinorField CommutatorCoefficients::apply(const SpinorField& field) const {
  if (field.ncomp() != ncomp || field.grid().dim() != dim || field.points() * ncomp * ncomp != zeroth.size())
    throw std::invalid_argument("CommutatorCoefficients::apply: field shape does not match");
  const std::size_t n = field.points(), nc = ncomp, nn = nc * nc;
  SpinorField out(field.grid(), nc);
  auto mat_vec_add = [nc](const complex* m, const complex* x, complex* y) {
    for (std::size_t r = 0; r < nc; ++r)
      for (std::size_t c = 0; c < nc; ++c) y[r] += m[r * nc + c] * x[c];
  };
  for (std::size_t p = 0; p < n; ++p) mat_vec_add(zeroth.data() + p * nn, field.spinor(p), out.spinor(p));
  for (std::size_t j = 0; j < dim; ++j) {
    const auto df = spectral_derivative(field.grid(), field.data(), nc, j);
    for (std::size_t p = 0; p < n; ++p) mat_vec_add(first[j].data() + p * nn, df.data() + p * nc, out.spinor(p));
  }
  return out;
}

namespace {

template <std::size_t N>
void fill_coefficients(CommutatorCoefficients& cc, const PotentialModel& model, double t, const PeriodicGrid& grid,
                       CommutatorForm form) {
  const auto& rep = representation<N>();
  const auto& k = model.constants();
  const std::size_t d = grid.dim();
  const std::size_t n = grid.size();
  const double ce2 = k.c * k.e * k.e;
  const double mc2e2 = k.m * k.c * k.c * k.e * k.e;
  cc.zeroth.assign(n * N * N, complex{});
  for (std::size_t j = 0; j < d; ++j) cc.first[j].assign(n * N * N, complex{});
  if (!model.has_magnetic()) return;

  auto store = [&](std::vector<complex>& dst, std::size_t p, const SmallMatrix<N>& m) {
    std::copy(m.a.begin(), m.a.end(), dst.begin() + static_cast<std::ptrdiff_t>(p * N * N));
  };

  for (std::size_t p = 0; p < n; ++p) {
    const Vec3 x = grid.coordinates(p);
    const auto s = model.at(t, x);
    const Vec3& A = s.A;
    double a2 = 0.0;
    for (std::size_t j = 0; j < d; ++j) a2 += A[j] * A[j];

    // F_j = 4 c e^2 ( -(|A|^2 - A_j^2) K_j + sum_{l != j} A_j A_l K_l )
    for (std::size_t j = 0; j < d; ++j) {
      SmallMatrix<N> F = (-(a2 - A[j] * A[j])) * rep.K[j];
      for (std::size_t l = 0; l < d; ++l)
        if (l != j) F += (A[j] * A[l]) * rep.K[l];
      store(cc.first[j], p, (4.0 * ce2) * F);
    }

    // F_0 = 1/2 sum_j d_j F_j + 2 i c e^2 (A . curl A) gamma + 4 i c e^2 ((grad V) x A) . (gamma K)
    //       - 4 i e^2 m c^2 |A|^2 B
    // AsPrinted uses 4 c e^2 sum_{j != k} (A_k d_j A_j - A_j d_k A_j) for the K_k part of the
    // first term and 4i in place of 2i on gamma.
    SmallMatrix<N> F0 = complex(0.0, -4.0 * mc2e2 * a2) * rep.B;
    if (d >= 2) {
      const auto g = model.gradients_at(t, x);
      const auto dA = [&](std::size_t comp, std::size_t axis) { return g.dA[comp][axis]; };
      SmallMatrix<N> transport;
      for (std::size_t k = 0; k < d; ++k) {
        double coef = 0.0;
        for (std::size_t j = 0; j < d; ++j) {
          if (j == k) continue;
          if (form == CommutatorForm::Corrected)
            coef += 0.5 * (A[k] * dA(j, j) + A[j] * dA(k, j) - 2.0 * A[j] * dA(j, k));
          else
            coef += A[k] * dA(j, j) - A[j] * dA(j, k);
        }
        transport += coef * rep.K[k];
      }
      if (d == 3) {
        const double helicity = A[0] * (dA(2, 1) - dA(1, 2)) + A[1] * (dA(0, 2) - dA(2, 0)) +
                                A[2] * (dA(1, 0) - dA(0, 1));
        transport += complex(0.0, form == CommutatorForm::Corrected ? 0.5 * helicity : helicity) * rep.G;
        const Vec3& dV = g.dV;
        const Vec3 cross{dV[1] * A[2] - dV[2] * A[1], dV[2] * A[0] - dV[0] * A[2], dV[0] * A[1] - dV[1] * A[0]};
        for (std::size_t j = 0; j < 3; ++j) transport += complex(0.0, cross[j]) * rep.GK[j];
      } else {
        const double cross3 = g.dV[0] * A[1] - g.dV[1] * A[0];
        transport += complex(0.0, cross3) * rep.GK[2];
      }
      F0 += (4.0 * ce2) * transport;
    }
    store(cc.zeroth, p, F0);
  }
}

}  // namespace

CommutatorCoefficients double_commutator_coefficients(const PotentialModel& model, double t, double tau,
                                                      const PeriodicGrid& grid, std::size_t ncomp, CommutatorForm form) {
  check_components(grid.dim(), ncomp);
  if (grid.dim() != model.dim())
    throw std::invalid_argument("double_commutator_coefficients: grid and potential dimensions differ");
  CommutatorCoefficients cc;
  cc.dim = grid.dim();
  cc.ncomp = ncomp;
  cc.weight = tau * tau / 48.0;
  if (ncomp == 2)
    fill_coefficients<2>(cc, model, t, grid, form);
  else
    fill_coefficients<4>(cc, model, t, grid, form);
  return cc;
}

// ---------------------------------------------------------------------------
// Double commutator, brute force

namespace {

template <std::size_t N>
SpinorField bruteforce(const SpinorField& field, double t, const PotentialModel& model, OracleDerivatives mode) {
  const auto& rep = representation<N>();
  const auto& k = model.constants();
  const PeriodicGrid& grid = field.grid();
  const std::size_t d = grid.dim(), n = grid.size();
  const double mc2 = k.m * k.c * k.c;
  using Mat = SmallMatrix<N>;

  std::vector<Mat> W(n);
  std::vector<std::array<Mat, 3>> dW(n);
  for (std::size_t p = 0; p < n; ++p) {
    const Vec3 x = grid.coordinates(p);
    const auto s = model.at(t, x);
    Mat w = s.V * Mat::identity();
    for (std::size_t j = 0; j < d; ++j) w -= s.A[j] * rep.K[j];
    W[p] = complex(0.0, -k.e) * w;
    if (mode == OracleDerivatives::ProductRule && model.has_magnetic()) {
      const auto g = model.gradients_at(t, x);
      for (std::size_t j = 0; j < d; ++j) {
        Mat dw = g.dV[j] * Mat::identity();
        for (std::size_t l = 0; l < d; ++l) dw -= g.dA[l][j] * rep.K[l];
        dW[p][j] = complex(0.0, -k.e) * dw;
      }
    } else if (mode == OracleDerivatives::ProductRule) {
      // A = 0: d_j W = -i e d_j V I
      const auto g = model.gradients_at(t, x);
      for (std::size_t j = 0; j < d; ++j) dW[p][j] = complex(0.0, -k.e * g.dV[j]) * Mat::identity();
    }
  }

  auto pointwise = [&](const std::vector<Mat>& M, std::span<const complex> f) {
    std::vector<complex> out(n * N);
    for (std::size_t p = 0; p < n; ++p) M[p].apply(f.data() + p * N, out.data() + p * N);
    return out;
  };

  // T g = -c sum_j K_j d_j g - i m c^2 B g, with d_j g supplied.
  auto kinetic = [&](std::span<const complex> g, const std::array<std::vector<complex>, 3>& dg) {
    std::vector<complex> out(n * N);
    complex tmp[N];
    for (std::size_t p = 0; p < n; ++p) {
      complex* o = out.data() + p * N;
      rep.B.apply(g.data() + p * N, tmp);
      for (std::size_t r = 0; r < N; ++r) o[r] = complex(0.0, -mc2) * tmp[r];
      for (std::size_t j = 0; j < d; ++j) {
        rep.K[j].apply(dg[j].data() + p * N, tmp);
        for (std::size_t r = 0; r < N; ++r) o[r] -= k.c * tmp[r];
      }
    }
    return out;
  };

  std::array<std::vector<complex>, 3> df;
  for (std::size_t j = 0; j < d; ++j) df[j] = spectral_derivative(grid, field.data(), N, j);

  // derivatives of M f, either by the product rule or spectrally
  auto derivatives_of_product = [&](const std::vector<Mat>& M, const std::vector<std::array<Mat, 3>>& dM,
                                    std::span<const complex> Mf) {
    std::array<std::vector<complex>, 3> out;
    for (std::size_t j = 0; j < d; ++j) {
      if (mode == OracleDerivatives::Spectral) {
        out[j] = spectral_derivative(grid, Mf, N, j);
        continue;
      }
      out[j].assign(n * N, complex{});
      complex a[N], b[N];
      for (std::size_t p = 0; p < n; ++p) {
        dM[p][j].apply(field.spinor(p), a);
        M[p].apply(df[j].data() + p * N, b);
        for (std::size_t r = 0; r < N; ++r) out[j][p * N + r] = a[r] + b[r];
      }
    }
    return out;
  };

  std::vector<Mat> W2(n);
  std::vector<std::array<Mat, 3>> dW2(n);
  for (std::size_t p = 0; p < n; ++p) {
    W2[p] = W[p] * W[p];
    for (std::size_t j = 0; j < d; ++j) dW2[p][j] = dW[p][j] * W[p] + W[p] * dW[p][j];
  }

  const auto Wf = pointwise(W, field.data());
  const auto W2f = pointwise(W2, field.data());
  const auto TWf = kinetic(Wf, derivatives_of_product(W, dW, Wf));
  const auto Tf = kinetic(field.data(), df);
  const auto TW2f = kinetic(W2f, derivatives_of_product(W2, dW2, W2f));
  const auto WTWf = pointwise(W, TWf);
  const auto W2Tf = pointwise(W2, Tf);

  SpinorField out(grid, N);
  for (std::size_t i = 0; i < n * N; ++i) out.data()[i] = 2.0 * WTWf[i] - W2Tf[i] - TW2f[i];
  return out;
}

}  // namespace

SpinorField double_commutator_bruteforce(const SpinorField& field, double t, const PotentialModel& model,
                                         OracleDerivatives mode) {
  check_components(field.grid().dim(), field.ncomp());
  if (field.grid().dim() != model.dim())
    throw std::invalid_argument("double_commutator_bruteforce: grid and potential dimensions differ");
  if (field.ncomp() == 2) return bruteforce<2>(field, t, model, mode);
  return bruteforce<4>(field, t, model, mode);
}

}  // namespace dirac
