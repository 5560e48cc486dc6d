#include "tbcont/continuum.hpp"

#include <cmath>
#include <set>

#include "tbcont/error.hpp"

namespace tbcont {

namespace {

double binom(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * double(n - k + i) / double(i);
  return r;
}

cplx zeta_pow(const Vec2& z, const std::array<int, 2>& a) { return ipow(z.x(), a[0]) * ipow(z.y(), a[1]); }

void check_hermitian(const CMat& M, const char* what) {
  if ((M - M.adjoint()).norm() > 1e-12 * (1.0 + M.norm()))
    fail(Errc::precondition, std::string(what) + " block is not Hermitian");
}

}  // namespace

WeylOperator::WeylOperator(const PolySymbol& b, int Kx, int Ky, double Lx, double Ly)
    : n_(b.n()), Kx_(Kx), Ky_(Ky), Lx_(Lx), Ly_(Ly) {
  SpectralField shape(n_, Kx, Ky, Lx, Ly);
  const std::size_t M = shape.modes();
  const_blocks_.assign(M * std::size_t(n_ * n_), 0.0);
  for (const auto& t : b.terms()) {
    const double dk = ipow(b.delta(), t.delta_power);
    if (dk == 0.0) continue;
    if (t.coeff.is_constant()) {
      has_const_ = true;
      const cplx c = dk * t.coeff.constant_value();
      for (int k = -Kx; k <= Kx; ++k)
        for (int l = -Ky; l <= Ky; ++l) {
          const cplx f = c * zeta_pow(shape.zeta(k, l), t.alpha);
          if (f == cplx(0.0)) continue;
          cplx* blk = const_blocks_.data() + shape.index(0, k, l) * std::size_t(n_ * n_);
          for (int r = 0; r < n_; ++r)
            for (int s = 0; s < n_; ++s) blk[r * n_ + s] += f * t.matrix(r, s);
        }
    } else {
      if (t.degree() > 2)
        fail(Errc::unsupported, "monomial of order > 2 with non-constant coefficient");
      if (!grid_) grid_ = std::make_unique<SpectralGrid>(Kx, Ky, Lx, Ly);
      var_.push_back({t.alpha, dk * t.matrix, grid_->sample([&](const Vec2& X) { return t.coeff(X); })});
    }
  }
}

void WeylOperator::apply(const SpectralField& in, SpectralField& out) const {
  if (in.n() != n_ || in.Kx() != Kx_ || in.Ky() != Ky_) fail(Errc::invalid_parameter, "field shape");
  out = SpectralField(n_, Kx_, Ky_, Lx_, Ly_);
  const std::size_t M = in.modes();
  if (has_const_) {
    for (std::size_t m = 0; m < M; ++m) {
      const cplx* blk = const_blocks_.data() + m * std::size_t(n_ * n_);
      for (int r = 0; r < n_; ++r) {
        cplx s = 0.0;
        for (int c = 0; c < n_; ++c) s += blk[r * n_ + c] * in.data()[std::size_t(c) * M + m];
        out.data()[std::size_t(r) * M + m] += s;
      }
    }
  }
  if (var_.empty()) return;

  const std::size_t P = grid_->points();
  auto key = [](const std::array<int, 2>& a) { return a[0] * 3 + a[1]; };
  std::map<int, std::vector<cplx>> Dphi, acc;
  auto derivative_grid = [&](const std::array<int, 2>& g) -> const std::vector<cplx>& {
    auto it = Dphi.find(key(g));
    if (it != Dphi.end()) return it->second;
    SpectralField d = in;
    for (int c = 0; c < n_; ++c)
      for (int k = -Kx_; k <= Kx_; ++k)
        for (int l = -Ky_; l <= Ky_; ++l) d(c, k, l) *= zeta_pow(d.zeta(k, l), g);
    std::vector<cplx> s;
    grid_->to_grid(d, s);
    return Dphi.emplace(key(g), std::move(s)).first->second;
  };

  for (const auto& t : var_) {
    for (int b1 = 0; b1 <= t.alpha[0]; ++b1)
      for (int b2 = 0; b2 <= t.alpha[1]; ++b2) {
        const std::array<int, 2> beta{b1, b2}, gam{t.alpha[0] - b1, t.alpha[1] - b2};
        const double w = binom(t.alpha[0], b1) * binom(t.alpha[1], b2) / double(1 << (t.alpha[0] + t.alpha[1]));
        const auto& src = derivative_grid(gam);
        auto& dst = acc[key(beta)];
        if (dst.empty()) dst.assign(std::size_t(n_) * P, 0.0);
        for (std::size_t p = 0; p < P; ++p) {
          const cplx cw = w * t.samples[p];
          for (int r = 0; r < n_; ++r) {
            cplx s = 0.0;
            for (int c = 0; c < n_; ++c) s += t.matrix(r, c) * src[std::size_t(c) * P + p];
            dst[std::size_t(r) * P + p] += cw * s;
          }
        }
      }
  }
  SpectralField tmp(n_, Kx_, Ky_, Lx_, Ly_);
  for (const auto& [kb, samples] : acc) {
    const std::array<int, 2> beta{kb / 3, kb % 3};
    grid_->from_grid(samples, tmp);
    for (int c = 0; c < n_; ++c)
      for (int k = -Kx_; k <= Kx_; ++k)
        for (int l = -Ky_; l <= Ky_; ++l) out(c, k, l) += zeta_pow(tmp.zeta(k, l), beta) * tmp(c, k, l);
  }
}

SpectralField weyl_apply(const PolySymbol& b, const SpectralField& phi) {
  WeylOperator W(b, phi.Kx(), phi.Ky(), phi.Lx(), phi.Ly());
  SpectralField out;
  W.apply(phi, out);
  return out;
}

SplitOperator::SplitOperator(const PolySymbol& b, int Kx, int Ky, double Lx, double Ly)
    : n_(b.n()), Kx_(Kx), Ky_(Ky), Lx_(Lx), Ly_(Ly) {
  SpectralField shape(n_, Kx, Ky, Lx, Ly);
  const std::size_t M = shape.modes();
  A_modes_.assign(M, CMat::Zero(n_, n_));
  PolySymbol varsym(n_, b.p());
  varsym.set_delta(b.delta());
  bool mixed = false;
  std::vector<const PolyTerm*> pointwise;
  for (const auto& t : b.terms()) {
    const double dk = ipow(b.delta(), t.delta_power);
    if (dk == 0.0) continue;
    if (t.coeff.is_constant()) {
      const cplx c = dk * t.coeff.constant_value();
      for (int k = -Kx; k <= Kx; ++k)
        for (int l = -Ky; l <= Ky; ++l)
          A_modes_[shape.index(0, k, l)] += (c * zeta_pow(shape.zeta(k, l), t.alpha)) * t.matrix;
    } else {
      varsym.add(t.alpha, t.matrix, t.coeff, t.delta_power);
      if (t.degree() == 0) pointwise.push_back(&t);
      else mixed = true;
    }
  }
  A_eval_.resize(M);
  A_evec_.resize(M);
  for (std::size_t m = 0; m < M; ++m) {
    check_hermitian(A_modes_[m], "Fourier");
    if (n_ > 2) {
      Eigen::SelfAdjointEigenSolver<CMat> es(A_modes_[m]);
      A_eval_[m] = es.eigenvalues();
      A_evec_[m] = es.eigenvectors();
    }
  }
  meta_["mixed_terms"] = mixed ? "rk4-substepped" : "none";
  if (mixed) {
    mixed_ = std::make_unique<WeylOperator>(varsym, Kx, Ky, Lx, Ly);
    has_B_ = true;
    // crude bound for the substep count
    SpectralGrid g(Kx, Ky, Lx, Ly);
    const double zmax = std::max(2 * pi * Kx / Lx, 2 * pi * Ky / Ly);
    for (const auto& t : varsym.terms()) {
      double cmax = 0.0;
      for (int a = 0; a < g.Gx(); ++a)
        for (int bb = 0; bb < g.Gy(); ++bb) cmax = std::max(cmax, std::abs(t.coeff(g.point(a, bb))));
      B_norm_ += cmax * t.matrix.norm() * ipow(b.delta(), t.delta_power) * ipow(zmax, t.degree());
    }
    return;
  }
  if (!pointwise.empty()) {
    has_B_ = true;
    grid_ = std::make_unique<SpectralGrid>(Kx, Ky, Lx, Ly);
    const std::size_t P = grid_->points();
    B_eval_.resize(P);
    B_evec_.resize(P);
    for (int a = 0; a < grid_->Gx(); ++a)
      for (int bb = 0; bb < grid_->Gy(); ++bb) {
        const Vec2 X = grid_->point(a, bb);
        CMat B = CMat::Zero(n_, n_);
        for (const PolyTerm* t : pointwise) B += (ipow(b.delta(), t->delta_power) * t->coeff(X)) * t->matrix;
        check_hermitian(B, "pointwise");
        Eigen::SelfAdjointEigenSolver<CMat> es(B);
        const std::size_t p = std::size_t(a) * grid_->Gy() + bb;
        B_eval_[p] = es.eigenvalues();
        B_evec_[p] = es.eigenvectors();
      }
  }
}

namespace {
CMat pauli_exp(const CMat& A, double s) {
  // A = a0 + a . sigma; exp(-i s A) = e^{-i s a0} (cos(s|a|) - i sin(s|a|) a.sigma / |a|)
  const double a0 = 0.5 * (A(0, 0) + A(1, 1)).real();
  const double a3 = 0.5 * (A(0, 0) - A(1, 1)).real();
  const double a1 = A(1, 0).real(), a2 = A(1, 0).imag();
  const double r = std::sqrt(a1 * a1 + a2 * a2 + a3 * a3);
  CMat U(2, 2);
  const cplx ph = std::exp(-I * s * a0);
  const double cs = std::cos(s * r);
  const double sn = r > 0 ? std::sin(s * r) / r : s;
  U(0, 0) = ph * (cs - I * sn * a3);
  U(1, 1) = ph * (cs + I * sn * a3);
  U(0, 1) = ph * (-I * sn * cplx(a1, -a2));
  U(1, 0) = ph * (-I * sn * cplx(a1, a2));
  return U;
}

CMat eig_exp(const Eigen::VectorXd& lam, const CMat& V, double s) {
  CVec ph(lam.size());
  for (Eigen::Index i = 0; i < lam.size(); ++i) ph[i] = std::exp(-I * s * lam[i]);
  return V * ph.asDiagonal() * V.adjoint();
}
}  // namespace

const std::vector<CMat>& SplitOperator::A_exp(double s) const {
  std::lock_guard<std::mutex> lock(cache_mutex_);
  auto it = A_cache_.find(s);
  if (it != A_cache_.end()) return it->second;
  std::vector<CMat> U(A_modes_.size());
  for (std::size_t m = 0; m < U.size(); ++m)
    U[m] = n_ == 2 ? pauli_exp(A_modes_[m], s) : eig_exp(A_eval_[m], A_evec_[m], s);
  return A_cache_.emplace(s, std::move(U)).first->second;
}

const std::vector<CMat>& SplitOperator::B_exp(double s) const {
  std::lock_guard<std::mutex> lock(cache_mutex_);
  auto it = B_cache_.find(s);
  if (it != B_cache_.end()) return it->second;
  std::vector<CMat> U(B_eval_.size());
  for (std::size_t p = 0; p < U.size(); ++p) U[p] = eig_exp(B_eval_[p], B_evec_[p], s);
  return B_cache_.emplace(s, std::move(U)).first->second;
}

void SplitOperator::flow_A(SpectralField& phi, double s) const {
  const auto& U = A_exp(s);
  const std::size_t M = phi.modes();
  CVec v(n_);
  for (std::size_t m = 0; m < M; ++m) {
    for (int c = 0; c < n_; ++c) v[c] = phi.data()[std::size_t(c) * M + m];
    const CVec w = U[m] * v;
    for (int c = 0; c < n_; ++c) phi.data()[std::size_t(c) * M + m] = w[c];
  }
}

void SplitOperator::flow_B(SpectralField& phi, double s) const {
  if (!has_B_) return;
  if (mixed_) {
    const int m = std::max(1, int(std::ceil(std::abs(s) * B_norm_ / 0.1)));
    const double h = s / m;
    SpectralField k1, k2, k3, k4, tmp;
    for (int i = 0; i < m; ++i) {
      mixed_->apply(phi, k1);
      tmp = phi;
      tmp.axpy(-I * h / 2.0, k1);
      mixed_->apply(tmp, k2);
      tmp = phi;
      tmp.axpy(-I * h / 2.0, k2);
      mixed_->apply(tmp, k3);
      tmp = phi;
      tmp.axpy(-I * h, k3);
      mixed_->apply(tmp, k4);
      phi.axpy(-I * h / 6.0, k1);
      phi.axpy(-I * h / 3.0, k2);
      phi.axpy(-I * h / 3.0, k3);
      phi.axpy(-I * h / 6.0, k4);
    }
    return;
  }
  const auto& U = B_exp(s);
  std::vector<cplx> g;
  grid_->to_grid(phi, g);
  const std::size_t P = grid_->points();
  CVec v(n_);
  for (std::size_t p = 0; p < P; ++p) {
    for (int c = 0; c < n_; ++c) v[c] = g[std::size_t(c) * P + p];
    const CVec w = U[p] * v;
    for (int c = 0; c < n_; ++c) g[std::size_t(c) * P + p] = w[c];
  }
  grid_->from_grid(g, phi);
}

const BlanesMoanCoefficients& blanes_moan_s6() {
  static const BlanesMoanCoefficients c = [] {
    BlanesMoanCoefficients k;
    const double a1 = 0.0792036964311957, a2 = 0.353172906049774, a3 = -0.0420650803577195;
    const double a4 = 1.0 - 2.0 * (a1 + a2 + a3);
    const double b1 = 0.209515106613362, b2 = -0.143851773179818;
    const double b3 = 0.5 - b1 - b2;
    k.a = {a1, a2, a3, a4, a3, a2, a1};
    k.b = {b1, b2, b3, b3, b2, b1};
    return k;
  }();
  return c;
}

void blanes_step(const SplitOperator& op, SpectralField& phi, double h) {
  if (!op.has_B()) {
    op.flow_A(phi, h);
    return;
  }
  const auto& c = blanes_moan_s6();
  for (int i = 0; i < 6; ++i) {
    op.flow_A(phi, c.a[i] * h);
    op.flow_B(phi, c.b[i] * h);
  }
  op.flow_A(phi, c.a[6] * h);
}

ContinuumTrajectory propagate_continuum(const SplitOperator& op, const SpectralField& phi0, double h,
                                        double T, const ContinuumOptions& opts) {
  if (!(h > 0)) fail(Errc::invalid_parameter, "time step must be positive");
  const std::size_t nsteps = std::size_t(std::llround(T / h));
  if (std::abs(double(nsteps) * h - T) > 1e-9 * std::max(1.0, T))
    fail(Errc::resample, "final time is not a multiple of the step");
  std::vector<std::size_t> samples;
  for (double t : opts.sample_times) {
    const double n = std::round(t / h);
    if (std::abs(n * h - t) > 1e-9 * std::max(1.0, std::abs(t)) || n < 0 || n > double(nsteps))
      fail(Errc::resample, "continuum sample time " + std::to_string(t) + " is not on the step grid");
    samples.push_back(std::size_t(n));
  }
  ContinuumTrajectory tr;
  tr.metadata = op.metadata();
  SpectralField phi = phi0;
  tr.norm0 = phi.norm();
  if (!std::isfinite(tr.norm0)) fail(Errc::numerical_abort, "initial field is not finite");
  std::size_t next = 0;
  auto emit = [&](std::size_t step) {
    while (next < samples.size() && samples[next] == step) {
      const double t = double(step) * h;
      tr.times.push_back(t);
      tr.norms.push_back(phi.norm());
      if (opts.store_states) tr.states.push_back(phi);
      if (opts.observer) opts.observer(t, phi);
      ++next;
    }
  };
  emit(0);
  for (std::size_t s = 1; s <= nsteps; ++s) {
    blanes_step(op, phi, h);
    const double nr = phi.norm();
    if (!std::isfinite(nr))
      fail(Errc::numerical_abort, "non-finite field after splitting step " + std::to_string(s));
    tr.max_norm_drift = std::max(tr.max_norm_drift, std::abs(nr - tr.norm0));
    tr.steps = s;
    emit(s);
  }
  return tr;
}

ContinuumTrajectory propagate_continuum(const PolySymbol& b, const SpectralField& phi0, double h, double T,
                                        const ContinuumOptions& opts) {
  SplitOperator op(b, phi0.Kx(), phi0.Ky(), phi0.Lx(), phi0.Ly());
  return propagate_continuum(op, phi0, h, T, opts);
}

}  // namespace tbcont
