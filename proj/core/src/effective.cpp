#include "tbcont/effective.hpp"

#include <cmath>

#include "tbcont/error.hpp"

namespace tbcont {

namespace {
double factorial(int n) {
  double f = 1.0;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

bool is_zero_field(const Field& f) { return f.is_constant() && f.constant_value() == cplx(0.0); }
}  // namespace

PolySymbol taylor_effective(const TrigSymbol& a, const Vec2& K, double E, int p) {
  if (p < 1) fail(Errc::invalid_order, "effective order p must be >= 1");
  PolySymbol b(a.n(), p);
  b.set_E(E);
  b.set_K(K);
  for (int j = 1; j <= p; ++j) {
    // multi-index (a1, a2, ad) over (zeta1, zeta2, delta) with |alpha| = j;
    // the j!/(a1! a2! ad!) index tuples of the symmetric sum collapse onto it.
    for (int ad = 0; ad <= std::min(j, 1); ++ad) {
      for (int a1 = 0; a1 <= j - ad; ++a1) {
        const int a2 = j - ad - a1;
        const double w = 1.0 / (factorial(a1) * factorial(a2) * factorial(ad));
        for (const auto& t : a.terms()) {
          if (t.delta_power != ad) continue;
          const cplx f = ipow(I * t.shift.x(), a1) * ipow(I * t.shift.y(), a2) *
                         std::exp(I * t.shift.dot(K)) * factorial(ad);
          if (std::abs(f) == 0.0) continue;
          b.add({a1, a2}, (w * f) * t.matrix, t.coeff, j - 1);
        }
      }
    }
  }
  b.prune(1e-15);
  return b;
}

std::array<Field, 2> strain_alpha(const StrainTwistParams& p) {
  const std::array<cplx, 3> ph{1.0, std::exp(-2.0 * pi * I / 3.0), std::exp(2.0 * pi * I / 3.0)};
  std::array<Field, 2> al{Field(0.0), Field(0.0)};
  for (int k = 0; k < 2; ++k)
    for (int j = 0; j < 3; ++j)
      if (!is_zero_field(p.bond_strain[j][k])) al[k] = al[k] + Field(ph[j]) * p.bond_strain[j][k];
  return al;
}

PolySymbol strain_twist_effective(const LatticeGeometry& geom, const StrainTwistParams& p) {
  if (p.finite_twist && p.small_twist)
    fail(Errc::invalid_config, "finite-twist and small-twist modes are mutually exclusive");
  const double theta = p.finite_twist ? p.theta : 0.0;
  const Eigen::Matrix2d R = rotation(theta);
  const Vec2 K0 = p.valley_Kp ? geom.Kp : geom.K;
  const Vec2 Kv = R * K0;

  PolySymbol b(2, 1);
  b.set_K(Kv);

  // Dirac part: gradient of t1 sum_j e^{i xi . a_j^theta} at Kv in the (1,2) entry.
  std::array<cplx, 2> g{0.0, 0.0};
  for (int j = 0; j < 3; ++j) {
    const Vec2 aj = R * geom.a[j];
    const cplx e = std::exp(I * Kv.dot(aj));
    g[0] += I * aj.x() * e;
    g[1] += I * aj.y() * e;
  }
  for (int k = 0; k < 2; ++k) {
    CMat Mk = CMat::Zero(2, 2);
    Mk(0, 1) = g[k];
    Mk(1, 0) = std::conj(g[k]);
    b.add({k == 0 ? 1 : 0, k == 1 ? 1 : 0}, Mk, p.t1, 0);
  }

  // Mass: M + t2 sum_j sin(b_j . K)
  if (!is_zero_field(p.M)) b.add({0, 0}, pauli(3), p.M, 0);
  if (!is_zero_field(p.t2)) {
    double s = 0.0;
    for (int j = 0; j < 3; ++j) s += std::sin((R * geom.b[j]).dot(Kv));
    b.add({0, 0}, s * pauli(3), p.t2, 0);
  }

  // Strain: i K . sum_j e^{i K . a_j} a_{j,1}(X) in the (1,2) entry.
  Field s12(0.0);
  for (int j = 0; j < 3; ++j) {
    const cplx e = std::exp(I * Kv.dot(R * geom.a[j]));
    for (int k = 0; k < 2; ++k)
      if (!is_zero_field(p.bond_strain[j][k]))
        s12 = s12 + Field(I * e * Kv[k]) * p.bond_strain[j][k];
  }
  if (!is_zero_field(s12)) {
    const Field f = p.t1 * s12;
    b.add({0, 0}, sigma_plus(), f, 0);
    b.add({0, 0}, sigma_minus(), f.conj(), 0);
  }

  // Small twist: d/d delta of t1 sum_j e^{-i K . R_{beta delta} a_j} in the (2,1) entry.
  if (p.small_twist) {
    const Eigen::Matrix2d Rq = rotation(pi / 2);
    cplx s21 = 0.0;
    for (int j = 0; j < 3; ++j)
      s21 += -I * p.beta * Kv.dot(Rq * geom.a[j]) * std::exp(-I * Kv.dot(geom.a[j]));
    CMat C = CMat::Zero(2, 2);
    C(1, 0) = s21;
    C(0, 1) = std::conj(s21);
    b.add({0, 0}, C, p.t1, 0);
  }
  b.prune(1e-15);
  return b;
}

Vec2 degenerate_point_from_v1(const Vec2& v1) {
  return (4 * pi / (3 * v1.squaredNorm())) * (rotation(-2 * pi / 3) * v1);
}

PositionDependentResult position_dependent_effective(const LatticeGeometry& geom, const Field& B,
                                                     const Field& t1, const Field& t2, const Field& M,
                                                     const std::vector<Vec2>& check_points) {
  const Vec2 K = geom.K;
  auto gradA = [K, B](const Vec2& X) -> Vec2 { return K + B.gradient(X).real(); };
  const double floor = 1e-8 * K.norm();
  for (const auto& X : check_points)
    if (gradA(X).norm() < floor) fail(Errc::degenerate_field, "|grad A| vanishes on the sample grid");

  auto v1f = [gradA, floor](const Vec2& X) -> Vec2 {
    const Vec2 gA = gradA(X);
    const double n2 = gA.squaredNorm();
    if (std::sqrt(n2) < floor) fail(Errc::degenerate_field, "|grad A| below threshold");
    return (4 * pi / 3) / n2 * (rotation(2 * pi / 3) * gA);
  };
  auto gf = [v1f, t1](const Vec2& X) -> Eigen::Matrix2d {
    const Vec2 v1 = v1f(X);
    Eigen::Matrix2d V;
    V << v1.x(), -v1.y(), v1.y(), v1.x();
    return (std::sqrt(3.0) / 2) * t1(X).real() * (rotation(pi / 3) * V);
  };

  PositionDependentResult out;
  out.K_field = gradA;
  out.v1_field = v1f;
  out.g_field = gf;
  PolySymbol b(2, 1);
  b.set_K(K);
  for (int j = 0; j < 2; ++j)
    for (int k = 0; k < 2; ++k) {
      Field gjk = Field::derived("position_dependent_g" + std::to_string(j + 1) + std::to_string(k + 1),
                                 [gf, j, k](const Vec2& X) { return cplx(gf(X)(j, k)); });
      b.add({j == 0 ? 1 : 0, j == 1 ? 1 : 0}, pauli(k + 1), gjk, 0);
    }
  if (!is_zero_field(M)) b.add({0, 0}, pauli(3), M, 0);
  if (!is_zero_field(t2)) b.add({0, 0}, -1.5 * std::sqrt(3.0) * pauli(3), t2, 0);
  out.symbol = std::move(b);
  return out;
}

PolySymbol multilayer_effective(int n, const Field& omega, const StackingSpec& st, const PolySymbol& base) {
  if (n < 1) fail(Errc::invalid_parameter, "need at least one layer");
  if (base.n() != 2) fail(Errc::invalid_parameter, "multilayer base symbol must be 2x2");
  PolySymbol out = base.kron(CMat::Identity(n, n), CMat::Identity(1, 1));
  if (n > 1 && !is_zero_field(omega)) out.add({0, 0}, kron(omega_pattern(n), pauli(0)), omega, 0);
  if (n > 1 && !is_zero_field(st.gamma)) {
    for (int l = 0; l + 1 < n; ++l) {
      auto embed = [&](const CMat& G) {
        CMat o = CMat::Zero(2 * n, 2 * n);
        o.block(2 * l, 2 * l, 4, 4) = G;
        return o;
      };
      switch (st.kind) {
        case Stacking::AB: out.add({0, 0}, embed(gamma_AB()), st.gamma, 0); break;
        case Stacking::BA: out.add({0, 0}, embed(gamma_BA()), st.gamma, 0); break;
        case Stacking::mixture:
          out.add({0, 0}, embed(gamma_AB()), st.gamma * st.chi, 0);
          out.add({0, 0}, embed(gamma_BA()), st.gamma * (Field(1.0) - st.chi), 0);
          break;
      }
    }
  }
  return out;
}

CMat bm_T(int j) {
  const cplx w = std::exp(2.0 * pi * I / 3.0);
  CMat T(2, 2);
  switch (j) {
    case 0: T << 1, 1, 1, 1; break;
    case 1: T << 1, w, std::conj(w), 1; break;
    case 2: T << 1, std::conj(w), w, 1; break;
    default: fail(Errc::invalid_parameter, "T_j defined for j = 0, 1, 2");
  }
  return T;
}

Vec2 bm_w(int j, double beta, double v) {
  const double c = 4 * pi * beta / (std::sqrt(3.0) * v);
  switch (j) {
    case 0: return Vec2::Zero();
    case 1: return -c * Vec2(std::sqrt(3.0) / 2, 0.5);
    case 2: return c * Vec2(-std::sqrt(3.0) / 2, 0.5);
    default: fail(Errc::invalid_parameter, "w_j defined for j = 0, 1, 2");
  }
}

namespace {
Vec2 dirac_K(double v) { return Vec2(0.0, -4 * pi / (3 * v)); }
}  // namespace

Vec2 bm_w_tilde(int j, double beta, double v) {
  return bm_w(j, beta, v) - beta * (rotation(pi / 2).transpose() * dirac_K(v));
}

std::array<Vec2, 2> bm_gauge_wavevectors(double beta, double v) {
  const Vec2 q = (beta / 2) * (rotation(pi / 2).transpose() * dirac_K(v));
  return {-q, q};
}

PolySymbol bm_effective(const BMParams& p, bool bm_gauge) {
  if (p.beta == 0.0) fail(Errc::invalid_parameter, "beta must be non-zero");
  if (!(p.v > 0) || !(p.area > 0)) fail(Errc::invalid_parameter, "v and |Gamma| must be positive");
  PolySymbol b(4, 1);
  const double s3 = std::sqrt(3.0);
  const CMat E1 = (CMat(2, 2) << 1, 0, 0, 0).finished();
  const CMat E2 = (CMat(2, 2) << 0, 0, 0, 1).finished();
  const CMat I2 = CMat::Identity(2, 2);
  // zeta . R_{pi/2} sigma = -zeta1 sigma2 + zeta2 sigma1
  b.add({1, 0}, kron(I2, -(s3 * p.v / 2) * pauli(2)), p.t1, 0);
  b.add({0, 1}, kron(I2, (s3 * p.v / 2) * pauli(1)), p.t1, 0);
  if (!is_zero_field(p.M)) b.add({0, 0}, kron(I2, pauli(3)), p.M, 0);
  if (!is_zero_field(p.t2)) b.add({0, 0}, kron(I2, -1.5 * s3 * pauli(3)), p.t2, 0);
  if (!bm_gauge) {
    const double c = pi / s3 * p.beta;
    b.add({0, 0}, kron(E1, -c * pauli(2)) + kron(E2, c * pauli(2)), p.t1, 0);
  }
  const CMat U12 = (CMat(2, 2) << 0, 1, 0, 0).finished();
  const CMat U21 = U12.transpose();
  for (int j = 0; j < 3; ++j) {
    const Vec2 w = bm_gauge ? bm_w_tilde(j, p.beta, p.v) : bm_w(j, p.beta, p.v);
    const cplx lam = p.lambda[j] / p.area;
    const Field pw = Field::plane_wave(w, lam);
    b.add({0, 0}, kron(U12, bm_T(j)), pw, 0);
    b.add({0, 0}, kron(U21, bm_T(j).adjoint()), pw.conj(), 0);
  }
  b.set_K(dirac_K(p.v));
  return b;
}

}  // namespace tbcont
