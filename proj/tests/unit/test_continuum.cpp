#include <gtest/gtest.h>

#include "oracles.hpp"
#include "tbcont/continuum.hpp"
#include "tbcont/effective.hpp"
#include "tbcont/error.hpp"
#include "tbcont/models.hpp"

using namespace tbcont;

namespace {

SpectralField smooth_field(int n, int K, double L, unsigned seed, int band) {
  SpectralField f(n, K, K, L, L);
  const CVec r = oracle::random_state(int(f.data().size()), seed);
  for (int c = 0; c < n; ++c)
    for (int k = -K; k <= K; ++k)
      for (int l = -K; l <= K; ++l)
        if (std::abs(k) <= band && std::abs(l) <= band) f(c, k, l) = r[Eigen::Index(f.index(c, k, l))];
  f.scale(1.0 / f.norm());
  return f;
}

// Weyl quantization in Fourier space: (Op(c zeta^alpha M) phi)^(q) = sum_q' c^(q - q') ((zeta_q + zeta_q') / 2)^alpha M phi^(q').
SpectralField galerkin_oracle(const std::vector<std::tuple<std::array<int, 2>, CMat, std::function<cplx(const Vec2&)>>>& terms,
                              const SpectralField& phi, int Q) {
  SpectralField out(phi.n(), phi.Kx(), phi.Ky(), phi.Lx(), phi.Ly());
  out.set_zero();
  for (const auto& [alpha, M, c] : terms) {
    const auto ch = oracle::fourier2(c, Q, phi.Lx(), phi.Ly(), 64);
    for (int k = -phi.Kx(); k <= phi.Kx(); ++k)
      for (int l = -phi.Ky(); l <= phi.Ky(); ++l)
        for (int k1 = -phi.Kx(); k1 <= phi.Kx(); ++k1)
          for (int l1 = -phi.Ky(); l1 <= phi.Ky(); ++l1) {
            const int dq1 = k - k1, dq2 = l - l1;
            if (std::abs(dq1) > Q || std::abs(dq2) > Q) continue;
            const cplx cc = ch[std::size_t(dq1 + Q) * (2 * Q + 1) + (dq2 + Q)];
            if (std::abs(cc) < 1e-15) continue;
            const Vec2 zm = 0.5 * (phi.zeta(k, l) + phi.zeta(k1, l1));
            const double mono = std::pow(zm.x(), alpha[0]) * std::pow(zm.y(), alpha[1]);
            for (int r = 0; r < phi.n(); ++r)
              for (int s = 0; s < phi.n(); ++s) out(r, k, l) += cc * mono * M(r, s) * phi(s, k1, l1);
          }
  }
  return out;
}

}  // namespace

TEST(Weyl, ConstantSymbolActsDiagonally) {
  PolySymbol b(2, 1);
  b.add({1, 0}, pauli(1));
  b.add({0, 1}, pauli(2));
  b.add({0, 0}, 0.3 * pauli(3));
  const SpectralField phi = smooth_field(2, 6, 4.0, 1, 6);
  const SpectralField out = weyl_apply(b, phi);
  for (int k = -6; k <= 6; ++k)
    for (int l = -6; l <= 6; ++l) {
      const CMat m = b.eval(Vec2::Zero(), phi.zeta(k, l));
      const CVec v = (CVec(2) << phi(0, k, l), phi(1, k, l)).finished();
      const CVec w = m * v;
      EXPECT_NEAR(std::abs(out(0, k, l) - w[0]) + std::abs(out(1, k, l) - w[1]), 0.0, 1e-12);
    }
}

TEST(Weyl, VariableCoefficientsMatchGalerkinOracle) {
  const double L = 2 * pi;
  auto c1 = [](const Vec2& X) { return cplx(std::cos(X.x())); };
  auto c2 = [](const Vec2& X) { return cplx(0.5 * std::sin(X.y() + 0.3)); };
  PolySymbol b(2, 2);
  b.add({1, 0}, pauli(1), Field::cosine(Vec2(1.0, 0.0)));
  b.add({0, 2}, pauli(3), Field::cosine(Vec2(0.0, 1.0), 0.5, 0.3 - pi / 2));
  const SpectralField phi = smooth_field(2, 8, L, 2, 5);
  const SpectralField out = weyl_apply(b, phi);
  const SpectralField ref = galerkin_oracle({{{1, 0}, pauli(1), c1}, {{0, 2}, pauli(3), c2}}, phi, 2);
  for (std::size_t i = 0; i < out.data().size(); ++i) EXPECT_NEAR(std::abs(out.data()[i] - ref.data()[i]), 0.0, 1e-11);
}

TEST(Weyl, OperatorIsSymmetric) {
  PolySymbol b(2, 2);
  b.add({1, 0}, pauli(1), Field::cosine(Vec2(1.0, 0.0), 0.4, 0.0) + Field(1.0));
  b.add({1, 1}, pauli(2), Field::cosine(Vec2(0.0, 1.0), 0.2));
  b.add({0, 0}, pauli(3), Field::tanh_ramp(Vec2(0, 1), 0.0, 0.5) * Field::cosine(Vec2(0, 1), 1.0));
  const double L = 2 * pi;
  const SpectralField f = smooth_field(2, 10, L, 3, 4), g = smooth_field(2, 10, L, 4, 4);
  const SpectralField bf = weyl_apply(b, f), bg = weyl_apply(b, g);
  EXPECT_NEAR(std::abs(f.inner(bg) - bf.inner(g)), 0.0, 1e-10);
}

TEST(Splitting, ConstantSymbolIsExact) {
  PolySymbol b(2, 1);
  b.add({1, 0}, pauli(1));
  b.add({0, 1}, pauli(2));
  b.add({0, 0}, 0.4 * pauli(3));
  const SpectralField phi = smooth_field(2, 5, 3.0, 5, 5);
  const auto tr = propagate_continuum(b, phi, 0.1, 2.0, {{2.0}, true, {}});
  for (int k = -5; k <= 5; ++k)
    for (int l = -5; l <= 5; ++l) {
      const CVec v = (CVec(2) << phi(0, k, l), phi(1, k, l)).finished();
      const CVec w = oracle::expm_propagate(b.eval(Vec2::Zero(), phi.zeta(k, l)), v, 2.0);
      EXPECT_NEAR(std::abs(tr.states[0](0, k, l) - w[0]) + std::abs(tr.states[0](1, k, l) - w[1]), 0.0, 1e-12);
    }
}

TEST(Splitting, FourthOrderOnVariableMass) {
  PolySymbol b(2, 1);
  b.add({1, 0}, pauli(1));
  b.add({0, 1}, pauli(2));
  b.add({0, 0}, pauli(3), Field::cosine(Vec2(0, 1), 1.0) + Field::cosine(Vec2(1, 0), 0.5));
  const double L = 2 * pi, T = 1.6;
  const SpectralField phi = smooth_field(2, 16, L, 6, 3);
  const SplitOperator op(b, 16, 16, L, L);
  const auto ref = propagate_continuum(op, phi, 0.4 / 64, T, {{T}, true, {}}).states[0];
  std::vector<double> hs{0.4, 0.2, 0.1}, errs;
  for (double h : hs) {
    SpectralField d = propagate_continuum(op, phi, h, T, {{T}, true, {}}).states[0];
    d.axpy(-1.0, ref);
    errs.push_back(d.norm());
  }
  EXPECT_NEAR(oracle::loglog_slope(hs, errs), 4.0, 0.3);
}

TEST(Splitting, UnitaryFlows) {
  PolySymbol b(2, 1);
  b.add({1, 0}, pauli(1));
  b.add({0, 1}, pauli(2));
  b.add({0, 0}, pauli(3), Field::cosine(Vec2(1, 0), 1.0));
  const SpectralField phi = smooth_field(2, 16, 2 * pi, 7, 4);
  const auto tr = propagate_continuum(b, phi, 0.05, 20.0, {{20.0}, false, {}});
  EXPECT_LT(tr.max_norm_drift, 1e-12);
  EXPECT_EQ(tr.steps, 400u);
}

TEST(Splitting, CoefficientsAreConsistent) {
  const auto& c = blanes_moan_s6();
  double sa = 0, sb = 0;
  for (double x : c.a) sa += x;
  for (double x : c.b) sb += x;
  EXPECT_NEAR(sa, 1.0, 1e-14);
  EXPECT_NEAR(sb, 1.0, 1e-14);
}

TEST(Splitting, RejectsOffGridSamples) {
  PolySymbol b(2, 1);
  b.add({1, 0}, pauli(1));
  const SpectralField phi = smooth_field(2, 3, 2.0, 8, 2);
  try {
    propagate_continuum(b, phi, 0.1, 1.0, {{0.05}, true, {}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::resample);
  }
}

TEST(Continuum, BilayerEffectiveConservesNorm) {
  const LatticeGeometry g = honeycomb_geometry(1.0);
  MultilayerParams mp;
  mp.gate = Field(1.0) * Field::periodic_strip(1, 8.0, 1.0);
  mp.gamma = Field(0.5);
  for (int p : {1, 2}) {
    PolySymbol b = taylor_effective(multilayer_trig_symbol(g, mp), g.K, 0.0, p);
    b.set_delta(0.05);
    const SpectralField phi = smooth_field(4, 24, 8.0, 9, 4);
    const auto tr = propagate_continuum(b, phi, 0.01, 1.0, {{1.0}, false, {}});
    EXPECT_LT(tr.max_norm_drift, 1e-10) << "p = " << p;
  }
}
