#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "tbcont/error.hpp"
#include "tbcont/models.hpp"
#include "tbcont/symbol.hpp"

using namespace tbcont;

namespace {

std::vector<Vec2> random_points(int n, double scale, unsigned seed) {
  std::mt19937 gen(seed);
  std::uniform_real_distribution<double> u(-scale, scale);
  std::vector<Vec2> out;
  for (int i = 0; i < n; ++i) out.emplace_back(u(gen), u(gen));
  return out;
}

}  // namespace

TEST(HaldaneSymbol, MatchesDirectDefinition) {
  const LatticeGeometry g = honeycomb_geometry(1.0);
  const oracle::Honeycomb h(1.0);
  HaldaneParams p;
  p.t1 = Field(0.9);
  p.t2 = Field(0.3);
  p.M = Field(-0.4);
  const TrigSymbol a = haldane_trig_symbol(g, p);
  const auto xs = random_points(20, 3.0, 1);
  const auto xis = random_points(20, 4.0, 2);
  for (std::size_t i = 0; i < xs.size(); ++i)
    for (double d : {0.0, 0.05, 0.3}) {
      const CMat ref = oracle::haldane_symbol(h, 0.9, 0.3, -0.4, xis[i], d);
      EXPECT_LT((a.eval(xs[i], xis[i], d) - ref).norm(), 1e-13);
    }
}

TEST(HaldaneSymbol, HermitianForRealMomenta) {
  const LatticeGeometry g = honeycomb_geometry(1.0);
  HaldaneParams p;
  p.t1 = Field::cosine(Vec2(0.3, 0.1), 0.2, 0.0) + Field(1.0);
  p.t2 = Field(0.2);
  p.M = Field::tanh_ramp(Vec2(0.0, 1.0), 0.0, 1.0);
  const TrigSymbol a = haldane_trig_symbol(g, p);
  for (const auto& X : random_points(10, 5.0, 3))
    for (const auto& xi : random_points(10, 5.0, 4)) {
      const CMat m = a.eval(X, xi, 0.1);
      EXPECT_LT((m - m.adjoint()).norm(), 1e-13);
    }
  EXPECT_TRUE(a.hermitian_closed(random_points(5, 2.0, 5)));
}

TEST(HaldaneSymbol, DiracPointDegeneracy) {
  const LatticeGeometry g = honeycomb_geometry(1.0);
  HaldaneParams p;
  p.t1 = Field(1.0);
  const TrigSymbol a = haldane_trig_symbol(g, p);
  for (const auto& X : random_points(10, 4.0, 6)) {
    EXPECT_LT(a.eval(X, g.K, 0.0).norm(), 1e-13);
    EXPECT_LT(a.eval(X, g.Kp, 0.0).norm(), 1e-13);
  }
}

TEST(TrigSymbolDerivative, AgreesWithFiniteDifferences) {
  const LatticeGeometry g = honeycomb_geometry(1.0);
  HaldaneParams p;
  p.t2 = Field(0.25);
  p.M = Field(0.1);
  const TrigSymbol a = haldane_trig_symbol(g, p);
  const Vec2 X(0.3, -0.2), xi(0.7, -1.1);
  const double e = 1e-5;
  const CMat d1 = a.derivative(X, xi, 1, 0, 0);
  const CMat fd1 = (a.eval(X, xi + Vec2(e, 0), 0) - a.eval(X, xi - Vec2(e, 0), 0)) / (2 * e);
  EXPECT_LT((d1 - fd1).norm(), 1e-8);
  const CMat d02 = a.derivative(X, xi, 0, 2, 0);
  const CMat fd02 =
      (a.eval(X, xi + Vec2(0, e), 0) - 2.0 * a.eval(X, xi, 0) + a.eval(X, xi - Vec2(0, e), 0)) / (e * e);
  EXPECT_LT((d02 - fd02).norm(), 1e-4);
  // d_delta picks out the order-delta part
  const CMat dd = a.derivative(X, xi, 0, 0, 1);
  EXPECT_LT((dd - (a.eval(X, xi, 1.0) - a.eval(X, xi, 0.0))).norm(), 1e-13);
}

TEST(TrigSymbolRotation, RotatesMomentumArgument) {
  const LatticeGeometry g = honeycomb_geometry(1.0);
  HaldaneParams p;
  p.t2 = Field(0.2);
  const TrigSymbol a = haldane_trig_symbol(g, p);
  const double th = 0.37;
  const TrigSymbol r = a.rotated(th);
  const TrigSymbol direct = haldane_trig_symbol(g, p, th);
  for (const auto& xi : random_points(10, 3.0, 7)) {
    const Vec2 back = rotation(-th) * xi;
    EXPECT_LT((r.eval(Vec2::Zero(), xi, 0.1) - a.eval(Vec2::Zero(), back, 0.1)).norm(), 1e-13);
    EXPECT_LT((direct.eval(Vec2::Zero(), xi, 0.1) - r.eval(Vec2::Zero(), xi, 0.1)).norm(), 1e-13);
  }
}

TEST(TrigSymbol, HermitianClosureDetectsMissingPartner) {
  TrigSymbol a(2);
  a.add(Vec2(1.0, 0.0), sigma_plus(), Field(1.0));
  EXPECT_FALSE(a.hermitian_closed({Vec2::Zero()}));
  a.add(Vec2(-1.0, 0.0), sigma_minus(), Field(1.0));
  EXPECT_TRUE(a.hermitian_closed({Vec2::Zero()}));
}

TEST(Multilayer, OmegaPatternAndStacking) {
  EXPECT_LT((omega_pattern(2) - CMat((CMat(2, 2) << -1, 0, 0, 1).finished())).norm(), 1e-15);
  EXPECT_LT((omega_pattern(3).diagonal() - Eigen::Vector3cd(-2, 0, 2)).norm(), 1e-15);
  // Gamma_AB couples 1B with 2A in layer (x) sublattice ordering
  const CMat G = gamma_AB();
  EXPECT_EQ(G(1, 2), cplx(1.0));
  EXPECT_EQ(G(2, 1), cplx(1.0));
  EXPECT_NEAR(G.cwiseAbs().sum(), 2.0, 0.0);
  const CMat B = gamma_BA();
  EXPECT_EQ(B(0, 3), cplx(1.0));
  EXPECT_NEAR(B.cwiseAbs().sum(), 2.0, 0.0);
}

TEST(Multilayer, BilayerSymbolStructure) {
  const LatticeGeometry g = honeycomb_geometry(1.0);
  MultilayerParams mp;
  mp.gate = Field(0.7);
  mp.gamma = Field(0.4);
  const TrigSymbol a = multilayer_trig_symbol(g, mp);
  ASSERT_EQ(a.n(), 4);
  const oracle::Honeycomb h(1.0);
  for (const auto& xi : random_points(8, 3.0, 9)) {
    const double d = 0.2;
    const CMat m = a.eval(Vec2::Zero(), xi, d);
    const CMat mono = oracle::haldane_symbol(h, 1.0, 0.0, 0.0, xi, 0.0);
    EXPECT_LT((m.block(0, 0, 2, 2) - mono - CMat::Identity(2, 2) * cplx(-0.7 * d)).norm(), 1e-13);
    EXPECT_LT((m.block(2, 2, 2, 2) - mono - CMat::Identity(2, 2) * cplx(0.7 * d)).norm(), 1e-13);
    EXPECT_NEAR(std::abs(m(1, 2) - 0.4 * d), 0.0, 1e-13);
    EXPECT_NEAR(std::abs(m(0, 3)), 0.0, 1e-13);
  }
}

TEST(Ssh, ChainSymbolGapAtZoneBoundary) {
  const TrigSymbol a = ssh_trig_symbol(1.0, 0.6, 0.0, 1.0);
  const CMat m = a.eval(Vec2::Zero(), Vec2(pi, 0.0), 0.0);
  Eigen::SelfAdjointEigenSolver<CMat> es(m);
  EXPECT_NEAR(es.eigenvalues()[1], 0.4, 1e-13);
}

TEST(PolySymbol, EvalMergePruneAndJson) {
  PolySymbol b(2, 2);
  b.add({1, 0}, pauli(1));
  b.add({1, 0}, pauli(1));  // merges
  b.add({0, 2}, pauli(3), Field::cosine(Vec2(1.0, 0.0)), 1);
  b.add({0, 0}, 1e-16 * pauli(2));
  b.set_delta(0.1);
  b.prune(1e-14);
  EXPECT_EQ(b.terms().size(), 2u);
  EXPECT_EQ(b.max_degree(), 2);
  const Vec2 X(0.4, 0.0), z(0.5, -2.0);
  const CMat ref = 2.0 * 0.5 * pauli(1) + 0.1 * std::cos(0.4) * 4.0 * pauli(3);
  EXPECT_LT((b.eval(X, z) - ref).norm(), 1e-14);
  const PolySymbol c = PolySymbol::from_json(b.to_json());
  EXPECT_LT((c.eval(X, z, 0.1) - ref).norm(), 1e-14);
  EXPECT_EQ(c.p(), 2);
}

TEST(PolySymbol, KroneckerEmbedding) {
  PolySymbol b(2, 1);
  b.add({0, 1}, pauli(1));
  const CMat L = CMat::Identity(2, 2);
  const PolySymbol e = b.kron(L, CMat::Identity(1, 1));
  EXPECT_EQ(e.n(), 4);
  const Vec2 z(0.0, 1.5);
  EXPECT_LT((e.eval(Vec2::Zero(), z, 0.0) - kron(L, 1.5 * pauli(1))).norm(), 1e-15);
}

TEST(Fields, CatalogValuesGradientsAndJson) {
  const Vec2 X(0.3, -0.8);
  std::vector<Field> fs = {Field(2.0),
                           Field::plane_wave(Vec2(0.5, 1.0), 0.7),
                           Field::cosine(Vec2(1.0, -0.4), 1.3, 0.2),
                           Field::affine(Vec2(0.2, 0.3), 1.0),
                           Field::tanh_ramp(Vec2(0.0, 1.0), 0.1, 0.5),
                           Field::racetrack(2.0, 1.0, 0.3),
                           Field::periodic_strip(1, 6.0, 0.5),
                           Field::gaussian(Vec2(0.1, 0.1), 0.6)};
  const double e = 1e-6;
  for (const Field& f : fs) {
    const CVec2 gr = f.gradient(X);
    for (int d = 0; d < 2; ++d) {
      Vec2 dx = Vec2::Zero();
      dx[d] = e;
      const cplx fd = (f(X + dx) - f(X - dx)) / (2 * e);
      EXPECT_NEAR(std::abs(gr[d] - fd), 0.0, 1e-7) << f.to_json().dump();
    }
    const Field back = Field::from_json(f.to_json());
    EXPECT_NEAR(std::abs(back(X) - f(X)), 0.0, 1e-15) << f.to_json().dump();
  }
  const Field sum = fs[1] * fs[2] + fs[3];
  EXPECT_NEAR(std::abs(sum(X) - (fs[1](X) * fs[2](X) + fs[3](X))), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(Field::from_json(sum.to_json())(X) - sum(X)), 0.0, 1e-15);
}

TEST(Fields, RacetrackDistanceIsSignedStadiumDistance) {
  EXPECT_NEAR(racetrack_distance(Vec2(0.0, 0.0), 4.0, 2.0), -1.0, 1e-15);
  EXPECT_NEAR(racetrack_distance(Vec2(0.0, 3.0), 4.0, 2.0), 2.0, 1e-15);
  EXPECT_NEAR(racetrack_distance(Vec2(5.0, 0.0), 4.0, 2.0), 2.0, 1e-15);
  EXPECT_NEAR(racetrack_distance(Vec2(2.0, 1.0), 4.0, 2.0), 0.0, 1e-15);
}
