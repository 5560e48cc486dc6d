#include <gtest/gtest.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>

#include "oracles.hpp"
#include "tbcont/error.hpp"
#include "tbcont/tbsim.hpp"

using namespace tbcont;

namespace {

// Spectrum of a constant-coefficient symbol on the torus: eigenvalues of a(xi) over the
// momenta compatible with the periods.
std::vector<double> bloch_spectrum(const TrigSymbol& a, const SupercellIndex& cell, double delta) {
  const Eigen::Matrix2d P = cell.periods();
  const Eigen::Matrix2d G = 2 * pi * P.inverse().transpose();
  std::vector<double> out;
  // torus momenta k = i G1 + j G2, one representative per class modulo the reciprocal lattice
  const LatticeGeometry& g = cell.geometry();
  const int count = int(cell.size() / std::size_t(a.n()));
  Eigen::Matrix2d W;
  W.col(0) = g.w1;
  W.col(1) = g.w2;
  std::vector<Vec2> ks;
  for (int i = -3 * count; i <= 3 * count; ++i)
    for (int j = -3 * count; j <= 3 * count; ++j) {
      Vec2 c = W.inverse() * (i * G.col(0) + j * G.col(1));
      c = c.array() - c.array().floor();
      for (int d = 0; d < 2; ++d)
        if (c[d] > 1 - 1e-9) c[d] = 0;
      const Vec2 kr = W * c;
      bool dup = false;
      for (const auto& q : ks)
        if ((q - kr).norm() < 1e-9) dup = true;
      if (!dup) ks.push_back(kr);
    }
  EXPECT_EQ(int(ks.size()), count);
  for (const auto& k : ks) {
    Eigen::SelfAdjointEigenSolver<CMat> es(a.eval(Vec2::Zero(), k, delta));
    for (int i = 0; i < a.n(); ++i) out.push_back(es.eigenvalues()[i]);
  }
  std::sort(out.begin(), out.end());
  return out;
}

SparseHamiltonian fixture36(double delta = 0.1) {
  const LatticeGeometry g = honeycomb_geometry(1.0);
  const SupercellIndex cell = supercell(g, 1, 1, 2, CellKind::hexagonal);
  MultilayerParams mp;
  mp.gate = Field(0.5);
  mp.gamma = Field(0.3);
  return assemble(multilayer_trig_symbol(g, mp), cell, delta);
}

}  // namespace

TEST(Sparse, TripletsSumDuplicatesAndSymmetrize) {
  std::vector<Triplet> t{{0, 1, {1.0, 1.0}}, {0, 1, {0.5, 0.0}}, {1, 0, {1.5, -1.0}}, {2, 2, 3.0}};
  const SparseHamiltonian H = SparseHamiltonian::from_triplets_hermitian(3, t);
  EXPECT_EQ(H.entry(0, 1), cplx(1.5, 1.0));
  EXPECT_EQ(H.entry(1, 0), cplx(1.5, -1.0));
  EXPECT_EQ(H.hermitian_defect(), 0.0);
  const CVec x = oracle::random_state(3, 1);
  CVec y(3);
  H.apply(x, y);
  EXPECT_LT((y - H.dense() * x).norm(), 1e-15);
  EXPECT_GE(H.norm_bound(), 3.0);
  EXPECT_EQ(H.max_row_nnz(), 1u);
}

TEST(Assembly, ConstantCoefficientSpectrumMatchesBlochOracle) {
  const LatticeGeometry g = honeycomb_geometry(1.0);
  for (CellKind kind : {CellKind::hexagonal, CellKind::rectangular}) {
    const SupercellIndex cell = supercell(g, 1, 1, 2, kind);
    MultilayerParams mp;
    mp.gate = Field(0.5);
    mp.gamma = Field(0.3);
    const TrigSymbol a = multilayer_trig_symbol(g, mp);
    const SparseHamiltonian H = assemble(a, cell, 0.1);
    EXPECT_EQ(H.hermitian_defect(), 0.0);
    Eigen::SelfAdjointEigenSolver<CMat> es(H.dense());
    const std::vector<double> ref = bloch_spectrum(a, cell, 0.1);
    ASSERT_EQ(ref.size(), cell.size());
    for (std::size_t i = 0; i < ref.size(); ++i) EXPECT_NEAR(es.eigenvalues()[Eigen::Index(i)], ref[i], 1e-12);
  }
}

TEST(Assembly, HaldaneSpectrumMatchesBlochOracle) {
  const LatticeGeometry g = honeycomb_geometry(1.0);
  const SupercellIndex cell = supercell(g, 2, 1, 1, CellKind::hexagonal);
  HaldaneParams hp;
  hp.t2 = Field(0.2);
  hp.M = Field(0.3);
  const SparseHamiltonian H = assemble_haldane(cell, 0.5, hp);
  Eigen::SelfAdjointEigenSolver<CMat> es(H.dense());
  const std::vector<double> ref = bloch_spectrum(haldane_trig_symbol(g, hp), cell, 0.5);
  for (std::size_t i = 0; i < ref.size(); ++i) EXPECT_NEAR(es.eigenvalues()[Eigen::Index(i)], ref[i], 1e-12);
  EXPECT_EQ(H.metadata()["model"], "haldane");
}

TEST(Assembly, GateFollowsMassProfileAtSites) {
  const LatticeGeometry g = honeycomb_geometry(1.0);
  const SupercellIndex cell = supercell(g, 10, 10, 2);
  const MassProfile mass = MassProfile::racetrack(12.0, 8.0);
  const double delta = 0.1, omega = 0.5;
  const SparseHamiltonian H = assemble_bilayer(cell, delta, omega, 0.2, mass);
  for (std::size_t i = 0; i < cell.size(); i += 7) {
    const int layer = cell.site(i).layer;
    const double m = mass(cell.wrap(cell.position(i)), delta, omega);
    EXPECT_NEAR(H.entry(i, i).real(), (2 * layer - 1) * omega * m, 1e-12);
  }
  // the profile is tanh of the stadium distance over the wall width omega / delta
  const Vec2 x(3.0, 4.5);
  EXPECT_NEAR(mass(x, delta, omega), std::tanh(racetrack_distance(x, 12.0, 8.0) * delta / omega), 1e-14);
}

TEST(Assembly, ProfileMustFitTheDomain) {
  const LatticeGeometry g = honeycomb_geometry(1.0);
  const SupercellIndex cell = supercell(g, 2, 2, 2);
  try {
    assemble_bilayer(cell, 0.1, 0.5, 0.2, MassProfile::racetrack(50.0, 30.0));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::config);
  }
  EXPECT_THROW(assemble_haldane(cell, 0.1, HaldaneParams{}), Error);
}

TEST(Rk4, AgreesWithDenseExponential) {
  const SparseHamiltonian H = fixture36();
  const CVec psi0 = oracle::random_state(int(H.dim()), 7);
  const double T = 50.0, h = 1.0 / 128;
  const TbTrajectory tr = rk4_propagate(H, psi0, h, T, {{T}, true, {}});
  ASSERT_EQ(tr.states.size(), 1u);
  const CVec ref = oracle::expm_propagate(H.dense(), psi0, T);
  EXPECT_LT((tr.states[0] - ref).norm(), 1e-6);
}

TEST(Rk4, FourthOrderUnderStepHalving) {
  const SparseHamiltonian H = fixture36();
  const CVec psi0 = oracle::random_state(int(H.dim()), 8);
  const double T = 10.0;
  const CVec ref = oracle::expm_propagate(H.dense(), psi0, T);
  std::vector<double> hs{1.0 / 8, 1.0 / 16, 1.0 / 32}, errs;
  for (double h : hs) errs.push_back((rk4_propagate(H, psi0, h, T, {{T}, true, {}}).states[0] - ref).norm());
  EXPECT_NEAR(oracle::loglog_slope(hs, errs), 4.0, 0.3);
}

TEST(Rk4, SamplingObserverAndNormDrift) {
  const SparseHamiltonian H = fixture36();
  const CVec psi0 = oracle::random_state(int(H.dim()), 9);
  std::vector<double> seen;
  Rk4Options o;
  o.sample_times = {0.0, 1.0, 2.5};
  o.store_states = false;
  o.observer = [&](double t, const CVec&) { seen.push_back(t); };
  const TbTrajectory tr = rk4_propagate(H, psi0, 0.125, 2.5, o);
  EXPECT_EQ(seen, (std::vector<double>{0.0, 1.0, 2.5}));
  EXPECT_TRUE(tr.states.empty());
  EXPECT_EQ(tr.steps, 20u);
  EXPECT_GT(tr.max_norm_drift, 0.0);
  EXPECT_LT(tr.max_norm_drift, 1e-3);
}

TEST(Rk4, RejectsBadTimesAndStates) {
  const SparseHamiltonian H = fixture36();
  const CVec psi0 = oracle::random_state(int(H.dim()), 10);
  try {
    rk4_propagate(H, psi0, 0.125, 1.0, {{0.3}, true, {}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::resample);
  }
  EXPECT_THROW(rk4_propagate(H, psi0, 0.125, 1.05), Error);
  CVec bad = psi0;
  bad[0] = std::numeric_limits<double>::quiet_NaN();
  try {
    rk4_propagate(H, bad, 0.125, 1.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::numerical_abort);
  }
  EXPECT_THROW(rk4_propagate(H, CVec::Ones(3), 0.125, 1.0), Error);
}

TEST(Checkpoints, RoundTrip) {
  const auto path = (std::filesystem::temp_directory_path() / "tbcont_ckpt_test.bin").string();
  std::remove(path.c_str());
  const CVec a = oracle::random_state(5, 1), b = oracle::random_state(5, 2);
  append_checkpoint(path, 0.0, a);
  append_checkpoint(path, 1.5, b);
  const auto recs = read_checkpoints(path, 5);
  ASSERT_EQ(recs.size(), 2u);
  EXPECT_EQ(recs[1].first, 1.5);
  EXPECT_EQ((recs[0].second - a).norm(), 0.0);
  EXPECT_EQ((recs[1].second - b).norm(), 0.0);
  EXPECT_THROW(read_checkpoints(path, 7), Error);
  std::remove(path.c_str());
}
