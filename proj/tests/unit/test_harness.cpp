#include <gtest/gtest.h>

#include "oracles.hpp"
#include "tbcont/error.hpp"
#include "tbcont/harness.hpp"

using namespace tbcont;

namespace {

struct LiftSetup {
  SupercellIndex cell;
  LiftConfig cfg;
  Vec2 box;
};

LiftSetup make(double delta, LiftMethod m) {
  SupercellIndex cell = scan_cell(delta, 1.0, 2.0, 2.0);
  LiftConfig cfg;
  cfg.K = cell.geometry().K;
  cfg.delta = delta;
  cfg.method = m;
  return {std::move(cell), cfg, Vec2::Zero()};
}

}  // namespace

TEST(ScanCell, CarrierPeriodicAndBoxApproximated) {
  for (double d : {0.04, 0.02, 0.01}) {
    const SupercellIndex c = scan_cell(d, 1.0, 6.0, 6.0);
    EXPECT_EQ((2 * c.Ly() + 1) % 3, 0);
    const Vec2 box = macro_box(c, d);
    EXPECT_NEAR(box.x(), 6.0, d * std::sqrt(3.0) * 2);
    EXPECT_NEAR(box.y(), 6.0, d * 3.1);
    EXPECT_EQ(c.n_layers(), 2);
  }
  EXPECT_THROW(scan_cell(0.0, 1.0, 1.0, 1.0), Error);
}

TEST(Lift, ConstantFieldGivesCarrierTimesAmplitudes) {
  for (LiftMethod m : {LiftMethod::exact, LiftMethod::spline}) {
    LiftSetup s = make(0.1, m);
    const Vec2 box = macro_box(s.cell, 0.1);
    SpectralField phi(4, 4, 4, box.x(), box.y());
    const cplx amp[4] = {1.0, cplx(0, 2), -0.5, cplx(0.3, 0.3)};
    for (int c = 0; c < 4; ++c) phi(c, 0, 0) = amp[c];
    const CVec psi = lift_to_lattice(phi, s.cell, s.cfg, 0.0);
    for (std::size_t i = 0; i < s.cell.size(); ++i) {
      const cplx ref = 0.1 * std::exp(oracle::I * s.cfg.K.dot(s.cell.position(i))) * amp[s.cell.site(i).orbital()];
      EXPECT_NEAR(std::abs(psi[Eigen::Index(i)] - ref), 0.0, 1e-12);
    }
  }
}

TEST(Lift, SingleModeExactAndSplineClose) {
  const double d = 0.05;
  LiftSetup ex = make(d, LiftMethod::exact);
  LiftSetup sp = make(d, LiftMethod::spline);
  sp.cfg.spline_oversample = 2;
  const Vec2 box = macro_box(ex.cell, d);
  SpectralField phi(4, 3, 3, box.x(), box.y());
  phi(2, 1, -2) = 1.0;
  const CVec a = lift_to_lattice(phi, ex.cell, ex.cfg, 0.0);
  const CVec b = lift_to_lattice(phi, sp.cell, sp.cfg, 0.0);
  for (std::size_t i = 0; i < ex.cell.size(); ++i) {
    const Vec2 X = d * ex.cell.position(i);
    const cplx mode = ex.cell.site(i).orbital() == 2 ? phi.eval(X)[2] : cplx(0.0);
    const cplx ref = d * std::exp(oracle::I * ex.cfg.K.dot(ex.cell.position(i))) * mode;
    EXPECT_NEAR(std::abs(a[Eigen::Index(i)] - ref), 0.0, 1e-12);
  }
  EXPECT_LT((a - b).norm() / a.norm(), 1e-3);
}

TEST(Lift, TimePhaseUsesReferenceEnergy) {
  LiftSetup s = make(0.1, LiftMethod::exact);
  s.cfg.E_ref = 0.7;
  const Vec2 box = macro_box(s.cell, 0.1);
  SpectralField phi(4, 2, 2, box.x(), box.y());
  phi(0, 0, 1) = 1.0;
  const CVec a = lift_to_lattice(phi, s.cell, s.cfg, 0.0), b = lift_to_lattice(phi, s.cell, s.cfg, 2.0);
  EXPECT_LT((b - std::exp(-oracle::I * 1.4) * a).norm(), 1e-12);
}

TEST(Lift, RejectsMismatchedBox) {
  LiftSetup s = make(0.1, LiftMethod::exact);
  SpectralField phi(4, 2, 2, 1.0, 1.0);
  try {
    lift_to_lattice(phi, s.cell, s.cfg, 0.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::config);
  }
}

TEST(ErrorSeries, IdenticalTrajectoriesGiveZeroError) {
  const double d = 0.1;
  LiftSetup s = make(d, LiftMethod::exact);
  const Vec2 box = macro_box(s.cell, d);
  ContinuumTrajectory cont;
  TbTrajectory tb;
  for (int i = 0; i < 3; ++i) {
    SpectralField phi(4, 2, 2, box.x(), box.y());
    phi(i % 4, 1, 0) = cplx(1.0, 0.5 * i);
    phi(3, 0, 0) = 0.2;
    cont.times.push_back(d * i * 2.0);
    cont.states.push_back(phi);
    tb.times.push_back(i * 2.0);
    tb.states.push_back(3.0 * lift_to_lattice(phi, s.cell, s.cfg, i * 2.0));
  }
  const ErrorSeries es = error_series(tb, cont, s.cell, s.cfg);
  ASSERT_EQ(es.E.size(), 3u);
  for (double e : es.E) EXPECT_LT(e, 1e-13);
  // a perturbed lattice state is detected
  tb.states[2][0] += 0.5;
  EXPECT_GT(error_series(tb, cont, s.cell, s.cfg).E[2], 1e-3);
}

TEST(ErrorSeries, ResampleErrors) {
  const double d = 0.1;
  LiftSetup s = make(d, LiftMethod::exact);
  const Vec2 box = macro_box(s.cell, d);
  SpectralField phi(4, 1, 1, box.x(), box.y());
  phi(0, 0, 0) = 1.0;
  ContinuumTrajectory cont;
  cont.times = {0.0, 0.1};
  cont.states = {phi, phi};
  TbTrajectory tb;
  tb.times = {0.0, 1.5};
  const CVec psi = lift_to_lattice(phi, s.cell, s.cfg, 0.0);
  tb.states = {psi, psi};
  try {
    error_series(tb, cont, s.cell, s.cfg);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::resample);
  }
  tb.times = {0.0};
  tb.states = {psi};
  EXPECT_THROW(error_series(tb, cont, s.cell, s.cfg), Error);
}

TEST(ConvergenceScan, NeedsThreeDeltas) {
  BilayerScanSpec spec;
  try {
    convergence_scan(spec, {1}, {0.1, 0.05});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::fit_undetermined);
  }
}

TEST(ConvergenceScan, SmallScanProducesFitsAndCsv) {
  BilayerScanSpec spec;
  spec.box_X = spec.box_Y = 2.0;
  spec.sigma = 0.3;
  spec.Kx = spec.Ky = 12;
  spec.n_samples = 4;
  spec.T_factor = 0.5;
  spec.continuum_substeps = 4;
  const ScanResult r = convergence_scan(spec, {1, 2}, {0.2, 0.14, 0.1});
  ASSERT_EQ(r.fits.size(), 2u);
  ASSERT_EQ(r.runs.size(), 6u);
  for (const auto& run : r.runs) {
    EXPECT_EQ(run.series.E.size(), 5u);
    EXPECT_LT(run.series.E.front(), 1e-12);
    EXPECT_GT(run.slope, 0.0);
  }
  for (const auto& f : r.fits) EXPECT_TRUE(std::isfinite(f.q));
  const auto dir = ::testing::TempDir();
  r.write_csv(dir + "fits.csv", dir + "exponents.csv");
}
