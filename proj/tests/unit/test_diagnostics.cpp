#include <gtest/gtest.h>

#include "oracles.hpp"
#include "tbcont/diagnostics.hpp"
#include "tbcont/effective.hpp"
#include "tbcont/error.hpp"
#include "tbcont/models.hpp"

using namespace tbcont;

TEST(Fits, LineAndOriginSlope) {
  const LineFit f = fit_line({0, 1, 2, 3}, {1, 3, 5, 7});
  EXPECT_NEAR(f.slope, 2.0, 1e-14);
  EXPECT_NEAR(f.intercept, 1.0, 1e-14);
  EXPECT_NEAR(f.residual, 0.0, 1e-14);
  EXPECT_NEAR(fit_slope_through_origin({1, 2, 3}, {2.1, 3.9, 6.0}), (2.1 + 7.8 + 18.0) / 14.0, 1e-14);
  try {
    fit_line({1.0}, {2.0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::fit_undetermined);
  }
  EXPECT_THROW(fit_line({1, 1, 1}, {1, 2, 3}), Error);
}

TEST(UnitCircle, MatchesDirectSum) {
  for (int p = 1; p <= 8; ++p)
    for (double th : {0.0, 0.3, 1.7, 2.9, 4.4}) {
      const cplx z = std::polar(1.0, th);
      EXPECT_NEAR(std::abs(haldane_unit_circle_function(p, z) - oracle::unit_circle_f(p, z)), 0.0, 1e-14);
    }
}

TEST(UnitCircle, BoundedAwayFromZero) {
  for (int p = 1; p <= 8; ++p) EXPECT_GT(haldane_unit_circle_min(p), 0.1) << "p = " << p;
}

TEST(UnitCircle, SpotValues) {
  for (int p = 2; p <= 8; p += 2)
    EXPECT_NEAR(std::abs(haldane_unit_circle_function(p, oracle::I) + std::pow(std::sqrt(3.0) / 2, p) / 3.0), 0.0,
                1e-12);
  // odd p: the direct sum gives 3 Re f(1) = 1 + 2^-p
  for (int p = 1; p <= 7; p += 2)
    EXPECT_NEAR(3 * haldane_unit_circle_function(p, 1.0).real(), 1.0 + std::pow(2.0, -p), 1e-12);
  EXPECT_THROW(haldane_unit_circle_function(0, 1.0), Error);
}

TEST(Ellipticity, MassiveDiracSymbolIsElliptic) {
  const LatticeGeometry g = honeycomb_geometry(1.0);
  HaldaneParams hp;
  hp.M = Field(0.5);
  const PolySymbol b = taylor_effective(haldane_trig_symbol(g, hp), g.K, 0.0, 1);
  std::vector<Vec2> zs;
  for (int i = -10; i <= 10; ++i)
    for (int j = -10; j <= 10; ++j) zs.emplace_back(3.0 * i, 3.0 * j);
  const EllipticityReport r = ellipticity_check(b, 1, {0.1, 0.05}, zs, {Vec2::Zero()});
  EXPECT_GT(r.c, 0.0);
  EXPECT_GE(r.margin, -1e-12);
  EXPECT_GT(r.unit_circle_min, 0.0);
  EXPECT_THROW(ellipticity_check(b, 1, {}, zs, {Vec2::Zero()}), Error);
}

TEST(Remainder, ExactExpansionReportsInfiniteSlope) {
  // a linear symbol is reproduced exactly by its first-order expansion
  TrigSymbol a(2);
  a.add(Vec2::Zero(), pauli(3), Field(0.3), 1);
  const PolySymbol b = taylor_effective(a, Vec2::Zero(), 0.0, 1);
  const RemainderScan rs = remainder_scan(a, b, {0.1, 0.05, 0.025}, {Vec2(1, 1)}, {Vec2::Zero()});
  EXPECT_TRUE(std::isinf(rs.slope));
  EXPECT_THROW(remainder_scan(a, b, {0.1, 0.05}, {Vec2(1, 1)}, {Vec2::Zero()}), Error);
}
