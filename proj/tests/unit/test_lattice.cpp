#include <gtest/gtest.h>

#include <set>

#include "oracles.hpp"
#include "tbcont/error.hpp"
#include "tbcont/lattice.hpp"

using namespace tbcont;

TEST(Geometry, MatchesHandWrittenConstants) {
  for (double v : {1.0, 0.7}) {
    const LatticeGeometry g = honeycomb_geometry(v);
    const oracle::Honeycomb h(v);
    EXPECT_LT((g.v1 - h.v1).norm(), 1e-15);
    EXPECT_LT((g.v2 - h.v2).norm(), 1e-15);
    for (int j = 0; j < 3; ++j) {
      EXPECT_LT((g.a[j] - h.a[j]).norm(), 1e-15);
      EXPECT_LT((g.b[j] - h.b[j]).norm(), 1e-15);
    }
    EXPECT_LT((g.K - h.K).norm(), 1e-15);
  }
}

TEST(Geometry, ReciprocalBasis) {
  const LatticeGeometry g = honeycomb_geometry(1.3);
  EXPECT_NEAR(g.w1.dot(g.v1), 2 * pi, 1e-13);
  EXPECT_NEAR(g.w2.dot(g.v2), 2 * pi, 1e-13);
  EXPECT_NEAR(g.w1.dot(g.v2), 0.0, 1e-13);
  EXPECT_NEAR(g.w2.dot(g.v1), 0.0, 1e-13);
}

TEST(Geometry, BondsHaveEqualLengthAndSumToZero) {
  const LatticeGeometry g = honeycomb_geometry(1.0);
  Vec2 sa = Vec2::Zero(), sb = Vec2::Zero();
  for (int j = 0; j < 3; ++j) {
    EXPECT_NEAR(g.a[j].norm(), 1.0 / std::sqrt(3.0), 1e-15);
    EXPECT_NEAR(g.b[j].norm(), 1.0, 1e-15);
    sa += g.a[j];
    sb += g.b[j];
  }
  EXPECT_LT(sa.norm(), 1e-15);
  EXPECT_LT(sb.norm(), 1e-15);
}

TEST(Geometry, RejectsNonPositiveSpacing) {
  EXPECT_THROW(honeycomb_geometry(0.0), Error);
  EXPECT_THROW(honeycomb_geometry(-1.0), Error);
}

TEST(Supercell, SiteCounts) {
  const LatticeGeometry g = honeycomb_geometry(1.0);
  EXPECT_EQ(supercell(g, 1, 1, 2, CellKind::hexagonal).size(), 36u);
  EXPECT_EQ(supercell(g, 1, 1, 2).size(), 72u);
  EXPECT_EQ(supercell(g, 2, 4, 2).size(), std::size_t(8 * 5 * 9));
  EXPECT_EQ(supercell(g, 3, 1, 1).size(), std::size_t(4 * 7 * 3));
}

TEST(Supercell, CapacityAndParameterErrors) {
  const LatticeGeometry g = honeycomb_geometry(1.0);
  try {
    SupercellIndex c(g, 10, 10, 2, CellKind::rectangular, 100);
    FAIL() << "expected a capacity error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::capacity);
  }
  EXPECT_THROW(supercell(g, 0, 1, 2), Error);
  EXPECT_THROW(supercell(g, 1, 1, 0), Error);
}

TEST(Supercell, IndexRoundTripAndOrbitals) {
  const LatticeGeometry g = honeycomb_geometry(1.0);
  for (CellKind kind : {CellKind::rectangular, CellKind::hexagonal}) {
    const SupercellIndex c = supercell(g, 2, 1, 2, kind);
    for (std::size_t i = 0; i < c.size(); ++i) {
      const SiteInfo& s = c.site(i);
      EXPECT_EQ(c.index(s.m, s.n, s.sub, s.layer, s.sublattice), i);
      EXPECT_EQ(c.index_of(s.hex_i, s.hex_j, s.orbital()), i);
      const Vec2 R = double(s.hex_i) * g.v1 + double(s.hex_j) * g.v2;
      EXPECT_LT((c.position(i) - R - c.orbital_offset(s.orbital())).norm(), 1e-12);
    }
  }
}

TEST(Supercell, PositionsDistinctOnTheTorus) {
  const LatticeGeometry g = honeycomb_geometry(1.0);
  const SupercellIndex c = supercell(g, 2, 2, 1);
  std::set<std::pair<long, long>> seen;
  for (std::size_t i = 0; i < c.size(); ++i) {
    const Vec2 x = c.wrap(c.position(i));
    seen.insert({std::lround(x.x() * 1e6), std::lround(x.y() * 1e6)});
  }
  EXPECT_EQ(seen.size(), c.size());
}

TEST(Supercell, RectangularBoxAndCarrierPeriodicity) {
  const LatticeGeometry g = honeycomb_geometry(1.0);
  const SupercellIndex c = supercell(g, 3, 4, 2);
  const Vec2 box = c.box();
  EXPECT_NEAR(box.x(), 7 * std::sqrt(3.0), 1e-12);
  EXPECT_NEAR(box.y(), 9.0, 1e-12);
  // 2Ly + 1 = 9 is divisible by 3, so exp(i K.x) is periodic on the torus
  EXPECT_NEAR(std::abs(std::exp(oracle::I * g.K.y() * box.y()) - 1.0), 0.0, 1e-12);
  EXPECT_THROW(supercell(g, 1, 1, 2, CellKind::hexagonal).box(), Error);
}

TEST(Supercell, EveryIntralayerSiteHasThreeNearestNeighbours) {
  const LatticeGeometry g = honeycomb_geometry(1.0);
  const SupercellIndex c = supercell(g, 2, 2, 2);
  for (std::size_t i = 0; i < c.size(); ++i) {
    const SiteInfo& s = c.site(i);
    for (int j = 0; j < 3; ++j) {
      const Vec2 bond = s.sublattice == 0 ? g.a[j] : Vec2(-g.a[j]);
      const int to = 2 * s.layer + 1 - s.sublattice;
      const auto off = c.bravais_offset(bond, s.orbital(), to);
      ASSERT_TRUE(off.has_value());
      const std::size_t k = c.neighbor(i, *off, to);
      const Vec2 d = c.wrap(c.position(k) - c.position(i) - bond);
      EXPECT_LT(d.norm(), 1e-9);
    }
  }
}

TEST(Supercell, OffLatticeShiftHasNoNeighbour) {
  const LatticeGeometry g = honeycomb_geometry(1.0);
  const SupercellIndex c = supercell(g, 1, 1, 1);
  EXPECT_FALSE(c.bravais_offset(Vec2(0.123, 0.0), 0, 1).has_value());
  EXPECT_FALSE(c.bravais_offset(g.a[0], 0, 0).has_value());
}

TEST(Supercell, JsonDumpDescribesTheMapping) {
  const LatticeGeometry g = honeycomb_geometry(1.0);
  const auto j = supercell(g, 1, 2, 2).to_json();
  EXPECT_TRUE(j.is_object());
  EXPECT_FALSE(j.dump().empty());
}
