#include <gtest/gtest.h>

#include "oracles.hpp"
#include "tbcont/error.hpp"
#include "tbcont/topology.hpp"

using namespace tbcont;

namespace {

// Degree of the separable field on its own box, sign-flipped to match -sum sign det J.
int oracle_bdi(const VectorField3& F) {
  const Box3& b = F.box;
  auto f12 = [&](double z1, double z2) {
    const Vec3 v = F.f(Vec3(0.0, z1, z2));
    return Eigen::Vector2d(v[0], v[1]);
  };
  auto f3 = [&](double x) { return F.f(Vec3(x, 0.0, 0.0))[2]; };
  // square zeta box; odd cell counts keep the origin off the cell boundaries
  const double z = std::min({-b.lo[1], b.hi[1], -b.lo[2], b.hi[2]});
  return -oracle::grid_degree(f12, f3, b.lo[0], b.hi[0], -z, z, 201, 481);
}

}  // namespace

TEST(Bdi, DiracFieldHasChargeMinusOne) {
  const BDIResult r = bdi(dirac1_field());
  EXPECT_EQ(r.bdi, -1);
  ASSERT_EQ(r.zeros.size(), 1u);
  EXPECT_LT(r.zeros[0].x.norm(), 1e-10);
  EXPECT_EQ(oracle_bdi(dirac1_field()), -1);
}

TEST(Bdi, GaugeFamilyTable) {
  for (double h : {-0.4, 0.0, 0.2}) {
    const VectorField3 F = haldane_gauge_family(h);
    EXPECT_EQ(bdi(F).bdi, 2) << "h = " << h;
    EXPECT_EQ(oracle_bdi(F), 2) << "h = " << h;
  }
  for (double h : {0.3, 1.0}) {
    const VectorField3 F = haldane_gauge_family(h);
    EXPECT_EQ(bdi(F).bdi, 0) << "h = " << h;
    EXPECT_EQ(oracle_bdi(F), 0) << "h = " << h;
  }
}

TEST(Bdi, RegularizationRestoresDiracCharge) {
  const VectorField3 F = regularized_field(10.0);
  EXPECT_EQ(bdi(F).bdi, -1);
  EXPECT_EQ(oracle_bdi(F), -1);
  EXPECT_EQ(bdi(regularized_field(0.0)).bdi, bdi(haldane_gauge_family(0.0)).bdi);
}

TEST(Bdi, InvariantUnderSwitchAndHopping) {
  EXPECT_EQ(bdi(dirac1_field(1.0, 1.0, 0.1, arctan_switch())).bdi, -1);
  EXPECT_EQ(bdi(dirac1_field(1.0, 2.5, 0.1, tanh_switch(0.3))).bdi, -1);
  EXPECT_EQ(bdi(haldane_gauge_family(0.0, 0.1, 1.0, 1.0, arctan_switch())).bdi, 2);
  EXPECT_EQ(bdi(haldane_gauge_family(0.0, 0.05)).bdi, 2);
}

TEST(Bdi, JacobianMatchesFiniteDifferences) {
  for (const VectorField3& F : {haldane_gauge_family(0.2), regularized_field(3.0)}) {
    const Vec3 x(0.3, 7.0, -11.0);
    const Mat3 J = F.jac(x);
    for (int j = 0; j < 3; ++j) {
      const double e = 1e-5 * std::max(1.0, std::abs(x[j]));
      Vec3 a = x, b = x;
      a[j] += e;
      b[j] -= e;
      const Vec3 d = (F.f(a) - F.f(b)) / (2 * e);
      for (int i = 0; i < 3; ++i) EXPECT_NEAR(J(i, j), d[i], 1e-6 * std::max(1.0, std::abs(d[i]))) << F.name;
    }
  }
}

TEST(Bdi, GaugeFamilyZerosAndCharges) {
  const double delta = 0.1;
  const BDIResult r = bdi(haldane_gauge_family(0.0, delta));
  ASSERT_EQ(r.zeros.size(), 4u);
  std::vector<int> charges;
  bool found_far = false;
  int upper = 0;
  for (const auto& z : r.zeros) {
    EXPECT_LT(z.residual, 1e-10);
    charges.push_back(-z.sign);
    if (std::abs(z.x[1]) < 1e-8 && std::abs(z.x[2] + 4 * std::sqrt(3.0) / delta) < 1e-8) found_far = true;
    if (std::abs(z.x[2] - 2 * std::sqrt(3.0) / delta) < 1e-8) ++upper;
  }
  std::sort(charges.begin(), charges.end());
  EXPECT_EQ(charges, (std::vector<int>{-1, 1, 1, 1}));
  EXPECT_TRUE(found_far);
  EXPECT_EQ(upper, 2);
  EXPECT_EQ(r.to_json()["bdi"], 2);
  // above the threshold the off-axis pair is gone
  EXPECT_EQ(bdi(haldane_gauge_family(1.0, delta)).zeros.size(), 2u);
}

TEST(Bdi, DegenerateZeroIsReported) {
  // transversal zero whose Jacobian determinant is below the conditioning floor
  VectorField3 F = dirac1_field();
  F.name = "flat";
  F.f = [](const Vec3& x) { return Vec3(x[2], -x[1], 1e-9 * x[0]); };
  F.jac = [](const Vec3&) {
    Mat3 J = Mat3::Zero();
    J(0, 2) = 1;
    J(1, 1) = -1;
    J(2, 0) = 1e-9;
    return J;
  };
  F.scale = 1.0;
  try {
    bdi(F);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::degenerate_zero);
  }
}

TEST(Bdi, RejectsEmptySeedGrid) {
  ZeroSearchOptions o;
  o.seeds_x = 0;
  EXPECT_THROW(find_zeros(dirac1_field(), o), Error);
  EXPECT_THROW(tanh_switch(0.0), Error);
}
