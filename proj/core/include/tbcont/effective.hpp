#pragma once

#include <array>
#include <functional>

#include "tbcont/field.hpp"
#include "tbcont/lattice.hpp"
#include "tbcont/models.hpp"
#include "tbcont/symbol.hpp"

namespace tbcont {

// Order-p effective symbol b_{0p} at the degenerate point (K, E):
// delta b = sum_{j=1}^p delta^j / j! sum zbar_{i1}..zbar_{ij} d_{i1..ij} a(X, K; 0), zbar = (zeta, 1).
PolySymbol taylor_effective(const TrigSymbol& a, const Vec2& K, double E, int p);

struct StrainTwistParams {
  Field t1 = Field(1.0);
  Field t2 = Field(0.0);
  Field M = Field(0.0);
  // First-order bond perturbations a_{j,1}(X), components (x, y); real fields.
  std::array<std::array<Field, 2>, 3> bond_strain{};
  bool finite_twist = false;  // rotated lattice, expansion at R_theta K
  double theta = 0.0;
  bool small_twist = false;  // theta = beta delta, expansion at fixed K
  double beta = 0.0;
  bool valley_Kp = false;
};

PolySymbol strain_twist_effective(const LatticeGeometry& geom, const StrainTwistParams& params);

// alpha(X) = a_{1,1} + e^{-i 2pi/3} a_{2,1} + e^{i 2pi/3} a_{3,1}
std::array<Field, 2> strain_alpha(const StrainTwistParams& params);

struct PositionDependentResult {
  std::function<Vec2(const Vec2&)> K_field;   // grad A = K + grad B
  std::function<Vec2(const Vec2&)> v1_field;  // (4 pi / 3) R_{2pi/3} grad A / |grad A|^2
  std::function<Eigen::Matrix2d(const Vec2&)> g_field;
  PolySymbol symbol;
};

// Degenerate point of the deformed lattice generated by v1: (4 pi / (3 |v1|^2)) R_{-2pi/3} v1.
Vec2 degenerate_point_from_v1(const Vec2& v1);

PositionDependentResult position_dependent_effective(const LatticeGeometry& geom, const Field& B,
                                                     const Field& t1 = Field(1.0),
                                                     const Field& t2 = Field(0.0),
                                                     const Field& M = Field(0.0),
                                                     const std::vector<Vec2>& check_points = {});

struct StackingSpec {
  Stacking kind = Stacking::AB;
  Field gamma = Field(0.0);
  Field chi = Field(1.0);  // weight of Gamma_AB in a mixture
};

// Omega_n(X) (x) I_2 + I_n (x) base + Gamma_n(X)
PolySymbol multilayer_effective(int n, const Field& omega, const StackingSpec& stacking,
                                const PolySymbol& base);

struct BMParams {
  double beta = 0.0;
  std::array<cplx, 3> lambda{1.0, 1.0, 1.0};
  Field t1 = Field(1.0);
  Field M = Field(0.0);
  Field t2 = Field(0.0);
  double v = 1.0;
  double area = 1.0;  // |Gamma|
};

CMat bm_T(int j);
Vec2 bm_w(int j, double beta, double v);
Vec2 bm_w_tilde(int j, double beta, double v);
// Phase wave numbers q_l of the diagonal gauge U = diag(e^{i q_1.x} I_2, e^{i q_2.x} I_2).
std::array<Vec2, 2> bm_gauge_wavevectors(double beta, double v);

// bm_gauge = false: symbol with the (-1)^j sigma_2 terms and w_j;
// bm_gauge = true: unitarily equivalent Bistritzer-MacDonald form with w~_j.
PolySymbol bm_effective(const BMParams& params, bool bm_gauge = false);

}  // namespace tbcont
