#pragma once

#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "tbcont/common.hpp"

namespace tbcont {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

// Search box in (X2, zeta1, zeta2).
struct Box3 {
  Vec3 lo = Vec3::Constant(-1.0);
  Vec3 hi = Vec3::Constant(1.0);
  double diameter() const { return (hi - lo).norm(); }
};

// f(X2, zeta1, zeta2) multiplying (sigma1, sigma2, sigma3); jac(x)(i, j) = d f_i / d x_j.
struct VectorField3 {
  std::string name;
  std::function<Vec3(const Vec3&)> f;
  std::function<Mat3(const Vec3&)> jac;
  Box3 box;
  double scale = 1.0;  // typical Jacobian entry, sets the conditioning floor
  nlohmann::json params;
  std::vector<std::string> notes;
};

using SwitchFunction = std::function<double(double)>;
struct Switch {
  std::string name = "tanh";
  SwitchFunction value;
  SwitchFunction slope;
};
// tanh(x / width) scaled to slope 1 at the origin, or (2/pi) atan(pi x / 2).
Switch tanh_switch(double width = 1.0);
Switch arctan_switch();

// (sqrt3 v/2) t1 zeta2, -(sqrt3 v/2) t1 zeta1, M(X2)
VectorField3 dirac1_field(double v = 1.0, double t1 = 1.0, double delta = 0.1, const Switch& M = tanh_switch());
// Second-order gauge family; the O(delta) (I - sigma3)/2 term is dropped.
VectorField3 haldane_gauge_family(double h, double delta = 0.1, double v = 1.0, double t1 = 1.0,
                                  const Switch& M = tanh_switch());
// Second-order correction divided by 1 + alpha^2 delta <zeta>.
VectorField3 regularized_field(double alpha, double delta = 0.1, double v = 1.0, double t1 = 1.0,
                               const Switch& M = tanh_switch());

// Default box: |zeta delta v| <= zeta_extent, |X2| <= 5 switch widths.
Box3 default_box(double delta, double v, double zeta_extent = 24.0, double x_extent = 5.0);

struct FieldZero {
  Vec3 x;
  double residual = 0.0;
  double det = 0.0;
  int sign = 0;
};

struct ZeroSearchOptions {
  int seeds_x = 11, seeds_zeta = 41;
  int max_iter = 40;
  double tol = 1e-12;
  double floor = 1e-8;  // |det J| > floor * scale^3
};

struct ZeroSearch {
  std::vector<FieldZero> zeros;
  bool coverage_warning = false;
  std::vector<std::string> warnings;
  int seeds = 0, converged = 0;
};

ZeroSearch find_zeros(const VectorField3& field, const Box3& box, const ZeroSearchOptions& opts = {});
ZeroSearch find_zeros(const VectorField3& field, const ZeroSearchOptions& opts = {});

struct BDIResult {
  std::vector<FieldZero> zeros;
  int bdi = 0;
  bool coverage_warning = false;
  std::vector<std::string> warnings;
  nlohmann::json to_json() const;
};

// -sum sign det J over the zeros; throws degenerate_zero when a zero is below the conditioning floor.
BDIResult bdi(const VectorField3& field, const ZeroSearchOptions& opts = {});

}  // namespace tbcont
