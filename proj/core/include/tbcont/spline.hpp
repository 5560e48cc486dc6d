#pragma once

#include <vector>

#include "tbcont/common.hpp"

namespace tbcont {

// Tensor-product cubic B-spline through periodic samples on a uniform grid X_a = x0 + a dx,
// built on the periodic extension with `ghost` extra knots per side and not-a-knot end conditions.
class CubicSpline2D {
 public:
  CubicSpline2D(const cplx* samples, int Gx, int Gy, double Lx, double Ly, int ghost = 3);

  // Evaluate at a point of the periodic box [-Lx/2, Lx/2) x [-Ly/2, Ly/2) (wrapped).
  cplx operator()(const Vec2& X) const;

 private:
  int Gx_, Gy_, ghost_;
  double Lx_, Ly_, dx_, dy_;
  int Cx_, Cy_;                // coefficient counts
  std::vector<cplx> coeffs_;   // [i][j], Cx x Cy
};

}  // namespace tbcont
