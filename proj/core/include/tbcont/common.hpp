#pragma once

#include <complex>
#include <numbers>

#include <Eigen/Dense>

namespace tbcont {

using cplx = std::complex<double>;
using Vec2 = Eigen::Vector2d;
using CVec2 = Eigen::Vector2cd;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;

inline constexpr double pi = std::numbers::pi;
inline constexpr cplx I{0.0, 1.0};

// Pauli matrices and ladder operators, sigma_plus = |A><B|.
CMat pauli(int k);
CMat sigma_plus();
CMat sigma_minus();
CMat kron(const CMat& a, const CMat& b);

Eigen::Matrix2d rotation(double theta);

// Integer power by repeated multiplication (std::pow(complex, int) misbehaves at 0^0).
inline cplx ipow(cplx z, int k) {
  cplx r = 1.0;
  for (int i = 0; i < k; ++i) r *= z;
  return r;
}
inline double ipow(double x, int k) {
  double r = 1.0;
  for (int i = 0; i < k; ++i) r *= x;
  return r;
}

// <z> = sqrt(1 + |z|^2)
inline double japanese(const Vec2& z) { return std::sqrt(1.0 + z.squaredNorm()); }

}  // namespace tbcont
