#include "tbcont/spline.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>

#include "tbcont/error.hpp"

namespace tbcont {

namespace {

// LU of the (N+2)x(N+2) interpolation system for N knots with not-a-knot rows.
std::shared_ptr<const Eigen::PartialPivLU<Eigen::MatrixXd>> not_a_knot_lu(int N) {
  static std::mutex mu;
  static std::map<int, std::shared_ptr<const Eigen::PartialPivLU<Eigen::MatrixXd>>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(N);
  if (it != cache.end()) return it->second;
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(N + 2, N + 2);
  // coefficient c_j for j = -1..N sits in column j + 1
  for (int i = 0; i < N; ++i) {
    A(i, i) = 1.0 / 6;
    A(i, i + 1) = 4.0 / 6;
    A(i, i + 2) = 1.0 / 6;
  }
  // continuity of the third derivative at knots 1 and N-2
  const double jump[5] = {1, -4, 6, -4, 1};
  for (int k = 0; k < 5; ++k) {
    A(N, 1 - 2 + k + 1) = jump[k];
    A(N + 1, (N - 2) - 2 + k + 1) = jump[k];
  }
  auto lu = std::make_shared<const Eigen::PartialPivLU<Eigen::MatrixXd>>(A);
  cache.emplace(N, lu);
  return lu;
}

inline void bspline_weights(double f, double w[4]) {
  const double f2 = f * f, f3 = f2 * f;
  w[0] = (1 - f) * (1 - f) * (1 - f) / 6;
  w[1] = (3 * f3 - 6 * f2 + 4) / 6;
  w[2] = (-3 * f3 + 3 * f2 + 3 * f + 1) / 6;
  w[3] = f3 / 6;
}

}  // namespace

CubicSpline2D::CubicSpline2D(const cplx* samples, int Gx, int Gy, double Lx, double Ly, int ghost)
    : Gx_(Gx), Gy_(Gy), ghost_(ghost), Lx_(Lx), Ly_(Ly), dx_(Lx / Gx), dy_(Ly / Gy) {
  if (Gx < 4 || Gy < 4 || ghost < 2) fail(Errc::invalid_parameter, "spline grid too small");
  const int Nx = Gx + 2 * ghost, Ny = Gy + 2 * ghost;
  Cx_ = Nx + 2;
  Cy_ = Ny + 2;
  auto wrapi = [](int a, int G) { return ((a % G) + G) % G; };

  // solve along x for each extended y knot
  const auto lux = not_a_knot_lu(Nx);
  Eigen::MatrixXcd rhs = Eigen::MatrixXcd::Zero(Nx + 2, Ny);
  for (int i = 0; i < Nx; ++i)
    for (int j = 0; j < Ny; ++j)
      rhs(i, j) = samples[std::size_t(wrapi(i - ghost, Gx)) * Gy + wrapi(j - ghost, Gy)];
  const Eigen::MatrixXcd cx = lux->solve(rhs.real()).cast<cplx>() + I * lux->solve(rhs.imag()).cast<cplx>();

  const auto luy = not_a_knot_lu(Ny);
  Eigen::MatrixXcd rhs2 = Eigen::MatrixXcd::Zero(Ny + 2, Cx_);
  rhs2.topRows(Ny) = cx.transpose();
  const Eigen::MatrixXcd cy =
      luy->solve(rhs2.real()).cast<cplx>() + I * luy->solve(rhs2.imag()).cast<cplx>();
  coeffs_.resize(std::size_t(Cx_) * Cy_);
  for (int i = 0; i < Cx_; ++i)
    for (int j = 0; j < Cy_; ++j) coeffs_[std::size_t(i) * Cy_ + j] = cy(j, i);
}

cplx CubicSpline2D::operator()(const Vec2& X) const {
  double x = X.x() + Lx_ / 2, y = X.y() + Ly_ / 2;
  x -= Lx_ * std::floor(x / Lx_);
  y -= Ly_ * std::floor(y / Ly_);
  // knot index within the extended grid
  const double tx = x / dx_ + ghost_, ty = y / dy_ + ghost_;
  const int ix = std::min(int(std::floor(tx)), Gx_ + ghost_ - 1);
  const int iy = std::min(int(std::floor(ty)), Gy_ + ghost_ - 1);
  double wx[4], wy[4];
  bspline_weights(tx - ix, wx);
  bspline_weights(ty - iy, wy);
  cplx s = 0.0;
  for (int a = 0; a < 4; ++a) {
    const cplx* row = coeffs_.data() + std::size_t(ix - 1 + a + 1) * Cy_;
    cplx r = 0.0;
    for (int b = 0; b < 4; ++b) r += wy[b] * row[iy - 1 + b + 1];
    s += wx[a] * r;
  }
  return s;
}

}  // namespace tbcont
