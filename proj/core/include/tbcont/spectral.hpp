#pragma once

#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "tbcont/common.hpp"

namespace tbcont {

// phi(X) = sum_{|k|<=Kx, |l|<=Ky} phihat_{kl} exp(2 pi i (k X1 / Lx + l X2 / Ly)), n components.
class SpectralField {
 public:
  SpectralField() = default;
  SpectralField(int n, int Kx, int Ky, double Lx, double Ly);

  int n() const { return n_; }
  int Kx() const { return Kx_; }
  int Ky() const { return Ky_; }
  int Nx() const { return 2 * Kx_ + 1; }
  int Ny() const { return 2 * Ky_ + 1; }
  double Lx() const { return Lx_; }
  double Ly() const { return Ly_; }
  std::size_t modes() const { return std::size_t(Nx()) * std::size_t(Ny()); }

  std::size_t index(int c, int k, int l) const {
    return (std::size_t(c) * std::size_t(Nx()) + std::size_t(k + Kx_)) * std::size_t(Ny()) +
           std::size_t(l + Ky_);
  }
  cplx& operator()(int c, int k, int l) { return data_[index(c, k, l)]; }
  cplx operator()(int c, int k, int l) const { return data_[index(c, k, l)]; }
  std::vector<cplx>& data() { return data_; }
  const std::vector<cplx>& data() const { return data_; }

  Vec2 zeta(int k, int l) const { return {2 * pi * k / Lx_, 2 * pi * l / Ly_}; }
  bool same_shape(const SpectralField& o) const;

  // L2 norm over the box (Parseval).
  double norm() const;
  cplx inner(const SpectralField& o) const;  // <this, o>
  void scale(cplx s);
  void axpy(cplx a, const SpectralField& x);  // this += a x
  void set_zero();

  // Direct evaluation of the truncated series.
  CVec eval(const Vec2& X) const;

  nlohmann::json header(double time) const;
  void save(const std::string& path, double time) const;  // path.bin + path.json
  static SpectralField load(const std::string& path, double* time = nullptr);

 private:
  int n_ = 0, Kx_ = 0, Ky_ = 0;
  double Lx_ = 1.0, Ly_ = 1.0;
  std::vector<cplx> data_;
};

// Dealiasing grid of 3(Kx+1) x 3(Ky+1) points, X_a = -L/2 + a L / G.
class SpectralGrid {
 public:
  SpectralGrid(int Kx, int Ky, double Lx, double Ly, int Gx = 0, int Gy = 0);
  ~SpectralGrid();
  SpectralGrid(const SpectralGrid&) = delete;
  SpectralGrid& operator=(const SpectralGrid&) = delete;

  int Gx() const { return Gx_; }
  int Gy() const { return Gy_; }
  int Kx() const { return Kx_; }
  int Ky() const { return Ky_; }
  double Lx() const { return Lx_; }
  double Ly() const { return Ly_; }
  std::size_t points() const { return std::size_t(Gx_) * std::size_t(Gy_); }
  Vec2 point(int a, int b) const { return {-Lx_ / 2 + a * Lx_ / Gx_, -Ly_ / 2 + b * Ly_ / Gy_}; }

  // One component: coefficients (Nx*Ny, layout [k][l]) -> samples (Gx*Gy, layout [a][b]).
  void to_grid(const cplx* coeffs, cplx* samples) const;
  // samples -> truncated coefficients
  void from_grid(const cplx* samples, cplx* coeffs) const;

  // All components of a field; samples layout [c][a][b].
  void to_grid(const SpectralField& f, std::vector<cplx>& samples) const;
  void from_grid(const std::vector<cplx>& samples, SpectralField& f) const;
  // Samples a scalar function on the grid.
  std::vector<cplx> sample(const std::function<cplx(const Vec2&)>& f) const;

 private:
  int Kx_, Ky_, Gx_, Gy_;
  double Lx_, Ly_;
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Builds a field from samples of a vector-valued function via the dealiasing grid.
SpectralField project(const std::function<CVec(const Vec2&)>& f, int n, int Kx, int Ky, double Lx,
                      double Ly);

}  // namespace tbcont
