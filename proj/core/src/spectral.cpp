#include "tbcont/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstring>
#include <fstream>
#include <mutex>

#include "tbcont/error.hpp"

namespace tbcont {

SpectralField::SpectralField(int n, int Kx, int Ky, double Lx, double Ly)
    : n_(n), Kx_(Kx), Ky_(Ky), Lx_(Lx), Ly_(Ly) {
  if (n < 1 || Kx < 0 || Ky < 0) fail(Errc::invalid_parameter, "spectral field shape");
  if (!(Lx > 0) || !(Ly > 0)) fail(Errc::invalid_parameter, "box lengths must be positive");
  data_.assign(std::size_t(n) * modes(), 0.0);
}

bool SpectralField::same_shape(const SpectralField& o) const {
  return n_ == o.n_ && Kx_ == o.Kx_ && Ky_ == o.Ky_ && Lx_ == o.Lx_ && Ly_ == o.Ly_;
}

double SpectralField::norm() const {
  double s = 0.0;
  for (const auto& z : data_) s += std::norm(z);
  return std::sqrt(s * Lx_ * Ly_);
}

cplx SpectralField::inner(const SpectralField& o) const {
  if (!same_shape(o)) fail(Errc::invalid_parameter, "spectral field shape mismatch");
  cplx s = 0.0;
  for (std::size_t i = 0; i < data_.size(); ++i) s += std::conj(data_[i]) * o.data_[i];
  return s * (Lx_ * Ly_);
}

void SpectralField::scale(cplx s) {
  for (auto& z : data_) z *= s;
}

void SpectralField::axpy(cplx a, const SpectralField& x) {
  if (!same_shape(x)) fail(Errc::invalid_parameter, "spectral field shape mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += a * x.data_[i];
}

void SpectralField::set_zero() { std::fill(data_.begin(), data_.end(), cplx(0.0)); }

CVec SpectralField::eval(const Vec2& X) const {
  CVec out = CVec::Zero(n_);
  std::vector<cplx> ex(Nx()), ey(Ny());
  for (int k = -Kx_; k <= Kx_; ++k) ex[k + Kx_] = std::exp(I * (2 * pi * k / Lx_) * X.x());
  for (int l = -Ky_; l <= Ky_; ++l) ey[l + Ky_] = std::exp(I * (2 * pi * l / Ly_) * X.y());
  for (int c = 0; c < n_; ++c)
    for (int k = -Kx_; k <= Kx_; ++k) {
      cplx s = 0.0;
      for (int l = -Ky_; l <= Ky_; ++l) s += (*this)(c, k, l) * ey[l + Ky_];
      out[c] += s * ex[k + Kx_];
    }
  return out;
}

nlohmann::json SpectralField::header(double time) const {
  return {{"n", n_}, {"Kx", Kx_}, {"Ky", Ky_}, {"Lx_len", Lx_}, {"Ly_len", Ly_}, {"time", time},
          {"layout", "[component][k+Kx][l+Ky], interleaved re/im f64"}};
}

void SpectralField::save(const std::string& path, double time) const {
  {
    std::ofstream f(path + ".bin", std::ios::binary);
    if (!f) fail(Errc::config, "cannot write " + path + ".bin");
    f.write(reinterpret_cast<const char*>(data_.data()), std::streamsize(data_.size() * sizeof(cplx)));
  }
  std::ofstream h(path + ".json");
  if (!h) fail(Errc::config, "cannot write " + path + ".json");
  h << header(time).dump(2) << "\n";
}

SpectralField SpectralField::load(const std::string& path, double* time) {
  std::ifstream h(path + ".json");
  if (!h) fail(Errc::config, "cannot read " + path + ".json");
  const auto j = nlohmann::json::parse(h);
  SpectralField f(j.at("n"), j.at("Kx"), j.at("Ky"), j.at("Lx_len"), j.at("Ly_len"));
  if (time) *time = j.value("time", 0.0);
  std::ifstream b(path + ".bin", std::ios::binary);
  if (!b.read(reinterpret_cast<char*>(f.data_.data()), std::streamsize(f.data_.size() * sizeof(cplx))))
    fail(Errc::config, "truncated coefficient file " + path + ".bin");
  return f;
}

namespace {
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

struct SpectralGrid::Impl {
  fftw_complex* buf = nullptr;
  fftw_plan backward = nullptr;  // coefficients -> samples
  fftw_plan forward = nullptr;
};

SpectralGrid::SpectralGrid(int Kx, int Ky, double Lx, double Ly, int Gx, int Gy)
    : Kx_(Kx), Ky_(Ky), Gx_(Gx > 0 ? Gx : 3 * (Kx + 1)), Gy_(Gy > 0 ? Gy : 3 * (Ky + 1)), Lx_(Lx),
      Ly_(Ly), impl_(std::make_unique<Impl>()) {
  if (Gx_ < 2 * Kx + 1 || Gy_ < 2 * Ky + 1) fail(Errc::invalid_parameter, "grid too coarse for cutoff");
  std::lock_guard<std::mutex> lock(planner_mutex());
  impl_->buf = fftw_alloc_complex(points());
  impl_->backward = fftw_plan_dft_2d(Gx_, Gy_, impl_->buf, impl_->buf, FFTW_BACKWARD, FFTW_ESTIMATE);
  impl_->forward = fftw_plan_dft_2d(Gx_, Gy_, impl_->buf, impl_->buf, FFTW_FORWARD, FFTW_ESTIMATE);
}

SpectralGrid::~SpectralGrid() {
  std::lock_guard<std::mutex> lock(planner_mutex());
  fftw_destroy_plan(impl_->backward);
  fftw_destroy_plan(impl_->forward);
  fftw_free(impl_->buf);
}

void SpectralGrid::to_grid(const cplx* coeffs, cplx* samples) const {
  cplx* buf = reinterpret_cast<cplx*>(impl_->buf);
  std::fill(buf, buf + points(), cplx(0.0));
  const int Ny = 2 * Ky_ + 1;
  for (int k = -Kx_; k <= Kx_; ++k) {
    const int a = k < 0 ? k + Gx_ : k;
    for (int l = -Ky_; l <= Ky_; ++l) {
      const int b = l < 0 ? l + Gy_ : l;
      // origin at -L/2: exp(2 pi i k X_a / L) = (-1)^k exp(2 pi i k a / G)
      buf[std::size_t(a) * Gy_ + b] = coeffs[std::size_t(k + Kx_) * Ny + (l + Ky_)] *
                                      (((k + l) & 1) ? -1.0 : 1.0);
    }
  }
  fftw_execute(impl_->backward);
  std::memcpy(samples, buf, points() * sizeof(cplx));
}

void SpectralGrid::from_grid(const cplx* samples, cplx* coeffs) const {
  cplx* buf = reinterpret_cast<cplx*>(impl_->buf);
  std::memcpy(buf, samples, points() * sizeof(cplx));
  fftw_execute(impl_->forward);
  const int Ny = 2 * Ky_ + 1;
  const double inv = 1.0 / double(points());
  for (int k = -Kx_; k <= Kx_; ++k) {
    const int a = k < 0 ? k + Gx_ : k;
    for (int l = -Ky_; l <= Ky_; ++l) {
      const int b = l < 0 ? l + Gy_ : l;
      coeffs[std::size_t(k + Kx_) * Ny + (l + Ky_)] =
          buf[std::size_t(a) * Gy_ + b] * (((k + l) & 1) ? -inv : inv);
    }
  }
}

void SpectralGrid::to_grid(const SpectralField& f, std::vector<cplx>& samples) const {
  if (f.Kx() != Kx_ || f.Ky() != Ky_) fail(Errc::invalid_parameter, "grid/field cutoff mismatch");
  samples.resize(std::size_t(f.n()) * points());
  for (int c = 0; c < f.n(); ++c)
    to_grid(f.data().data() + std::size_t(c) * f.modes(), samples.data() + std::size_t(c) * points());
}

void SpectralGrid::from_grid(const std::vector<cplx>& samples, SpectralField& f) const {
  if (f.Kx() != Kx_ || f.Ky() != Ky_) fail(Errc::invalid_parameter, "grid/field cutoff mismatch");
  for (int c = 0; c < f.n(); ++c)
    from_grid(samples.data() + std::size_t(c) * points(), f.data().data() + std::size_t(c) * f.modes());
}

std::vector<cplx> SpectralGrid::sample(const std::function<cplx(const Vec2&)>& f) const {
  std::vector<cplx> s(points());
  for (int a = 0; a < Gx_; ++a)
    for (int b = 0; b < Gy_; ++b) s[std::size_t(a) * Gy_ + b] = f(point(a, b));
  return s;
}

SpectralField project(const std::function<CVec(const Vec2&)>& f, int n, int Kx, int Ky, double Lx,
                      double Ly) {
  SpectralField out(n, Kx, Ky, Lx, Ly);
  SpectralGrid g(Kx, Ky, Lx, Ly);
  std::vector<cplx> s(std::size_t(n) * g.points());
  for (int a = 0; a < g.Gx(); ++a)
    for (int b = 0; b < g.Gy(); ++b) {
      const CVec v = f(g.point(a, b));
      for (int c = 0; c < n; ++c) s[std::size_t(c) * g.points() + std::size_t(a) * g.Gy() + b] = v[c];
    }
  g.from_grid(s, out);
  return out;
}

}  // namespace tbcont
