#include "tbcont/diagnostics.hpp"

#include <cmath>
#include <limits>

#include "tbcont/error.hpp"

namespace tbcont {

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  if (n < 2 || y.size() != n) fail(Errc::fit_undetermined, "line fit needs >= 2 matched points");
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= double(n);
  my /= double(n);
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) fail(Errc::fit_undetermined, "degenerate abscissae");
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double ss = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double e = y[i] - (f.intercept + f.slope * x[i]);
    ss += e * e;
  }
  f.residual = std::sqrt(ss / double(n));
  return f;
}

double fit_slope_through_origin(const std::vector<double>& x, const std::vector<double>& y) {
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  if (sxx == 0.0) fail(Errc::fit_undetermined, "no abscissae for slope fit");
  return sxy / sxx;
}

cplx haldane_unit_circle_function(int p, cplx z) {
  if (p < 1) fail(Errc::invalid_order, "p must be >= 1");
  cplx f = 0.0;
  double binom = 1.0;
  for (int m = 0; m <= p; ++m) {
    if (m > 0) binom = binom * double(p - m + 1) / double(m);
    if ((p + m - 1) % 3 == 0) f += binom * ipow(z, m) * ipow(std::conj(z), p - m);
  }
  return f / ipow(2.0, p);
}

double haldane_unit_circle_min(int p, int n_theta) {
  double mn = std::numeric_limits<double>::infinity();
  for (int k = 0; k < n_theta; ++k) {
    const double th = 2 * pi * k / n_theta;
    mn = std::min(mn, std::abs(haldane_unit_circle_function(p, std::polar(1.0, th))));
  }
  return mn;
}

EllipticityReport ellipticity_check(const PolySymbol& b, int p, const std::vector<double>& delta_grid,
                                    const std::vector<Vec2>& zeta_grid,
                                    const std::vector<Vec2>& X_samples) {
  if (delta_grid.empty() || zeta_grid.empty() || X_samples.empty())
    fail(Errc::invalid_parameter, "ellipticity grids must be non-empty");
  struct Sample {
    double D, y;
  };
  std::vector<Sample> samples;
  const int n = b.n();
  for (double d : delta_grid)
    for (const auto& z : zeta_grid)
      for (const auto& X : X_samples) {
        const CMat m = d * b.eval(X, z, d);
        const double D = std::pow(std::abs(m.determinant()), 1.0 / n);
        samples.push_back({D, std::pow(japanese(d * z), p)});
      }
  // largest c with c y - 1/c <= D for all samples: c <= (D + sqrt(D^2 + 4 y)) / (2 y)
  double c = std::numeric_limits<double>::infinity();
  for (const auto& s : samples) c = std::min(c, (s.D + std::sqrt(s.D * s.D + 4 * s.y)) / (2 * s.y));
  double margin = std::numeric_limits<double>::infinity();
  for (const auto& s : samples) margin = std::min(margin, s.D - (c * s.y - 1.0 / c));
  EllipticityReport r;
  r.p = p;
  r.c = c;
  r.margin = margin;
  r.unit_circle_min = haldane_unit_circle_min(p);
  return r;
}

RemainderScan remainder_scan(const TrigSymbol& a, const PolySymbol& b, const std::vector<double>& delta_list,
                             const std::vector<Vec2>& zeta_samples, const std::vector<Vec2>& X_samples) {
  if (delta_list.size() < 3) fail(Errc::fit_undetermined, "remainder scan needs >= 3 delta values");
  RemainderScan out;
  const int p = b.p();
  const CMat E = b.E() * CMat::Identity(a.n(), a.n());
  for (double d : delta_list) {
    double r = 0.0;
    for (const auto& X : X_samples)
      for (const auto& z : zeta_samples) {
        const CMat diff = a.eval(X, b.K() + d * z, d) - E - d * b.eval(X, z, d);
        r = std::max(r, diff.norm() / std::pow(japanese(z), p + 1));
      }
    out.delta.push_back(d);
    out.r.push_back(r);
  }
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < out.delta.size(); ++i) {
    if (out.r[i] <= 0.0) continue;
    lx.push_back(std::log(out.delta[i]));
    ly.push_back(std::log(out.r[i]));
  }
  if (lx.size() >= 2) {
    const LineFit f = fit_line(lx, ly);
    out.slope = f.slope;
    out.residual = f.residual;
  } else {
    out.slope = std::numeric_limits<double>::infinity();  // exact expansion, r == 0
  }
  return out;
}

}  // namespace tbcont
