#pragma once

#include <vector>

#include "tbcont/symbol.hpp"

namespace tbcont {

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;  // rms of the fit residuals
};

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);
// Least-squares slope of y = s x (no intercept).
double fit_slope_through_origin(const std::vector<double>& x, const std::vector<double>& y);

// f(z) = 2^{-p} sum_{m in I_p} C(p, m) z^m zbar^{p-m}, I_p = {0 <= m <= p : p + m - 1 in 3Z}
cplx haldane_unit_circle_function(int p, cplx z);
double haldane_unit_circle_min(int p, int n_theta = 10000);

struct EllipticityReport {
  int p = 0;
  double margin = 0.0;
  double c = 0.0;  // fitted constant
  double unit_circle_min = 0.0;
};

EllipticityReport ellipticity_check(const PolySymbol& b, int p, const std::vector<double>& delta_grid,
                                    const std::vector<Vec2>& zeta_grid,
                                    const std::vector<Vec2>& X_samples);

struct RemainderScan {
  std::vector<double> delta;
  std::vector<double> r;
  double slope = 0.0;
  double residual = 0.0;
};

RemainderScan remainder_scan(const TrigSymbol& a, const PolySymbol& b, const std::vector<double>& delta_list,
                             const std::vector<Vec2>& zeta_samples, const std::vector<Vec2>& X_samples);

}  // namespace tbcont
