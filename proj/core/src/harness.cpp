#include "tbcont/harness.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <unordered_map>

#include "tbcont/diagnostics.hpp"
#include "tbcont/effective.hpp"
#include "tbcont/error.hpp"
#include "tbcont/models.hpp"
#include "tbcont/spline.hpp"
#include "tbcont/wavepackets.hpp"

namespace tbcont {

Vec2 macro_box(const SupercellIndex& cell, double delta) { return delta * cell.box(); }

namespace {

void check_box(const SpectralField& phi, const SupercellIndex& cell, double delta) {
  const Vec2 box = macro_box(cell, delta);
  if (std::abs(box.x() - phi.Lx()) > 1e-9 * box.x() || std::abs(box.y() - phi.Ly()) > 1e-9 * box.y())
    fail(Errc::config, "continuum box (" + std::to_string(phi.Lx()) + ", " + std::to_string(phi.Ly()) +
                           ") does not match the scaled supercell (" + std::to_string(box.x()) + ", " +
                           std::to_string(box.y()) + ")");
  if (phi.n() < cell.n_orbitals())
    fail(Errc::config, "continuum field has fewer components than lattice orbitals");
}

// Index of distinct values (keyed at 1e-10 relative resolution).
struct UniqueCoords {
  std::vector<double> values;
  std::vector<int> of_site;
};

UniqueCoords unique_coords(const std::vector<Vec2>& X, int axis, double scale) {
  UniqueCoords u;
  u.of_site.resize(X.size());
  std::unordered_map<long long, int> key;
  for (std::size_t s = 0; s < X.size(); ++s) {
    const double x = X[s][axis];
    const long long k = std::llround(x / scale * 1e10);
    auto it = key.find(k);
    if (it == key.end()) {
      it = key.emplace(k, int(u.values.size())).first;
      u.values.push_back(x);
    }
    u.of_site[s] = it->second;
  }
  return u;
}

}  // namespace

CVec lift_to_lattice(const SpectralField& phi, const SupercellIndex& cell, const LiftConfig& cfg, double t) {
  check_box(phi, cell, cfg.delta);
  const std::size_t N = cell.size();
  const double d = cfg.delta;
  std::vector<Vec2> X(N);
  for (std::size_t s = 0; s < N; ++s) X[s] = d * cell.wrap(cell.position(s));
  // delta^{d/2} with d = 2
  const double amp = d;
  CVec out(static_cast<Eigen::Index>(N));

  if (cfg.method == LiftMethod::exact) {
    const UniqueCoords ux = unique_coords(X, 0, phi.Lx());
    const UniqueCoords uy = unique_coords(X, 1, phi.Ly());
    const int Nx = phi.Nx(), Ny = phi.Ny(), Kx = phi.Kx(), Ky = phi.Ky();
    const std::size_t nX = ux.values.size(), nY = uy.values.size();
    Eigen::MatrixXcd ex(nX, Nx), ey(Ny, nY);
    for (std::size_t a = 0; a < nX; ++a)
      for (int k = -Kx; k <= Kx; ++k) ex(a, k + Kx) = std::polar(1.0, 2 * pi * k * ux.values[a] / phi.Lx());
    for (int l = -Ky; l <= Ky; ++l)
      for (std::size_t b = 0; b < nY; ++b) ey(l + Ky, b) = std::polar(1.0, 2 * pi * l * uy.values[b] / phi.Ly());
    const int n_orb = cell.n_orbitals();
    std::vector<Eigen::MatrixXcd> P(n_orb);
    for (int c = 0; c < n_orb; ++c) {
      Eigen::Map<const Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> coef(
          phi.data().data() + phi.index(c, -Kx, -Ky), Nx, Ny);
      P[c] = coef * ey;  // Nx x nY
    }
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t s = 0; s < std::ptrdiff_t(N); ++s) {
      const int c = cell.site(std::size_t(s)).orbital();
      const int a = ux.of_site[s], b = uy.of_site[s];
      cplx v = 0.0;
      for (int k = 0; k < Nx; ++k) v += ex(a, k) * P[c](k, b);
      out[s] = v;
    }
  } else {
    const int over = std::max(1, cfg.spline_oversample);
    SpectralGrid grid(phi.Kx(), phi.Ky(), phi.Lx(), phi.Ly(), over * 3 * (phi.Kx() + 1),
                      over * 3 * (phi.Ky() + 1));
    std::vector<cplx> samples(grid.points());
    std::vector<CubicSpline2D> splines;
    for (int c = 0; c < cell.n_orbitals(); ++c) {
      grid.to_grid(phi.data().data() + phi.index(c, -phi.Kx(), -phi.Ky()), samples.data());
      splines.emplace_back(samples.data(), grid.Gx(), grid.Gy(), phi.Lx(), phi.Ly());
    }
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t s = 0; s < std::ptrdiff_t(N); ++s)
      out[s] = splines[cell.site(std::size_t(s)).orbital()](X[s]);
  }

  const Vec2& K = cfg.K;
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t s = 0; s < std::ptrdiff_t(N); ++s) {
    const Vec2& x = cell.position(std::size_t(s));
    out[s] *= amp * std::polar(1.0, K.dot(x) - cfg.E_ref * t);
  }
  return out;
}

void ErrorSeries::write_csv(const std::string& path) const {
  std::ofstream f(path);
  if (!f) fail(Errc::config, "cannot write " + path);
  f << "t,E\n" << std::setprecision(17);
  for (std::size_t i = 0; i < times.size(); ++i) f << times[i] << ',' << E[i] << '\n';
}

ErrorTracker::ErrorTracker(const SupercellIndex& cell, const LiftConfig& cfg, const ContinuumTrajectory& cont)
    : cell_(cell), cfg_(cfg), cont_(cont) {
  if (cont.states.size() != cont.times.size())
    fail(Errc::precondition, "continuum trajectory must store its states");
  series_.metadata["delta"] = cfg.delta;
  series_.metadata["lift"] = cfg.method == LiftMethod::exact ? "exact" : "spline";
}

void ErrorTracker::operator()(double t, const CVec& psi) {
  const std::size_t i = series_.times.size();
  if (i >= cont_.times.size()) fail(Errc::resample, "more lattice samples than continuum samples");
  const double tc = cont_.times[i] / cfg_.delta;
  if (std::abs(tc - t) > 1e-9 * std::max(1.0, std::abs(t)))
    fail(Errc::resample, "sample time mismatch: lattice t = " + std::to_string(t) +
                             ", continuum t = " + std::to_string(tc));
  const CVec lift = lift_to_lattice(cont_.states[i], cell_, cfg_, t);
  if (i == 0) {
    tb_norm0_ = psi.norm();
    lift_norm0_ = lift.norm();
    if (!(tb_norm0_ > 0) || !(lift_norm0_ > 0)) fail(Errc::precondition, "zero initial state");
  }
  series_.times.push_back(t);
  series_.E.push_back((psi / tb_norm0_ - lift / lift_norm0_).norm());
}

ErrorSeries error_series(const TbTrajectory& tb, const ContinuumTrajectory& cont, const SupercellIndex& cell,
                         const LiftConfig& cfg) {
  if (tb.states.size() != tb.times.size()) fail(Errc::precondition, "lattice trajectory must store states");
  if (tb.times.size() != cont.times.size())
    fail(Errc::resample, "trajectories have different numbers of samples");
  ErrorTracker tr(cell, cfg, cont);
  for (std::size_t i = 0; i < tb.times.size(); ++i) tr(tb.times[i], tb.states[i]);
  return tr.series();
}

SupercellIndex scan_cell(double delta, double v, double box_X, double box_Y) {
  if (!(delta > 0) || !(box_X > 0) || !(box_Y > 0)) fail(Errc::invalid_parameter, "bad scan cell parameters");
  const LatticeGeometry g = honeycomb_geometry(v);
  // rectangular periods (2Lx+1) sqrt3 v and (2Ly+1) v
  const int Lx = std::max(1, int(std::lround((box_X / (delta * std::sqrt(3.0) * v) - 1) / 2)));
  int ny = int(std::lround(box_Y / (delta * v)));
  // odd and divisible by 3
  ny = std::max(3, 3 * int(std::lround(ny / 3.0)));
  if (ny % 2 == 0) ny += 3;
  const int Ly = (ny - 1) / 2;
  return SupercellIndex(g, Lx, Ly, 2, CellKind::rectangular);
}

void ScanResult::write_csv(const std::string& fits_path, const std::string& exponents_path) const {
  {
    std::ofstream f(fits_path);
    if (!f) fail(Errc::config, "cannot write " + fits_path);
    f << "p,delta,slope,control_change\n" << std::setprecision(17);
    for (const auto& r : runs) f << r.p << ',' << r.delta << ',' << r.slope << ',' << r.control_change << '\n';
  }
  std::ofstream f(exponents_path);
  if (!f) fail(Errc::config, "cannot write " + exponents_path);
  f << "p,q,residual,flagged\n" << std::setprecision(17);
  for (const auto& fit : fits) f << fit.p << ',' << fit.q << ',' << fit.residual << ',' << int(fit.flagged) << '\n';
}

namespace {

struct ScanTimes {
  double dt;  // microscopic sampling interval, multiple of h_tb
  std::vector<double> tb;
  std::vector<double> macro;
};

ScanTimes scan_times(double delta, double T_factor, int n_samples, double h_tb) {
  ScanTimes st;
  const double window = T_factor / delta;
  const double m = std::max(1.0, std::round(window / (n_samples * h_tb)));
  st.dt = m * h_tb;
  for (int i = 0; i <= n_samples; ++i) {
    st.tb.push_back(i * st.dt);
    st.macro.push_back(delta * i * st.dt);
  }
  return st;
}

std::vector<ErrorSeries> run_delta(const BilayerScanSpec& spec, const std::vector<int>& p_list, double delta,
                                   double h_tb, int substeps, const SupercellIndex& cell) {
  const LatticeGeometry& geom = cell.geometry();
  const Vec2 box = macro_box(cell, delta);
  MultilayerParams mp;
  mp.n_layers = 2;
  mp.gate = spec.omega_hat * spec.gate_profile(box);
  mp.gamma = Field(spec.gamma_hat);
  const TrigSymbol a = multilayer_trig_symbol(geom, mp);

  const SpectralField phi0 =
      gaussian_field(spec.sigma, spec.amplitudes, spec.center, spec.Kx, spec.Ky, box.x(), box.y());
  const ScanTimes st = scan_times(delta, spec.T_factor, spec.n_samples, h_tb);
  const double hc = delta * st.dt / substeps;

  LiftConfig lc;
  lc.K = geom.K;
  lc.delta = delta;
  lc.method = spec.lift;

  std::vector<ContinuumTrajectory> cont;
  for (int p : p_list) {
    PolySymbol b = taylor_effective(a, geom.K, 0.0, p);
    b.set_delta(delta);
    ContinuumOptions co;
    co.sample_times = st.macro;
    // sample times are multiples of hc up to rounding
    for (std::size_t i = 0; i < co.sample_times.size(); ++i) co.sample_times[i] = double(i * substeps) * hc;
    cont.push_back(propagate_continuum(b, phi0, hc, co.sample_times.back(), co));
  }

  const SparseHamiltonian H = assemble(a, cell, delta);
  const CVec psi0 = lift_to_lattice(phi0, cell, lc, 0.0);
  std::vector<ErrorTracker> trackers;
  trackers.reserve(cont.size());
  for (const auto& c : cont) trackers.emplace_back(cell, lc, c);
  Rk4Options ro;
  ro.sample_times = st.tb;
  ro.store_states = false;
  ro.observer = [&](double t, const CVec& psi) {
    for (auto& tr : trackers) tr(t, psi);
  };
  rk4_propagate(H, psi0, h_tb, st.tb.back(), ro);

  std::vector<ErrorSeries> out;
  for (std::size_t i = 0; i < p_list.size(); ++i) {
    ErrorSeries s = trackers[i].series();
    s.metadata["p"] = p_list[i];
    s.metadata["h_tb"] = h_tb;
    s.metadata["h_c_macro"] = hc;
    s.metadata["Kx"] = spec.Kx;
    s.metadata["Ky"] = spec.Ky;
    s.metadata["sites"] = cell.size();
    s.metadata["box"] = {box.x(), box.y()};
    s.metadata["packet"] = "gaussian";
    out.push_back(std::move(s));
  }
  return out;
}

double series_slope(const ErrorSeries& s) {
  std::vector<double> t, e;
  for (std::size_t i = 0; i < s.times.size(); ++i) {
    t.push_back(s.times[i]);
    e.push_back(s.E[i] - s.E[0]);
  }
  return fit_slope_through_origin(t, e);
}

}  // namespace

ScanResult convergence_scan(const BilayerScanSpec& spec, const std::vector<int>& p_list,
                            const std::vector<double>& delta_list,
                            const std::function<void(const std::string&)>& log) {
  if (delta_list.size() < 3) fail(Errc::fit_undetermined, "a scaling fit needs at least three delta values");
  if (p_list.empty()) fail(Errc::invalid_parameter, "empty order list");
  ScanResult res;
  std::map<int, ScalingFit> fits;
  for (double delta : delta_list) {
    const SupercellIndex cell = scan_cell(delta, spec.v, spec.box_X, spec.box_Y);
    if (log) log("delta = " + std::to_string(delta) + ": " + std::to_string(cell.size()) + " sites");
    const auto series = run_delta(spec, p_list, delta, spec.h_tb, spec.continuum_substeps, cell);
    std::vector<ErrorSeries> control;
    if (spec.control_run) control = run_delta(spec, p_list, delta, spec.h_tb / 2, 2 * spec.continuum_substeps, cell);
    for (std::size_t i = 0; i < p_list.size(); ++i) {
      ScanRun r;
      r.p = p_list[i];
      r.delta = delta;
      r.series = series[i];
      r.slope = series_slope(r.series);
      if (spec.control_run) {
        for (std::size_t j = 1; j < r.series.E.size(); ++j)
          r.control_change = std::max(r.control_change, std::abs(control[i].E[j] - r.series.E[j]) /
                                                            std::max(r.series.E[j], 1e-300));
      }
      if (log)
        log("  p = " + std::to_string(r.p) + ": slope " + std::to_string(r.slope) +
            (spec.control_run ? ", control change " + std::to_string(r.control_change) : ""));
      auto& fit = fits[r.p];
      fit.p = r.p;
      fit.delta.push_back(delta);
      fit.slope.push_back(r.slope);
      if (r.control_change > 0.05) fit.flagged = true;
      res.runs.push_back(std::move(r));
    }
  }
  for (auto& [p, fit] : fits) {
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < fit.delta.size(); ++i) {
      lx.push_back(std::log(fit.delta[i]));
      ly.push_back(std::log(std::max(fit.slope[i], 1e-300)));
    }
    const LineFit lf = fit_line(lx, ly);
    fit.q = lf.slope;
    fit.residual = lf.residual;
    res.fits.push_back(fit);
  }
  return res;
}

}  // namespace tbcont
