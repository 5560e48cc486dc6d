#pragma once

#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "tbcont/continuum.hpp"
#include "tbcont/lattice.hpp"
#include "tbcont/spectral.hpp"
#include "tbcont/tbsim.hpp"

namespace tbcont {

enum class LiftMethod {
  spline,  // Fourier interpolation to the dealiasing grid, then cubic B-splines
  exact,   // separable evaluation of the truncated Fourier series at the sites
};

struct LiftConfig {
  Vec2 K = Vec2::Zero();
  double E_ref = 0.0;
  double delta = 0.01;
  LiftMethod method = LiftMethod::spline;
  int spline_oversample = 1;  // spline grid = oversample * 3(K+1)
};

// psi(x) = exp(i (K.x - E t)) delta^{d/2} phi_{orbital}(delta x), orbital = 2 layer + sublattice.
CVec lift_to_lattice(const SpectralField& phi, const SupercellIndex& cell, const LiftConfig& cfg, double t);

// Continuum box matching the supercell torus in macroscopic units.
Vec2 macro_box(const SupercellIndex& cell, double delta);

struct ErrorSeries {
  std::vector<double> times;  // microscopic
  std::vector<double> E;
  nlohmann::json metadata;
  void write_csv(const std::string& path) const;
};

// Both trajectories sampled at common times (tb in microscopic time t, continuum in T = delta t).
ErrorSeries error_series(const TbTrajectory& tb, const ContinuumTrajectory& cont, const SupercellIndex& cell,
                         const LiftConfig& cfg);

// Streaming variant: feeds on tight-binding snapshots while the continuum states are held.
class ErrorTracker {
 public:
  ErrorTracker(const SupercellIndex& cell, const LiftConfig& cfg, const ContinuumTrajectory& cont);
  void operator()(double t, const CVec& psi);
  const ErrorSeries& series() const { return series_; }

 private:
  const SupercellIndex& cell_;
  LiftConfig cfg_;
  const ContinuumTrajectory& cont_;
  double tb_norm0_ = 0.0, lift_norm0_ = 0.0;
  ErrorSeries series_;
};

// Convergence scan for the gated bilayer with a Gaussian packet.
struct BilayerScanSpec {
  double v = 1.0;
  double omega_hat = 1.0;  // macroscopic gate amplitude (omega / delta)
  double gamma_hat = 0.5;  // macroscopic interlayer coupling (gamma / delta)
  // m(X) in macroscopic variables, built for the actual box of each delta
  std::function<Field(const Vec2& box)> gate_profile = [](const Vec2&) { return Field(1.0); };
  double box_X = 6.0, box_Y = 6.0;  // requested macroscopic box
  double sigma = 0.5;               // packet width in X
  Vec2 center = Vec2::Zero();
  CVec amplitudes = CVec::Ones(4);
  int Kx = 32, Ky = 32;
  double h_tb = 0.125;
  int continuum_substeps = 20;  // continuum steps per sampling interval
  double T_factor = 1.0;        // window t <= T_factor / delta
  int n_samples = 10;
  LiftMethod lift = LiftMethod::exact;
  bool control_run = false;  // repeat with halved steps to detect integration error
};

struct ScanRun {
  int p = 0;
  double delta = 0.0;
  ErrorSeries series;
  double slope = 0.0;  // least-squares dE/dt through the origin over the window
  double control_change = 0.0;
};

struct ScalingFit {
  int p = 0;
  std::vector<double> delta;
  std::vector<double> slope;
  double q = 0.0;
  double residual = 0.0;
  bool flagged = false;
};

struct ScanResult {
  std::vector<ScanRun> runs;
  std::vector<ScalingFit> fits;
  void write_csv(const std::string& fits_path, const std::string& exponents_path) const;
};

// Rectangular two-layer cell whose torus approximates the requested macroscopic box,
// with 2Ly + 1 divisible by 3 so the carrier exp(i K.x) is periodic.
SupercellIndex scan_cell(double delta, double v, double box_X, double box_Y);

ScanResult convergence_scan(const BilayerScanSpec& spec, const std::vector<int>& p_list,
                            const std::vector<double>& delta_list,
                            const std::function<void(const std::string&)>& log = {});

}  // namespace tbcont
