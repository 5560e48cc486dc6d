#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tbcont/harness.hpp"
#include "tbcont/lattice.hpp"
#include "tbcont/spectral.hpp"
#include "tbcont/symbol.hpp"

namespace tbcont {

struct Packet {
  SpectralField phi;  // normalized in L2
  CVec lattice;       // normalized in l2 (empty if no cell was supplied)
  nlohmann::json metadata;
};

// phi0(X) = c exp(-|X - center|^2 / (2 sigma^2)), normalized.
SpectralField gaussian_field(double sigma, const CVec& c, const Vec2& center, int Kx, int Ky, double Lx,
                             double Ly);
Packet gaussian_packet(double sigma, const CVec& c, const Vec2& center, const SupercellIndex& cell,
                       const LiftConfig& lift, int Kx, int Ky);
// Complex normal amplitudes from a seeded generator.
CVec random_amplitudes(int n, std::uint64_t seed);

// One-dimensional straight-interface problem: zeta1 -> k1, zeta2 -> D2 on a periodic strip of
// height Ly with Fourier modes |l| <= Ky. Coefficient fields must depend on X2 only.
class EdgeProblem {
 public:
  EdgeProblem(const PolySymbol& b, int Ky, double Ly);
  int dim() const { return n_ * (2 * Ky_ + 1); }
  int n() const { return n_; }
  int Ky() const { return Ky_; }
  double Ly() const { return Ly_; }
  CMat matrix(double k1) const;
  // sorted eigenvalues, eigenvectors as columns (basis [component][l]);
  // count > 0 keeps only the count eigenpairs around the middle of the spectrum
  std::pair<Eigen::VectorXd, CMat> solve(double k1, int count = 0) const;
  // profile u(X2) of an eigenvector
  CVec profile(const CVec& u, double X2) const;
  // bulk gap: min |E| of the symbol at X2 = Ly/4 over a zeta grid
  double bulk_gap() const;

 private:
  int n_, Ky_;
  double Ly_;
  double delta_;
  struct Term {
    int a1, a2;
    CMat matrix;
    std::vector<cplx> chat;  // Fourier coefficients c_q, |q| <= 2 Ky
  };
  std::vector<Term> terms_;
  PolySymbol b_;
};

struct EdgeSpectrum {
  std::vector<double> k1;
  std::vector<Eigen::VectorXd> E;  // sorted per k1
  std::vector<CMat> vecs;          // eigenvectors per k1
  // tracked[b][i]: eigen index of tracked band b at k1[i] (bands nearest E = 0, matched by overlap)
  std::vector<std::vector<int>> tracked;
  std::vector<std::vector<double>> overlap;  // |<u_b(k_i), u_b(k_{i+1})>|
  double bulk_gap = 0.0;
  int n = 4, Ky = 0;
  double Ly = 0.0;

  double band_energy(int b, int i) const { return E[i][tracked[b][i]]; }
  CVec band_vector(int b, int i) const { return vecs[i].col(tracked[b][i]); }
  void write_csv(const std::string& path) const;
};

// Weight of an eigenvector within |X2| < Ly/8 of the interface at X2 = 0.
double interface_weight(const EdgeProblem& prob, const CVec& u);
// max |u(X2)| over |X2| = Ly/4 relative to max |u|.
double leakage(const EdgeProblem& prob, const CVec& u);

// Tracking starts at the momentum with the most in-gap states and runs outward. The leakage check
// covers states with |E| < half the bulk gap; a negative tolerance disables it.
EdgeSpectrum edge_band_structure(const EdgeProblem& prob, const std::vector<double>& k1_grid,
                                 int n_track = 8, double leakage_tol = 1e-8);

// Maximum-weight assignment: result[i] = column assigned to row i.
std::vector<int> hungarian_max(const Eigen::MatrixXd& w);

struct EdgeWindow {
  int band = 0;  // tracked band
  double k_lo = 0.0, k_hi = 0.0;
};

struct EdgeWindows {
  std::optional<EdgeWindow> fast, slow;
  double fast_velocity = 0.0, slow_velocity = 0.0;
};

// Steepest and flattest in-gap segments of bands localized at the X2 = 0 interface.
EdgeWindows default_edge_windows(const EdgeProblem& prob, const EdgeSpectrum& spec, double width);

struct Placement {
  Vec2 center = Vec2::Zero();  // where the interface point X2 = 0, X1 = 0 of the strip is placed
};

struct EdgePacketOptions {
  double envelope_sigma = 0.0;  // Gaussian width in k1, default quarter window
  int Kx = 64, Ky = 64;
  double Lx = 1.0, Ly = 1.0;  // continuum box
};

Packet synthesize_edge_packet(const EdgeProblem& prob, const EdgeSpectrum& spec, const EdgeWindow& window,
                              const Placement& placement, const EdgePacketOptions& opts,
                              const SupercellIndex* cell = nullptr, const LiftConfig* lift = nullptr);

// Bilayer effective symbol of order p on a periodic strip of height Ly with two gate interfaces
// (gate amplitude omega_hat, wall width `width`, coupling gamma_hat, macroscopic units).
PolySymbol bilayer_strip_symbol(const LatticeGeometry& geom, double omega_hat, double gamma_hat, double width,
                                double Ly, int p, double delta);

}  // namespace tbcont
