#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "tbcont/harness.hpp"
#include "tbcont/lattice.hpp"
#include "tbcont/symbol.hpp"
#include "tbcont/tbsim.hpp"
#include "tbcont/wavepackets.hpp"

namespace tbcont {

struct ModelConfig {
  std::string family = "bilayer";  // bilayer | haldane
  double v = 1.0;
  double delta = 0.01;
  double omega = 0.25;
  double gamma = 0.121;
  std::string stacking = "AB";
  int order = 1;
  MassProfile mass = MassProfile::racetrack(500.0, 300.0);
  double t1 = 1.0, t2 = 0.0, M = 0.0, phi = pi / 2;  // haldane
};

struct DomainConfig {
  // Microscopic box; the cell counts are derived unless given explicitly.
  double box_x = 577.0 * std::sqrt(3.0), box_y = 500.0;
  int Lx = -1, Ly = -1;
  int Kx = 128, Ky = 128;
};

struct IntegratorConfig {
  double h_tb = 0.125;
  double h_c = 0.5;  // microscopic time units
  double T = 100.0;
  double snapshot_every = 10.0;
};

struct PacketConfig {
  std::string kind = "gaussian";  // gaussian | edge
  double sigma = 20.0;            // microscopic
  Vec2 center = Vec2::Zero();     // microscopic
  std::vector<cplx> amplitudes;   // empty: seeded random
  // edge packets (strip quantities in macroscopic units)
  std::string window = "fast";  // fast | slow | explicit
  int band = 0;
  double k_lo = 0.0, k_hi = 0.0;
  double window_width = 0.0;  // default: 10 box momenta, at most k_extent / 2
  double envelope_sigma = 0.0;
  double strip_Ly = 0.0;  // default: 64 gate wall widths
  int strip_Ky = 0;       // default: 4 Ly / wall width
  int k_points = 81;
  double k_extent = 0.0;  // k1 grid half-width, default 2 / wall width
};

struct OutputConfig {
  std::string directory = "out";
  bool checkpoints = true;
};

struct ScanConfig {
  std::vector<int> p_list{1, 2};
  std::vector<double> delta_list{0.04, 0.02, 0.01};
  double omega_hat = 1.0, gamma_hat = 0.5;
  double box_X = 6.0, box_Y = 6.0, sigma = 0.5;
  int Kx = 32, Ky = 32;
  int substeps = 20;
  double T_factor = 1.0;
  int n_samples = 10;
  bool control_run = false;
};

struct RunConfig {
  ModelConfig model;
  DomainConfig domain;
  IntegratorConfig integrator;
  PacketConfig packet;
  OutputConfig output;
  ScanConfig scan;
  std::uint64_t seed = 1234;

  // Schema errors carry the JSON path of the offending entry.
  static RunConfig from_json(const nlohmann::json& j);
  static RunConfig load(const std::string& path);
  nlohmann::json to_json() const;  // resolved config including every default
};

// Model assembly shared by the CLI and the tests.
SupercellIndex build_cell(const RunConfig& cfg);
TrigSymbol build_trig_symbol(const RunConfig& cfg, const LatticeGeometry& geom);
PolySymbol build_effective(const RunConfig& cfg, const LatticeGeometry& geom, int p);
LiftConfig build_lift(const RunConfig& cfg, const LatticeGeometry& geom);

struct EdgeSetup {
  PolySymbol strip_symbol;
  EdgeProblem problem;
  EdgeSpectrum spectrum;
  EdgeWindows windows;
};
EdgeSetup build_edge_setup(const RunConfig& cfg, const LatticeGeometry& geom);

Packet build_packet(const RunConfig& cfg, const SupercellIndex& cell);

}  // namespace tbcont
