#pragma once

#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "tbcont/field.hpp"
#include "tbcont/lattice.hpp"
#include "tbcont/models.hpp"
#include "tbcont/sparse.hpp"
#include "tbcont/symbol.hpp"

namespace tbcont {

struct MassProfile {
  enum class Kind { racetrack, circle, straight, uniform };
  Kind kind = Kind::racetrack;
  double ell = 0.0;  // straight length, microscopic units
  double w = 0.0;    // width, microscopic units

  static MassProfile racetrack(double ell, double w) { return {Kind::racetrack, ell, w}; }
  static MassProfile circle(double w) { return {Kind::circle, 0.0, w}; }
  static MassProfile straight() { return {Kind::straight, 0.0, 0.0}; }
  static MassProfile uniform() { return {Kind::uniform, 0.0, 0.0}; }

  // m((delta / omega) x) written as a field of the macroscopic variable X = delta x.
  Field macro_field(double delta, double omega) const;
  // Evaluate at a microscopic position.
  double operator()(const Vec2& x, double delta, double omega) const;
  std::string id() const;
  nlohmann::json to_json() const;
};

// Generic Weyl-midpoint assembly: term c(X) delta^k M e^{i v.xi} becomes
// c(delta (x + v/2)) delta^k M tau_v on the supercell, positions wrapped periodically.
SparseHamiltonian assemble(const TrigSymbol& a, const SupercellIndex& cell, double delta);

SparseHamiltonian assemble_bilayer(const SupercellIndex& cell, double delta, double omega, double gamma,
                                   const MassProfile& mass);

SparseHamiltonian assemble_haldane(const SupercellIndex& cell, double delta, const HaldaneParams& params);

struct TbTrajectory {
  std::vector<double> times;
  std::vector<CVec> states;  // empty when not stored
  std::vector<double> norms;
  double norm0 = 0.0;
  double max_norm_drift = 0.0;
  std::size_t steps = 0;
};

struct Rk4Options {
  std::vector<double> sample_times;  // must be integer multiples of h
  bool store_states = true;
  std::function<void(double, const CVec&)> observer;
};

// Integrates i d_t psi = H psi with classical RK4.
TbTrajectory rk4_propagate(const SparseHamiltonian& H, const CVec& psi0, double h, double T,
                           const Rk4Options& opts = {});

// Binary checkpoint records {time f64, psi interleaved re/im f64}.
void append_checkpoint(const std::string& path, double t, const CVec& psi);
std::vector<std::pair<double, CVec>> read_checkpoints(const std::string& path, std::size_t dim);
void write_sidecar(const std::string& path, const nlohmann::json& j);

// Multiples of h matched within a relative tolerance; throws resample error otherwise.
std::vector<std::size_t> sample_steps(const std::vector<double>& times, double h, double T);

}  // namespace tbcont
