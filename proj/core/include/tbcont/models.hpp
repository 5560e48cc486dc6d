#pragma once

#include "tbcont/field.hpp"
#include "tbcont/lattice.hpp"
#include "tbcont/symbol.hpp"

namespace tbcont {

struct HaldaneParams {
  Field t1 = Field(1.0);
  Field t2 = Field(0.0);
  Field M = Field(0.0);
  double phi = pi / 2;
};

// a(X, xi; delta) = a0 + delta a1 for the Haldane model, twisted by theta.
TrigSymbol haldane_trig_symbol(const LatticeGeometry& geom, const HaldaneParams& params,
                               double theta = 0.0);

// One-dimensional SSH chain embedded along e_x: (u e^{i s xi} + w e^{i (s - v) xi}) sigma_+ + h.c.
TrigSymbol ssh_trig_symbol(double u, double w, double s, double v);

enum class Stacking { AB, BA, mixture };

// Interlayer block for a pair of adjacent layers in layer (x) sublattice ordering.
CMat gamma_AB();
CMat gamma_BA();

struct MultilayerParams {
  int n_layers = 2;
  Field t1 = Field(1.0);
  // Gate and coupling in units that carry one power of delta: on-site energy delta * gate(X).
  Field gate = Field(0.0);
  Field gamma = Field(0.0);
  Stacking stacking = Stacking::AB;
  Field chi = Field(1.0);  // weight of Gamma_AB when stacking == mixture
};

// Omega_n = Diag(-(n-1), -(n-3), ..., n-1); multiply by the gate field for the on-site potential.
CMat omega_pattern(int n);

// Tight-binding symbol of a gated multilayer: nearest-neighbour hopping in every layer,
// delta * gate * Omega_n (x) I_2 and delta * gamma * Gamma between adjacent layers.
TrigSymbol multilayer_trig_symbol(const LatticeGeometry& geom, const MultilayerParams& params);

}  // namespace tbcont
