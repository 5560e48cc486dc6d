#include "tbcont/models.hpp"

#include "tbcont/error.hpp"

namespace tbcont {

TrigSymbol haldane_trig_symbol(const LatticeGeometry& geom, const HaldaneParams& p, double theta) {
  TrigSymbol a(2);
  const Eigen::Matrix2d R = rotation(theta);
  for (int j = 0; j < 3; ++j) a.add_hermitian_pair(R * geom.a[j], sigma_plus(), p.t1, 0);

  if (!(p.M.is_constant() && p.M.constant_value() == cplx(0.0))) a.add(Vec2::Zero(), pauli(3), p.M, 1);

  if (!(p.t2.is_constant() && p.t2.constant_value() == cplx(0.0))) {
    const CMat PA = (pauli(0) + pauli(3)) / 2.0;
    const CMat PB = (pauli(0) - pauli(3)) / 2.0;
    const cplx e = std::exp(I * p.phi);
    const Field half_t2 = Field(0.5) * p.t2;
    for (int j = 0; j < 3; ++j) {
      const Vec2 b = R * geom.b[j];
      // A sublattice: e^{i phi} tau_{-b} + e^{-i phi} tau_{b}; B sublattice: the reverse.
      a.add(-b, e * PA + std::conj(e) * PB, half_t2, 1);
      a.add(b, std::conj(e) * PA + e * PB, half_t2, 1);
    }
  }
  a.params()["phi"] = p.phi;
  a.params()["theta"] = theta;
  return a;
}

TrigSymbol ssh_trig_symbol(double u, double w, double s, double v) {
  TrigSymbol a(2);
  a.add_hermitian_pair(Vec2(s, 0.0), sigma_plus(), Field(u), 0);
  a.add_hermitian_pair(Vec2(s - v, 0.0), sigma_plus(), Field(w), 0);
  return a;
}

CMat gamma_AB() {
  return kron(sigma_plus(), sigma_minus()) + kron(sigma_minus(), sigma_plus());
}

CMat gamma_BA() {
  return kron(sigma_plus(), sigma_plus()) + kron(sigma_minus(), sigma_minus());
}

CMat omega_pattern(int n) {
  CMat O = CMat::Zero(n, n);
  for (int l = 0; l < n; ++l) O(l, l) = double(-n + 1 + 2 * l);
  return O;
}

TrigSymbol multilayer_trig_symbol(const LatticeGeometry& geom, const MultilayerParams& p) {
  const int n = p.n_layers;
  if (n < 1) fail(Errc::invalid_parameter, "need at least one layer");
  TrigSymbol a(2 * n);
  for (int l = 0; l < n; ++l) {
    CMat E = CMat::Zero(n, n);
    E(l, l) = 1.0;
    for (int j = 0; j < 3; ++j) a.add_hermitian_pair(geom.a[j], kron(E, sigma_plus()), p.t1, 0);
  }
  if (n > 1 && !(p.gate.is_constant() && p.gate.constant_value() == cplx(0.0)))
    a.add(Vec2::Zero(), kron(omega_pattern(n), pauli(0)), p.gate, 1);
  if (n > 1 && !(p.gamma.is_constant() && p.gamma.constant_value() == cplx(0.0))) {
    for (int l = 0; l + 1 < n; ++l) {
      auto embed = [&](const CMat& G) {
        CMat out = CMat::Zero(2 * n, 2 * n);
        out.block(2 * l, 2 * l, 4, 4) = G;
        return out;
      };
      switch (p.stacking) {
        case Stacking::AB: a.add(Vec2::Zero(), embed(gamma_AB()), p.gamma, 1); break;
        case Stacking::BA:
          // BA coupling joins A of the lower layer with B of the upper layer, displaced by a1.
          fail(Errc::unsupported, "BA stacking has no coincident sites in the AB lattice geometry");
        case Stacking::mixture:
          fail(Errc::unsupported, "stacking mixtures exist only at the effective-symbol level");
      }
    }
  }
  return a;
}

}  // namespace tbcont
