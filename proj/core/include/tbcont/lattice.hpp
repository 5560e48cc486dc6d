#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <vector>

#include <json.hpp>

#include "tbcont/common.hpp"

namespace tbcont {

struct LatticeGeometry {
  double v = 1.0;
  Vec2 v1, v2;
  std::array<Vec2, 3> a;  // nearest-neighbour bonds
  std::array<Vec2, 3> b;  // next-nearest bonds
  Vec2 K, Kp;
  Vec2 w1, w2;  // reciprocal basis, w_i . v_j = 2 pi delta_ij
};

LatticeGeometry honeycomb_geometry(double v);
nlohmann::json to_json(const LatticeGeometry& g);

enum class CellKind {
  hexagonal,    // 2 sites per layer, periods (2Lx+1) v1 and (2Ly+1) v2
  rectangular,  // augmented 4-site cell spanned by u1 = v1 + v2, u2 = v1 - v2
};

struct SiteInfo {
  int m = 0, n = 0;  // supercell cell indices in [-Lx, Lx] x [-Ly, Ly]
  int sub = 0;       // augmented sub-cell (0: origin, 1: origin + v1); always 0 for hexagonal cells
  int layer = 0;
  int sublattice = 0;  // 0 = A, 1 = B
  long hex_i = 0, hex_j = 0;  // Bravais coordinates R = hex_i v1 + hex_j v2
  int orbital() const { return 2 * layer + sublattice; }
};

class SupercellIndex {
 public:
  SupercellIndex(const LatticeGeometry& geom, int Lx, int Ly, int n_layers,
                 CellKind kind = CellKind::rectangular, std::size_t max_sites = std::size_t(1) << 26);

  const LatticeGeometry& geometry() const { return geom_; }
  int Lx() const { return Lx_; }
  int Ly() const { return Ly_; }
  int n_layers() const { return n_layers_; }
  int n_orbitals() const { return 2 * n_layers_; }
  CellKind kind() const { return kind_; }
  std::size_t size() const { return info_.size(); }

  std::size_t index(int m, int n, int sub, int layer, int sublattice) const;
  // Physical lookup by Bravais coordinates (wrapped periodically).
  std::size_t index_of(long hex_i, long hex_j, int orbital) const;

  const SiteInfo& site(std::size_t idx) const { return info_[idx]; }
  const Vec2& position(std::size_t idx) const { return pos_[idx]; }
  const std::vector<Vec2>& positions() const { return pos_; }

  Vec2 orbital_offset(int orbital) const;
  // Period vectors of the torus (columns).
  const Eigen::Matrix2d& periods() const { return periods_; }
  // Side lengths of the rectangular torus; throws for hexagonal cells.
  Vec2 box() const;
  // Reduce a position to the fundamental domain centred at the origin.
  Vec2 wrap(const Vec2& x) const;

  // Bravais offset (di, dj) such that the site (R, from) displaced by shift lands on
  // (R + di v1 + dj v2, to); empty if the displacement does not end on a site of that orbital.
  std::optional<std::array<long, 2>> bravais_offset(const Vec2& shift, int from, int to) const;
  std::size_t neighbor(std::size_t idx, const std::array<long, 2>& offset, int to) const;

  nlohmann::json to_json() const;

 private:
  LatticeGeometry geom_;
  int Lx_, Ly_, n_layers_;
  CellKind kind_;
  Eigen::Matrix2d basis_inv_;
  Eigen::Matrix2d periods_, periods_inv_;
  std::vector<SiteInfo> info_;
  std::vector<Vec2> pos_;
};

SupercellIndex supercell(const LatticeGeometry& geom, int Lx, int Ly, int n_layers,
                         CellKind kind = CellKind::rectangular);

}  // namespace tbcont
