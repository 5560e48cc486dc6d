#include "tbcont/lattice.hpp"

#include <cmath>

#include "tbcont/error.hpp"

namespace tbcont {

LatticeGeometry honeycomb_geometry(double v) {
  if (!(v > 0.0)) fail(Errc::invalid_parameter, "lattice spacing v must be positive");
  LatticeGeometry g;
  g.v = v;
  const double s3 = std::sqrt(3.0);
  g.v1 = Vec2(s3, 1.0) * (v / 2);
  g.v2 = Vec2(s3, -1.0) * (v / 2);
  g.a[0] = (g.v1 + g.v2) / 3.0;
  g.a[1] = rotation(2 * pi / 3) * g.a[0];
  g.a[2] = rotation(-2 * pi / 3) * g.a[0];
  g.b[0] = g.v1;
  g.b[1] = g.v2 - g.v1;
  g.b[2] = -(g.b[0] + g.b[1]);
  g.K = Vec2(0.0, -4 * pi / (3 * v));
  g.Kp = -g.K;
  Eigen::Matrix2d V;
  V.col(0) = g.v1;
  V.col(1) = g.v2;
  const Eigen::Matrix2d W = 2 * pi * V.inverse().transpose();
  g.w1 = W.col(0);
  g.w2 = W.col(1);
  return g;
}

namespace {
nlohmann::json vj(const Vec2& x) { return nlohmann::json::array({x.x(), x.y()}); }
}  // namespace

nlohmann::json to_json(const LatticeGeometry& g) {
  nlohmann::json j;
  j["v"] = g.v;
  j["v1"] = vj(g.v1);
  j["v2"] = vj(g.v2);
  j["a"] = {vj(g.a[0]), vj(g.a[1]), vj(g.a[2])};
  j["b"] = {vj(g.b[0]), vj(g.b[1]), vj(g.b[2])};
  j["K"] = vj(g.K);
  j["Kp"] = vj(g.Kp);
  j["w1"] = vj(g.w1);
  j["w2"] = vj(g.w2);
  return j;
}

namespace {
long wrap_index(long k, int L) {
  const long n = 2L * L + 1;
  long r = (k + L) % n;
  if (r < 0) r += n;
  return r - L;
}
}  // namespace

SupercellIndex::SupercellIndex(const LatticeGeometry& geom, int Lx, int Ly, int n_layers,
                               CellKind kind, std::size_t max_sites)
    : geom_(geom), Lx_(Lx), Ly_(Ly), n_layers_(n_layers), kind_(kind) {
  if (Lx < 1 || Ly < 1) fail(Errc::invalid_parameter, "supercell requires Lx, Ly >= 1");
  if (n_layers < 1) fail(Errc::invalid_parameter, "supercell requires at least one layer");
  const int per_cell = (kind == CellKind::rectangular ? 2 : 1) * 2 * n_layers;
  const double count = double(per_cell) * (2.0 * Lx + 1) * (2.0 * Ly + 1);
  if (count > double(max_sites))
    fail(Errc::capacity, "site count " + std::to_string(static_cast<long long>(count)) +
                             " exceeds budget " + std::to_string(max_sites));

  Eigen::Matrix2d B;
  B.col(0) = geom.v1;
  B.col(1) = geom.v2;
  basis_inv_ = B.inverse();
  if (kind == CellKind::rectangular) {
    periods_.col(0) = (2.0 * Lx + 1) * (geom.v1 + geom.v2);
    periods_.col(1) = (2.0 * Ly + 1) * (geom.v1 - geom.v2);
  } else {
    periods_.col(0) = (2.0 * Lx + 1) * geom.v1;
    periods_.col(1) = (2.0 * Ly + 1) * geom.v2;
  }
  periods_inv_ = periods_.inverse();

  const std::size_t N = static_cast<std::size_t>(count);
  info_.resize(N);
  pos_.resize(N);
  const int n_sub = kind == CellKind::rectangular ? 2 : 1;
  for (int m = -Lx; m <= Lx; ++m)
    for (int n = -Ly; n <= Ly; ++n)
      for (int c = 0; c < n_sub; ++c)
        for (int l = 0; l < n_layers; ++l)
          for (int s = 0; s < 2; ++s) {
            const std::size_t idx = index(m, n, c, l, s);
            SiteInfo& si = info_[idx];
            si.m = m;
            si.n = n;
            si.sub = c;
            si.layer = l;
            si.sublattice = s;
            if (kind == CellKind::rectangular) {
              si.hex_i = m + n + c;
              si.hex_j = m - n;
            } else {
              si.hex_i = m;
              si.hex_j = n;
            }
            pos_[idx] = double(si.hex_i) * geom.v1 + double(si.hex_j) * geom.v2 + orbital_offset(si.orbital());
          }
}

std::size_t SupercellIndex::index(int m, int n, int sub, int layer, int sublattice) const {
  const std::size_t Ny = 2 * Ly_ + 1;
  const int n_orb = n_orbitals();
  const std::size_t per_cell = (kind_ == CellKind::rectangular ? 2 : 1) * n_orb;
  return (std::size_t(m + Lx_) * Ny + std::size_t(n + Ly_)) * per_cell + std::size_t(sub) * n_orb +
         std::size_t(2 * layer + sublattice);
}

std::size_t SupercellIndex::index_of(long i, long j, int orbital) const {
  const int layer = orbital / 2, s = orbital % 2;
  if (kind_ == CellKind::hexagonal) {
    return index(int(wrap_index(i, Lx_)), int(wrap_index(j, Ly_)), 0, layer, s);
  }
  long c = (i + j) % 2;
  if (c < 0) c += 2;
  const long m = (i - c + j) / 2;
  const long n = (i - c - j) / 2;
  return index(int(wrap_index(m, Lx_)), int(wrap_index(n, Ly_)), int(c), layer, s);
}

Vec2 SupercellIndex::orbital_offset(int orbital) const {
  const int layer = orbital / 2, s = orbital % 2;
  return double(layer + s) * geom_.a[0];
}

Vec2 SupercellIndex::box() const {
  if (kind_ != CellKind::rectangular) fail(Errc::unsupported, "box() needs a rectangular cell");
  return {periods_(0, 0), periods_(1, 1)};
}

Vec2 SupercellIndex::wrap(const Vec2& x) const {
  Vec2 s = periods_inv_ * x;
  s.x() -= std::floor(s.x() + 0.5);
  s.y() -= std::floor(s.y() + 0.5);
  return periods_ * s;
}

std::optional<std::array<long, 2>> SupercellIndex::bravais_offset(const Vec2& shift, int from,
                                                                  int to) const {
  const Vec2 d = basis_inv_ * (shift + orbital_offset(from) - orbital_offset(to));
  const double ri = std::round(d.x()), rj = std::round(d.y());
  if (std::abs(d.x() - ri) > 1e-8 || std::abs(d.y() - rj) > 1e-8) return std::nullopt;
  return std::array<long, 2>{long(ri), long(rj)};
}

std::size_t SupercellIndex::neighbor(std::size_t idx, const std::array<long, 2>& off, int to) const {
  const SiteInfo& s = info_[idx];
  return index_of(s.hex_i + off[0], s.hex_j + off[1], to);
}

nlohmann::json SupercellIndex::to_json() const {
  nlohmann::json j;
  j["geometry"] = tbcont::to_json(geom_);
  j["Lx"] = Lx_;
  j["Ly"] = Ly_;
  j["n_layers"] = n_layers_;
  j["cell_kind"] = kind_ == CellKind::rectangular ? "rectangular" : "hexagonal";
  j["n_sites"] = size();
  j["periods"] = {vj(periods_.col(0)), vj(periods_.col(1))};
  if (kind_ == CellKind::rectangular) {
    j["enumeration"] =
        "index = ((m+Lx)*(2Ly+1) + (n+Ly))*(4*n_layers) + sub*(2*n_layers) + 2*layer + sublattice; "
        "Bravais R = m*(v1+v2) + n*(v1-v2) + sub*v1; position = R + (layer + sublattice)*a1";
  } else {
    j["enumeration"] =
        "index = ((m+Lx)*(2Ly+1) + (n+Ly))*(2*n_layers) + 2*layer + sublattice; "
        "Bravais R = m*v1 + n*v2; position = R + (layer + sublattice)*a1";
  }
  return j;
}

SupercellIndex supercell(const LatticeGeometry& geom, int Lx, int Ly, int n_layers, CellKind kind) {
  return SupercellIndex(geom, Lx, Ly, n_layers, kind);
}

}  // namespace tbcont
