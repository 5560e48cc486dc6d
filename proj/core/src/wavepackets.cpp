#include "tbcont/wavepackets.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numeric>
#include <random>

#define lapack_complex_double std::complex<double>
#define lapack_complex_float std::complex<float>
#include <lapacke.h>

#include "tbcont/effective.hpp"
#include "tbcont/error.hpp"
#include "tbcont/models.hpp"

namespace tbcont {

namespace {

double wrap_centered(double x, double L) { return x - L * std::floor(x / L + 0.5); }

}  // namespace

SpectralField gaussian_field(double sigma, const CVec& c, const Vec2& center, int Kx, int Ky, double Lx,
                             double Ly) {
  if (!(sigma > 0)) fail(Errc::invalid_parameter, "packet width must be positive");
  if (c.size() == 0 || c.norm() == 0.0) fail(Errc::invalid_parameter, "packet amplitudes must be nonzero");
  const int n = int(c.size());
  SpectralField phi = project(
      [&](const Vec2& X) -> CVec {
        const double dx = wrap_centered(X.x() - center.x(), Lx);
        const double dy = wrap_centered(X.y() - center.y(), Ly);
        return c * std::exp(-(dx * dx + dy * dy) / (2 * sigma * sigma));
      },
      n, Kx, Ky, Lx, Ly);
  phi.scale(1.0 / phi.norm());
  return phi;
}

Packet gaussian_packet(double sigma, const CVec& c, const Vec2& center, const SupercellIndex& cell,
                       const LiftConfig& lift, int Kx, int Ky) {
  const Vec2 box = macro_box(cell, lift.delta);
  Packet pk{gaussian_field(sigma, c, center, Kx, Ky, box.x(), box.y()), CVec(), {}};
  pk.lattice = lift_to_lattice(pk.phi, cell, lift, 0.0);
  pk.lattice /= pk.lattice.norm();
  pk.metadata = {{"kind", "gaussian"}, {"sigma", sigma}, {"center", {center.x(), center.y()}}};
  // carrier and envelope separate only when the packet spans several lattice spacings
  if (sigma / lift.delta < 2 * cell.geometry().v) pk.metadata["warning"] = "under-resolved packet";
  return pk;
}

CVec random_amplitudes(int n, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> nd;
  CVec c(n);
  for (int i = 0; i < n; ++i) {
    const double re = nd(gen);
    const double im = nd(gen);
    c[i] = {re, im};
  }
  return c;
}

EdgeProblem::EdgeProblem(const PolySymbol& b, int Ky, double Ly)
    : n_(b.n()), Ky_(Ky), Ly_(Ly), delta_(b.delta()), b_(b) {
  if (Ky < 1 || !(Ly > 0)) fail(Errc::invalid_parameter, "edge problem needs Ky >= 1 and Ly > 0");
  const int Gf = std::max(64, 8 * (2 * Ky + 1));
  for (const auto& t : b.terms()) {
    Term term{t.alpha[0], t.alpha[1], t.matrix * ipow(delta_, t.delta_power), {}};
    term.chat.assign(std::size_t(4 * Ky + 1), 0.0);
    if (t.coeff.is_constant()) {
      term.chat[2 * Ky] = t.coeff.constant_value();
    } else {
      std::vector<cplx> samples(Gf);
      for (int j = 0; j < Gf; ++j) {
        const double y = -Ly / 2 + j * Ly / Gf;
        samples[j] = t.coeff(Vec2(0.0, y));
        for (double x : {0.37, -1.91})
          if (std::abs(t.coeff(Vec2(x, y)) - samples[j]) > 1e-12 * (1 + std::abs(samples[j])))
            fail(Errc::invalid_parameter, "edge problem coefficients must depend on X2 only");
      }
      for (int q = -2 * Ky; q <= 2 * Ky; ++q) {
        cplx s = 0.0;
        for (int j = 0; j < Gf; ++j) s += samples[j] * std::polar(1.0, -2 * pi * q * (-Ly / 2 + j * Ly / Gf) / Ly);
        term.chat[std::size_t(q + 2 * Ky)] = s / double(Gf);
      }
    }
    terms_.push_back(std::move(term));
  }
}

CMat EdgeProblem::matrix(double k1) const {
  const int Ny = 2 * Ky_ + 1;
  CMat H = CMat::Zero(dim(), dim());
  for (const auto& t : terms_) {
    const cplx k1p = ipow(k1, t.a1);
    for (int lp = -Ky_; lp <= Ky_; ++lp)
      for (int l = -Ky_; l <= Ky_; ++l) {
        const cplx ch = t.chat[std::size_t(lp - l + 2 * Ky_)];
        if (ch == 0.0) continue;
        const double zm = pi * (lp + l) / Ly_;  // (zeta_l + zeta_l') / 2
        const cplx f = ch * k1p * ipow(zm, t.a2);
        for (int r = 0; r < n_; ++r)
          for (int c = 0; c < n_; ++c) {
            if (t.matrix(r, c) == 0.0) continue;
            H(r * Ny + lp + Ky_, c * Ny + l + Ky_) += f * t.matrix(r, c);
          }
      }
  }
  return 0.5 * (H + H.adjoint());
}

std::pair<Eigen::VectorXd, CMat> EdgeProblem::solve(double k1, int count) const {
  CMat H = matrix(k1);
  const lapack_int N = lapack_int(H.rows());
  if (count <= 0 || count >= N) count = int(N);
  const lapack_int il = std::max<lapack_int>(1, N / 2 - count / 2 + 1);
  const lapack_int iu = std::min<lapack_int>(N, il + count - 1);
  Eigen::VectorXd w(N);
  CMat Z(N, iu - il + 1);
  std::vector<lapack_int> isuppz(2 * std::size_t(N));
  lapack_int m = 0;
  const lapack_int info = LAPACKE_zheevr(LAPACK_COL_MAJOR, 'V', count == N ? 'A' : 'I', 'L', N, H.data(), N, 0.0,
                                         0.0, il, iu, 0.0, &m, w.data(), Z.data(), N, isuppz.data());
  if (info != 0 || m != Z.cols()) fail(Errc::numerical_abort, "edge eigenproblem failed");
  return {w.head(m), Z};
}

CVec EdgeProblem::profile(const CVec& u, double X2) const {
  const int Ny = 2 * Ky_ + 1;
  CVec out = CVec::Zero(n_);
  for (int l = -Ky_; l <= Ky_; ++l) {
    const cplx e = std::polar(1.0, 2 * pi * l * X2 / Ly_);
    for (int c = 0; c < n_; ++c) out[c] += u[c * Ny + l + Ky_] * e;
  }
  return out;
}

double EdgeProblem::bulk_gap() const {
  const double Z = 2 * pi * Ky_ / Ly_;
  const int M = 161;
  double gap = std::numeric_limits<double>::infinity();
  for (int i = 0; i < M; ++i)
    for (int j = 0; j < M; ++j) {
      const Vec2 zeta(-Z + 2 * Z * i / (M - 1), -Z + 2 * Z * j / (M - 1));
      Eigen::SelfAdjointEigenSolver<CMat> es(b_.eval(Vec2(0.0, Ly_ / 4), zeta), Eigen::EigenvaluesOnly);
      gap = std::min(gap, es.eigenvalues().cwiseAbs().minCoeff());
    }
  return gap;
}

double interface_weight(const EdgeProblem& prob, const CVec& u) {
  const int M = 8 * (2 * prob.Ky() + 1);
  double in = 0.0, total = 0.0;
  for (int j = 0; j < M; ++j) {
    const double y = -prob.Ly() / 2 + j * prob.Ly() / M;
    const double w = prob.profile(u, y).squaredNorm();
    total += w;
    if (std::abs(y) < prob.Ly() / 8) in += w;
  }
  return total > 0 ? in / total : 0.0;
}

double leakage(const EdgeProblem& prob, const CVec& u) {
  const int M = 8 * (2 * prob.Ky() + 1);
  double peak = 0.0;
  for (int j = 0; j < M; ++j) peak = std::max(peak, prob.profile(u, -prob.Ly() / 2 + j * prob.Ly() / M).norm());
  const double edge = std::max(prob.profile(u, prob.Ly() / 4).norm(), prob.profile(u, -prob.Ly() / 4).norm());
  return peak > 0 ? edge / peak : 0.0;
}

std::vector<int> hungarian_max(const Eigen::MatrixXd& w) {
  const int n = int(w.rows()), m = int(w.cols());
  if (n > m) fail(Errc::invalid_parameter, "assignment needs rows <= columns");
  const double big = w.size() ? w.maxCoeff() : 0.0;
  // minimize big - w, 1-based potentials
  std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0);
  std::vector<int> p(m + 1, 0), way(m + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(m + 1, std::numeric_limits<double>::infinity());
    std::vector<char> used(m + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = p[j0];
      double d = std::numeric_limits<double>::infinity();
      int j1 = 0;
      for (int j = 1; j <= m; ++j) {
        if (used[j]) continue;
        const double cur = (big - w(i0 - 1, j - 1)) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < d) {
          d = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= m; ++j) {
        if (used[j]) {
          u[p[j]] += d;
          v[j] -= d;
        } else {
          minv[j] -= d;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0);
  }
  std::vector<int> res(n, -1);
  for (int j = 1; j <= m; ++j)
    if (p[j] > 0) res[p[j] - 1] = j - 1;
  return res;
}

namespace {

std::vector<int> nearest_zero(const Eigen::VectorXd& E, int count) {
  std::vector<int> idx(E.size());
  std::iota(idx.begin(), idx.end(), 0);
  count = std::min<int>(count, int(E.size()));
  std::partial_sort(idx.begin(), idx.begin() + count, idx.end(),
                    [&](int a, int b) { return std::abs(E[a]) < std::abs(E[b]); });
  idx.resize(count);
  std::sort(idx.begin(), idx.end());
  return idx;
}

}  // namespace

EdgeSpectrum edge_band_structure(const EdgeProblem& prob, const std::vector<double>& k1_grid, int n_track,
                                 double leakage_tol) {
  if (k1_grid.empty()) fail(Errc::invalid_parameter, "empty k1 grid");
  EdgeSpectrum sp;
  sp.k1 = k1_grid;
  sp.n = prob.n();
  sp.Ky = prob.Ky();
  sp.Ly = prob.Ly();
  const std::size_t nk = k1_grid.size();
  sp.E.resize(nk);
  sp.vecs.resize(nk);
  sp.bulk_gap = prob.bulk_gap();
  n_track = std::min<int>(n_track, prob.dim());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < std::ptrdiff_t(nk); ++i) {
    // widen until the kept window reaches past the gap on both sides
    for (int count = std::max(4 * n_track, 32);; count *= 2) {
      auto [E, V] = prob.solve(k1_grid[i], count);
      const bool full = E.size() >= prob.dim();
      if (full || (E[0] < -sp.bulk_gap && E[E.size() - 1] > sp.bulk_gap)) {
        sp.E[i] = std::move(E);
        sp.vecs[i] = std::move(V);
        break;
      }
    }
  }

  if (leakage_tol >= 0) {
    for (std::size_t i = 0; i < nk; ++i)
      for (int j = 0; j < sp.E[i].size(); ++j) {
        if (std::abs(sp.E[i][j]) >= 0.5 * sp.bulk_gap) continue;
        const double lk = leakage(prob, sp.vecs[i].col(j));
        if (lk > leakage_tol)
          fail(Errc::domain_too_small, "in-gap state at k1 = " + std::to_string(k1_grid[i]) +
                                           " leaks to the strip midpoint (" + std::to_string(lk) +
                                           "); enlarge the strip or Ky");
      }
  }

  std::size_t seed = 0;
  long best = -1;
  for (std::size_t i = 0; i < nk; ++i) {
    const long c = long((sp.E[i].array().abs() < sp.bulk_gap).count());
    if (c > best) {
      best = c;
      seed = i;
    }
  }
  n_track = std::min<int>(n_track, int(sp.E[seed].size()));
  const std::vector<int> first = nearest_zero(sp.E[seed], n_track);
  sp.tracked.assign(std::size_t(n_track), std::vector<int>(nk, 0));
  sp.overlap.assign(std::size_t(n_track), std::vector<double>(nk > 0 ? nk - 1 : 0, 0.0));
  for (int b = 0; b < n_track; ++b) sp.tracked[b][seed] = first[b];
  // match band states at k_from onto candidates at k_to
  auto step = [&](std::size_t from, std::size_t to) {
    const std::vector<int> cand = nearest_zero(sp.E[to], 2 * n_track);
    Eigen::MatrixXd W(n_track, cand.size());
    for (int b = 0; b < n_track; ++b) {
      const CVec u = sp.vecs[from].col(sp.tracked[b][from]);
      for (std::size_t c = 0; c < cand.size(); ++c) W(b, c) = std::abs(u.dot(sp.vecs[to].col(cand[c])));
    }
    const std::vector<int> asg = hungarian_max(W);
    for (int b = 0; b < n_track; ++b) {
      sp.tracked[b][to] = cand[asg[b]];
      sp.overlap[b][std::min(from, to)] = W(b, asg[b]);
    }
  };
  for (std::size_t i = seed; i + 1 < nk; ++i) step(i, i + 1);
  for (std::size_t i = seed; i > 0; --i) step(i, i - 1);
  return sp;
}

void EdgeSpectrum::write_csv(const std::string& path) const {
  std::ofstream f(path);
  if (!f) fail(Errc::config, "cannot write " + path);
  f << "k1,band,E,tracked\n" << std::setprecision(17);
  for (std::size_t i = 0; i < k1.size(); ++i)
    for (int j = 0; j < E[i].size(); ++j) {
      int tb = -1;
      for (std::size_t b = 0; b < tracked.size(); ++b)
        if (tracked[b][i] == j) tb = int(b);
      f << k1[i] << ',' << j << ',' << E[i][j] << ',' << tb << '\n';
    }
}

EdgeWindows default_edge_windows(const EdgeProblem& prob, const EdgeSpectrum& spec, double width) {
  EdgeWindows out;
  const std::size_t nk = spec.k1.size();
  if (nk < 3) return out;
  double best_fast = -1, best_slow = std::numeric_limits<double>::infinity();
  for (std::size_t b = 0; b < spec.tracked.size(); ++b)
    for (std::size_t i = 1; i + 1 < nk; ++i) {
      const double E = spec.band_energy(int(b), int(i));
      if (std::abs(E) > 0.85 * spec.bulk_gap) continue;
      // skip band swaps: the tracked state must connect smoothly on both sides
      if (spec.overlap[b][i - 1] < 0.9 || spec.overlap[b][i] < 0.9) continue;
      if (interface_weight(prob, spec.band_vector(int(b), int(i))) < 0.9) continue;
      const double vel = (spec.band_energy(int(b), int(i + 1)) - spec.band_energy(int(b), int(i - 1))) /
                         (spec.k1[i + 1] - spec.k1[i - 1]);
      const EdgeWindow w{int(b), spec.k1[i] - width / 2, spec.k1[i] + width / 2};
      if (std::abs(vel) > best_fast) {
        best_fast = std::abs(vel);
        out.fast = w;
        out.fast_velocity = vel;
      }
      if (std::abs(vel) < best_slow) {
        best_slow = std::abs(vel);
        out.slow = w;
        out.slow_velocity = vel;
      }
    }
  return out;
}

Packet synthesize_edge_packet(const EdgeProblem& prob, const EdgeSpectrum& spec, const EdgeWindow& window,
                              const Placement& placement, const EdgePacketOptions& opts,
                              const SupercellIndex* cell, const LiftConfig* lift) {
  if (window.band < 0 || std::size_t(window.band) >= spec.tracked.size() || !(window.k_hi >= window.k_lo))
    fail(Errc::no_modes, "edge window does not select a tracked band");
  const int m_lo = int(std::ceil(window.k_lo * opts.Lx / (2 * pi) - 1e-12));
  const int m_hi = int(std::floor(window.k_hi * opts.Lx / (2 * pi) + 1e-12));
  if (m_hi < m_lo) fail(Errc::no_modes, "edge window contains no box momentum");
  const double kc = 0.5 * (window.k_lo + window.k_hi);
  const double sk = opts.envelope_sigma > 0 ? opts.envelope_sigma
                                             : std::max(0.25 * (window.k_hi - window.k_lo), 1e-12);
  const int n = prob.n();
  const int nm = m_hi - m_lo + 1;
  std::vector<double> ks(nm), g(nm), Es(nm);
  std::vector<CVec> us(nm);
  for (int a = 0; a < nm; ++a) {
    const double k = 2 * pi * (m_lo + a) / opts.Lx;
    ks[a] = k;
    g[a] = std::exp(-(k - kc) * (k - kc) / (2 * sk * sk));
    // reference vector of the band at the nearest spectrum momentum
    std::size_t ir = 0;
    for (std::size_t i = 1; i < spec.k1.size(); ++i)
      if (std::abs(spec.k1[i] - k) < std::abs(spec.k1[ir] - k)) ir = i;
    const CVec ref = spec.band_vector(window.band, int(ir));
    auto [E, V] = prob.solve(k, int(spec.E[ir].size()));
    int best = 0;
    double bo = -1;
    for (int j = 0; j < V.cols(); ++j) {
      const double o = std::abs(ref.dot(V.col(j)));
      if (o > bo) {
        bo = o;
        best = j;
      }
    }
    CVec u = V.col(best);
    // parallel transport gauge
    cplx ph;
    if (a == 0) {
      Eigen::Index imax;
      u.cwiseAbs().maxCoeff(&imax);
      ph = u[imax];
    } else {
      ph = us[a - 1].dot(u);
    }
    if (std::abs(ph) > 0) u *= std::conj(ph) / std::abs(ph);
    us[a] = u;
    Es[a] = E[best];
  }

  SpectralGrid grid(opts.Kx, opts.Ky, opts.Lx, opts.Ly);
  const int Gx = grid.Gx(), Gy = grid.Gy();
  // transverse profiles on the grid rows
  std::vector<CMat> prof(nm, CMat::Zero(n, Gy));
  const double ycut = std::min(prob.Ly() / 4, opts.Ly / 2);
  for (int bidx = 0; bidx < Gy; ++bidx) {
    const double Y = wrap_centered(grid.point(0, bidx).y() - placement.center.y(), opts.Ly);
    if (std::abs(Y) >= ycut) continue;
    for (int a = 0; a < nm; ++a) prof[a].col(bidx) = prob.profile(us[a], Y);
  }
  std::vector<cplx> samples(std::size_t(n) * grid.points(), 0.0);
  for (int ai = 0; ai < Gx; ++ai) {
    const double X1 = grid.point(ai, 0).x() - placement.center.x();
    std::vector<cplx> ph(nm);
    for (int a = 0; a < nm; ++a) ph[a] = g[a] * std::polar(1.0, ks[a] * X1);
    for (int bidx = 0; bidx < Gy; ++bidx)
      for (int c = 0; c < n; ++c) {
        cplx s = 0.0;
        for (int a = 0; a < nm; ++a) s += ph[a] * prof[a](c, bidx);
        samples[(std::size_t(c) * Gx + ai) * Gy + bidx] = s;
      }
  }
  SpectralField phi(n, opts.Kx, opts.Ky, opts.Lx, opts.Ly);
  grid.from_grid(samples, phi);
  const double nr = phi.norm();
  if (!(nr > 0)) fail(Errc::no_modes, "edge packet vanished on the continuum grid");
  phi.scale(1.0 / nr);

  double gsum = 0.0, vnum = 0.0;
  for (int a = 0; a + 1 < nm; ++a) {
    const double w = g[a] * g[a + 1];
    vnum += w * (Es[a + 1] - Es[a]) / (ks[a + 1] - ks[a]);
    gsum += w;
  }
  Packet pk{std::move(phi), CVec(), {}};
  pk.metadata = {{"kind", "edge"},
                 {"band", window.band},
                 {"k_lo", window.k_lo},
                 {"k_hi", window.k_hi},
                 {"k_center", kc},
                 {"envelope_sigma", sk},
                 {"modes", nm},
                 {"group_velocity", gsum > 0 ? vnum / gsum : 0.0},
                 {"center", {placement.center.x(), placement.center.y()}}};
  if (cell && lift) {
    pk.lattice = lift_to_lattice(pk.phi, *cell, *lift, 0.0);
    pk.lattice /= pk.lattice.norm();
  }
  return pk;
}

PolySymbol bilayer_strip_symbol(const LatticeGeometry& geom, double omega_hat, double gamma_hat, double width,
                                double Ly, int p, double delta) {
  MultilayerParams mp;
  mp.n_layers = 2;
  mp.gate = omega_hat * Field::periodic_strip(1, Ly, width);
  mp.gamma = Field(gamma_hat);
  PolySymbol b = taylor_effective(multilayer_trig_symbol(geom, mp), geom.K, 0.0, p);
  b.set_delta(delta);
  return b;
}

}  // namespace tbcont
