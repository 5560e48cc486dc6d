#include "tbcont/tbsim.hpp"

#include <cmath>
#include <fstream>

#include "tbcont/error.hpp"

namespace tbcont {

Field MassProfile::macro_field(double delta, double omega) const {
  if (!(delta > 0) || !(omega > 0)) fail(Errc::config, "mass profile needs delta, omega > 0");
  switch (kind) {
    case Kind::racetrack: return Field::racetrack(delta * ell, delta * w, omega);
    case Kind::circle: return Field::racetrack(0.0, delta * w, omega);
    case Kind::straight: return Field::tanh_ramp(Vec2(0.0, 1.0), 0.0, omega);
    case Kind::uniform: return Field(1.0);
  }
  return Field(1.0);
}

double MassProfile::operator()(const Vec2& x, double delta, double omega) const {
  return macro_field(delta, omega)(delta * x).real();
}

std::string MassProfile::id() const {
  switch (kind) {
    case Kind::racetrack: return "racetrack(" + std::to_string(ell) + "," + std::to_string(w) + ")";
    case Kind::circle: return "circle(" + std::to_string(w) + ")";
    case Kind::straight: return "straight";
    case Kind::uniform: return "uniform";
  }
  return "?";
}

nlohmann::json MassProfile::to_json() const {
  const char* k = kind == Kind::racetrack ? "racetrack"
                  : kind == Kind::circle  ? "circle"
                  : kind == Kind::straight ? "straight"
                                           : "uniform";
  return {{"kind", k}, {"ell", ell}, {"w", w}};
}

SparseHamiltonian assemble(const TrigSymbol& a, const SupercellIndex& cell, double delta) {
  if (a.n() != cell.n_orbitals())
    fail(Errc::invalid_parameter, "symbol dimension does not match the orbitals per cell");
  if (cell.size() >= (std::size_t(1) << 32)) fail(Errc::capacity, "too many sites for 32-bit indices");
  std::vector<Triplet> trip;
  const std::size_t N = cell.size();
  std::size_t nz_terms = 0;
  for (const auto& t : a.terms())
    for (int o = 0; o < a.n(); ++o)
      for (int q = 0; q < a.n(); ++q)
        if (t.matrix(o, q) != cplx(0.0)) ++nz_terms;
  trip.reserve(nz_terms * N / std::size_t(a.n()) + 16);

  for (const auto& t : a.terms()) {
    const double dk = t.delta_power == 0 ? 1.0 : delta;
    if (dk == 0.0) continue;
    for (int o = 0; o < a.n(); ++o)
      for (int q = 0; q < a.n(); ++q) {
        const cplx Moq = t.matrix(o, q);
        if (Moq == cplx(0.0)) continue;
        const auto off = cell.bravais_offset(t.shift, o, q);
        if (!off) fail(Errc::unsupported, "symbol shift does not connect lattice sites");
        const bool constant = t.coeff.is_constant();
        const cplx c0 = constant ? t.coeff.constant_value() : cplx(0.0);
        for (std::size_t i = 0; i < N; ++i) {
          if (cell.site(i).orbital() != o) continue;
          const std::size_t j = cell.neighbor(i, *off, q);
          cplx c = c0;
          if (!constant) c = t.coeff(delta * cell.wrap(cell.position(i) + 0.5 * t.shift));
          trip.push_back({std::uint32_t(i), std::uint32_t(j), dk * Moq * c});
        }
      }
  }
  return SparseHamiltonian::from_triplets_hermitian(N, std::move(trip));
}

SparseHamiltonian assemble_bilayer(const SupercellIndex& cell, double delta, double omega, double gamma,
                                   const MassProfile& mass) {
  if (!(delta > 0)) fail(Errc::invalid_parameter, "delta must be positive");
  if (omega < 0) fail(Errc::invalid_parameter, "omega must be non-negative");
  if (cell.n_layers() != 2) fail(Errc::invalid_parameter, "bilayer assembly needs a two-layer cell");
  if (mass.kind == MassProfile::Kind::racetrack || mass.kind == MassProfile::Kind::circle) {
    if (cell.kind() == CellKind::rectangular) {
      const Vec2 box = cell.box();
      if (mass.ell + mass.w >= box.x() || mass.w >= box.y())
        fail(Errc::config, "mass profile does not fit into the periodic domain");
    }
  }
  MultilayerParams p;
  p.n_layers = 2;
  if (omega > 0) p.gate = Field(omega / delta) * mass.macro_field(delta, omega);
  p.gamma = Field(gamma / delta);
  const TrigSymbol a = multilayer_trig_symbol(cell.geometry(), p);
  SparseHamiltonian H = assemble(a, cell, delta);
  H.metadata() = {{"model", "bilayer"}, {"delta", delta}, {"omega", omega}, {"gamma", gamma},
                  {"mass_profile", mass.id()}};
  return H;
}

SparseHamiltonian assemble_haldane(const SupercellIndex& cell, double delta, const HaldaneParams& params) {
  if (cell.n_layers() != 1) fail(Errc::invalid_parameter, "Haldane assembly needs a single-layer cell");
  SparseHamiltonian H = assemble(haldane_trig_symbol(cell.geometry(), params), cell, delta);
  H.metadata() = {{"model", "haldane"}, {"delta", delta}, {"phi", params.phi},
                  {"t1", params.t1.to_json()}, {"t2", params.t2.to_json()}, {"M", params.M.to_json()}};
  return H;
}

std::vector<std::size_t> sample_steps(const std::vector<double>& times, double h, double T) {
  std::vector<std::size_t> steps;
  for (double t : times) {
    if (t < -1e-12 || t > T * (1 + 1e-12) + 1e-12)
      fail(Errc::resample, "sample time " + std::to_string(t) + " outside [0, T]");
    const double n = std::round(t / h);
    if (std::abs(n * h - t) > 1e-9 * std::max(1.0, std::abs(t)))
      fail(Errc::resample, "sample time " + std::to_string(t) + " is not a multiple of the step");
    steps.push_back(std::size_t(n));
  }
  return steps;
}

TbTrajectory rk4_propagate(const SparseHamiltonian& H, const CVec& psi0, double h, double T,
                           const Rk4Options& opts) {
  if (!(h > 0)) fail(Errc::invalid_parameter, "time step must be positive");
  if (std::size_t(psi0.size()) != H.dim()) fail(Errc::invalid_parameter, "state dimension mismatch");
  const double n0 = psi0.norm();
  if (!std::isfinite(n0)) fail(Errc::numerical_abort, "initial state is not finite");

  const std::size_t nsteps = std::size_t(std::llround(T / h));
  if (std::abs(double(nsteps) * h - T) > 1e-9 * std::max(1.0, T))
    fail(Errc::resample, "final time is not a multiple of the step");
  const auto samples = sample_steps(opts.sample_times, h, T);

  TbTrajectory tr;
  tr.norm0 = n0;
  const std::ptrdiff_t n = psi0.size();
  CVec psi = psi0, k(n), tmp(n), acc(n);
  std::size_t next = 0;
  auto emit = [&](std::size_t step) {
    while (next < samples.size() && samples[next] == step) {
      const double t = double(step) * h;
      tr.times.push_back(t);
      tr.norms.push_back(psi.norm());
      if (opts.store_states) tr.states.push_back(psi);
      if (opts.observer) opts.observer(t, psi);
      ++next;
    }
  };
  emit(0);
  const cplx mih = -I * h;
  for (std::size_t s = 1; s <= nsteps; ++s) {
    H.apply(psi.data(), k.data());  // k1 = H psi
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      acc[i] = psi[i] + (mih / 6.0) * k[i];
      tmp[i] = psi[i] + (mih / 2.0) * k[i];
    }
    H.apply(tmp.data(), k.data());  // k2
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      acc[i] += (mih / 3.0) * k[i];
      tmp[i] = psi[i] + (mih / 2.0) * k[i];
    }
    H.apply(tmp.data(), k.data());  // k3
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      acc[i] += (mih / 3.0) * k[i];
      tmp[i] = psi[i] + mih * k[i];
    }
    H.apply(tmp.data(), k.data());  // k4
    double nn = 0.0;
#pragma omp parallel for schedule(static) reduction(+ : nn)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      psi[i] = acc[i] + (mih / 6.0) * k[i];
      nn += std::norm(psi[i]);
    }
    const double nrm = std::sqrt(nn);
    if (!std::isfinite(nrm))
      fail(Errc::numerical_abort, "non-finite state at RK4 step " + std::to_string(s));
    tr.max_norm_drift = std::max(tr.max_norm_drift, std::abs(nrm - n0));
    tr.steps = s;
    emit(s);
  }
  return tr;
}

void append_checkpoint(const std::string& path, double t, const CVec& psi) {
  std::ofstream f(path, std::ios::binary | std::ios::app);
  if (!f) fail(Errc::config, "cannot open checkpoint file " + path);
  f.write(reinterpret_cast<const char*>(&t), sizeof(double));
  f.write(reinterpret_cast<const char*>(psi.data()), std::streamsize(psi.size() * sizeof(cplx)));
}

std::vector<std::pair<double, CVec>> read_checkpoints(const std::string& path, std::size_t dim) {
  std::ifstream f(path, std::ios::binary);
  if (!f) fail(Errc::config, "cannot open checkpoint file " + path);
  std::vector<std::pair<double, CVec>> out;
  while (true) {
    double t;
    if (!f.read(reinterpret_cast<char*>(&t), sizeof(double))) break;
    CVec psi(static_cast<Eigen::Index>(dim));
    if (!f.read(reinterpret_cast<char*>(psi.data()), std::streamsize(dim * sizeof(cplx))))
      fail(Errc::config, "truncated checkpoint record in " + path);
    out.emplace_back(t, std::move(psi));
  }
  return out;
}

void write_sidecar(const std::string& path, const nlohmann::json& j) {
  std::ofstream f(path);
  if (!f) fail(Errc::config, "cannot open " + path);
  f << j.dump(2) << "\n";
}

}  // namespace tbcont
