#include "tbcont/config.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include "tbcont/effective.hpp"
#include "tbcont/error.hpp"
#include "tbcont/models.hpp"

namespace tbcont {

namespace {

using nlohmann::json;

class Section {
 public:
  Section(const json& j, std::string path, std::set<std::string> allowed)
      : j_(j), path_(std::move(path)), allowed_(std::move(allowed)) {
    if (!j_.is_object()) fail(Errc::config, path_ + ": expected an object");
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!allowed_.count(it.key())) fail(Errc::config, at(it.key()) + ": unknown key");
  }

  std::string at(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }
  bool has(const std::string& key) const { return j_.contains(key); }
  const json& raw(const std::string& key) const { return j_.at(key); }

  void num(const std::string& key, double& out) const {
    if (!has(key)) return;
    if (!j_[key].is_number()) fail(Errc::config, at(key) + ": expected a number");
    out = j_[key].get<double>();
  }
  void integer(const std::string& key, int& out) const {
    if (!has(key)) return;
    if (!j_[key].is_number_integer()) fail(Errc::config, at(key) + ": expected an integer");
    out = j_[key].get<int>();
  }
  void boolean(const std::string& key, bool& out) const {
    if (!has(key)) return;
    if (!j_[key].is_boolean()) fail(Errc::config, at(key) + ": expected a boolean");
    out = j_[key].get<bool>();
  }
  void str(const std::string& key, std::string& out, const std::set<std::string>& choices = {}) const {
    if (!has(key)) return;
    if (!j_[key].is_string()) fail(Errc::config, at(key) + ": expected a string");
    out = j_[key].get<std::string>();
    if (!choices.empty() && !choices.count(out)) fail(Errc::config, at(key) + ": unsupported value '" + out + "'");
  }
  void vec2(const std::string& key, Vec2& out) const {
    if (!has(key)) return;
    const json& a = j_[key];
    if (!a.is_array() || a.size() != 2 || !a[0].is_number() || !a[1].is_number())
      fail(Errc::config, at(key) + ": expected [x, y]");
    out = Vec2(a[0].get<double>(), a[1].get<double>());
  }
  template <class T>
  void list(const std::string& key, std::vector<T>& out) const {
    if (!has(key)) return;
    const json& a = j_[key];
    if (!a.is_array()) fail(Errc::config, at(key) + ": expected an array");
    out.clear();
    for (std::size_t i = 0; i < a.size(); ++i) {
      const bool ok = std::is_integral_v<T> ? a[i].is_number_integer() : a[i].is_number();
      if (!ok) fail(Errc::config, at(key) + "[" + std::to_string(i) + "]: expected a number");
      out.push_back(a[i].get<T>());
    }
  }
  Section sub(const std::string& key, std::set<std::string> allowed) const {
    return Section(j_.at(key), at(key), std::move(allowed));
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> allowed_;
};

void positive(double x, const std::string& path) {
  if (!(x > 0)) fail(Errc::config, path + ": must be positive");
}

MassProfile::Kind mass_kind(const std::string& s) {
  if (s == "racetrack") return MassProfile::Kind::racetrack;
  if (s == "circle") return MassProfile::Kind::circle;
  if (s == "straight") return MassProfile::Kind::straight;
  return MassProfile::Kind::uniform;
}

const char* mass_name(MassProfile::Kind k) {
  switch (k) {
    case MassProfile::Kind::racetrack: return "racetrack";
    case MassProfile::Kind::circle: return "circle";
    case MassProfile::Kind::straight: return "straight";
    case MassProfile::Kind::uniform: return "uniform";
  }
  return "uniform";
}

}  // namespace

RunConfig RunConfig::from_json(const json& j) {
  RunConfig c;
  Section root(j, "", {"model", "domain", "integrator", "packet", "output", "scan", "seed"});
  if (root.has("seed")) {
    if (!j["seed"].is_number_unsigned() && !(j["seed"].is_number_integer() && j["seed"].get<std::int64_t>() >= 0))
      fail(Errc::config, "seed: expected a non-negative integer");
    c.seed = j["seed"].get<std::uint64_t>();
  }
  if (root.has("model")) {
    Section s = root.sub("model", {"family", "v", "delta", "omega", "gamma", "stacking", "order", "mass", "t1",
                                   "t2", "M", "phi"});
    auto& m = c.model;
    s.str("family", m.family, {"bilayer", "haldane"});
    s.num("v", m.v);
    s.num("delta", m.delta);
    s.num("omega", m.omega);
    s.num("gamma", m.gamma);
    s.str("stacking", m.stacking, {"AB", "BA", "mixture"});
    s.integer("order", m.order);
    s.num("t1", m.t1);
    s.num("t2", m.t2);
    s.num("M", m.M);
    s.num("phi", m.phi);
    if (s.has("mass")) {
      Section ms = s.sub("mass", {"kind", "ell", "w"});
      std::string kind = mass_name(m.mass.kind);
      ms.str("kind", kind, {"racetrack", "circle", "straight", "uniform"});
      m.mass.kind = mass_kind(kind);
      ms.num("ell", m.mass.ell);
      ms.num("w", m.mass.w);
      if (m.mass.kind == MassProfile::Kind::circle) {
        if (ms.has("ell") && m.mass.ell != 0.0) fail(Errc::config, "model.mass.ell: must be 0 for a circle");
        m.mass.ell = 0.0;
      }
    }
    positive(m.v, "model.v");
    positive(m.delta, "model.delta");
    positive(m.omega, "model.omega");
    if (m.order < 1) fail(Errc::config, "model.order: must be >= 1");
  }
  if (root.has("domain")) {
    Section s = root.sub("domain", {"box_x", "box_y", "Lx", "Ly", "Kx", "Ky"});
    auto& d = c.domain;
    s.num("box_x", d.box_x);
    s.num("box_y", d.box_y);
    s.integer("Lx", d.Lx);
    s.integer("Ly", d.Ly);
    s.integer("Kx", d.Kx);
    s.integer("Ky", d.Ky);
    if (d.Kx < 1 || d.Ky < 1) fail(Errc::config, "domain.Kx/Ky: must be >= 1");
  }
  if (root.has("integrator")) {
    Section s = root.sub("integrator", {"h_tb", "h_c", "T", "snapshot_every"});
    auto& g = c.integrator;
    s.num("h_tb", g.h_tb);
    s.num("h_c", g.h_c);
    s.num("T", g.T);
    s.num("snapshot_every", g.snapshot_every);
    positive(g.h_tb, "integrator.h_tb");
    positive(g.h_c, "integrator.h_c");
    positive(g.snapshot_every, "integrator.snapshot_every");
    if (g.T < 0) fail(Errc::config, "integrator.T: must be non-negative");
  }
  if (root.has("packet")) {
    Section s = root.sub("packet", {"kind", "sigma", "center", "amplitudes", "window", "band", "k_lo", "k_hi",
                                    "window_width", "envelope_sigma", "strip_Ly", "strip_Ky", "k_points",
                                    "k_extent"});
    auto& p = c.packet;
    s.str("kind", p.kind, {"gaussian", "edge"});
    s.num("sigma", p.sigma);
    s.vec2("center", p.center);
    if (s.has("amplitudes")) {
      const json& a = s.raw("amplitudes");
      if (!a.is_array()) fail(Errc::config, "packet.amplitudes: expected an array of [re, im]");
      for (std::size_t i = 0; i < a.size(); ++i) {
        if (!a[i].is_array() || a[i].size() != 2 || !a[i][0].is_number() || !a[i][1].is_number())
          fail(Errc::config, "packet.amplitudes[" + std::to_string(i) + "]: expected [re, im]");
        p.amplitudes.emplace_back(a[i][0].get<double>(), a[i][1].get<double>());
      }
    }
    s.str("window", p.window, {"fast", "slow", "explicit"});
    s.integer("band", p.band);
    s.num("k_lo", p.k_lo);
    s.num("k_hi", p.k_hi);
    s.num("window_width", p.window_width);
    s.num("envelope_sigma", p.envelope_sigma);
    s.num("strip_Ly", p.strip_Ly);
    s.integer("strip_Ky", p.strip_Ky);
    s.integer("k_points", p.k_points);
    s.num("k_extent", p.k_extent);
    positive(p.sigma, "packet.sigma");
    if (p.k_points < 3) fail(Errc::config, "packet.k_points: must be >= 3");
  }
  if (root.has("output")) {
    Section s = root.sub("output", {"directory", "checkpoints"});
    s.str("directory", c.output.directory);
    s.boolean("checkpoints", c.output.checkpoints);
  }
  if (root.has("scan")) {
    Section s = root.sub("scan", {"p_list", "delta_list", "omega_hat", "gamma_hat", "box_X", "box_Y", "sigma",
                                  "Kx", "Ky", "substeps", "T_factor", "n_samples", "control_run"});
    auto& sc = c.scan;
    s.list("p_list", sc.p_list);
    s.list("delta_list", sc.delta_list);
    s.num("omega_hat", sc.omega_hat);
    s.num("gamma_hat", sc.gamma_hat);
    s.num("box_X", sc.box_X);
    s.num("box_Y", sc.box_Y);
    s.num("sigma", sc.sigma);
    s.integer("Kx", sc.Kx);
    s.integer("Ky", sc.Ky);
    s.integer("substeps", sc.substeps);
    s.num("T_factor", sc.T_factor);
    s.integer("n_samples", sc.n_samples);
    s.boolean("control_run", sc.control_run);
    for (double d : sc.delta_list) positive(d, "scan.delta_list");
  }
  return c;
}

RunConfig RunConfig::load(const std::string& path) {
  std::ifstream f(path);
  if (!f) fail(Errc::config, "cannot open config file " + path);
  json j;
  try {
    f >> j;
  } catch (const json::parse_error& e) {
    fail(Errc::config, path + ": " + e.what());
  }
  return from_json(j);
}

json RunConfig::to_json() const {
  json amps = json::array();
  for (const auto& a : packet.amplitudes) amps.push_back({a.real(), a.imag()});
  return {
      {"model",
       {{"family", model.family},
        {"v", model.v},
        {"delta", model.delta},
        {"omega", model.omega},
        {"gamma", model.gamma},
        {"stacking", model.stacking},
        {"order", model.order},
        {"mass", {{"kind", mass_name(model.mass.kind)}, {"ell", model.mass.ell}, {"w", model.mass.w}}},
        {"t1", model.t1},
        {"t2", model.t2},
        {"M", model.M},
        {"phi", model.phi}}},
      {"domain",
       {{"box_x", domain.box_x},
        {"box_y", domain.box_y},
        {"Lx", domain.Lx},
        {"Ly", domain.Ly},
        {"Kx", domain.Kx},
        {"Ky", domain.Ky}}},
      {"integrator",
       {{"h_tb", integrator.h_tb},
        {"h_c", integrator.h_c},
        {"T", integrator.T},
        {"snapshot_every", integrator.snapshot_every}}},
      {"packet",
       {{"kind", packet.kind},
        {"sigma", packet.sigma},
        {"center", {packet.center.x(), packet.center.y()}},
        {"amplitudes", amps},
        {"window", packet.window},
        {"band", packet.band},
        {"k_lo", packet.k_lo},
        {"k_hi", packet.k_hi},
        {"window_width", packet.window_width},
        {"envelope_sigma", packet.envelope_sigma},
        {"strip_Ly", packet.strip_Ly},
        {"strip_Ky", packet.strip_Ky},
        {"k_points", packet.k_points},
        {"k_extent", packet.k_extent}}},
      {"output", {{"directory", output.directory}, {"checkpoints", output.checkpoints}}},
      {"scan",
       {{"p_list", scan.p_list},
        {"delta_list", scan.delta_list},
        {"omega_hat", scan.omega_hat},
        {"gamma_hat", scan.gamma_hat},
        {"box_X", scan.box_X},
        {"box_Y", scan.box_Y},
        {"sigma", scan.sigma},
        {"Kx", scan.Kx},
        {"Ky", scan.Ky},
        {"substeps", scan.substeps},
        {"T_factor", scan.T_factor},
        {"n_samples", scan.n_samples},
        {"control_run", scan.control_run}}},
      {"seed", seed}};
}

SupercellIndex build_cell(const RunConfig& cfg) {
  const LatticeGeometry g = honeycomb_geometry(cfg.model.v);
  const int layers = cfg.model.family == "bilayer" ? 2 : 1;
  int Lx = cfg.domain.Lx, Ly = cfg.domain.Ly;
  if (Lx < 0 || Ly < 0) {
    const SupercellIndex probe = scan_cell(1.0, cfg.model.v, cfg.domain.box_x, cfg.domain.box_y);
    if (Lx < 0) Lx = probe.Lx();
    if (Ly < 0) Ly = probe.Ly();
  }
  return SupercellIndex(g, Lx, Ly, layers, CellKind::rectangular);
}

TrigSymbol build_trig_symbol(const RunConfig& cfg, const LatticeGeometry& geom) {
  const auto& m = cfg.model;
  if (m.family == "haldane") {
    HaldaneParams hp;
    hp.t1 = Field(m.t1);
    hp.t2 = Field(m.t2);
    hp.M = Field(m.M);
    hp.phi = m.phi;
    return haldane_trig_symbol(geom, hp);
  }
  MultilayerParams mp;
  mp.n_layers = 2;
  mp.t1 = Field(m.t1);
  mp.gate = (m.omega / m.delta) * m.mass.macro_field(m.delta, m.omega);
  mp.gamma = Field(m.gamma / m.delta);
  mp.stacking = m.stacking == "AB" ? Stacking::AB : (m.stacking == "BA" ? Stacking::BA : Stacking::mixture);
  return multilayer_trig_symbol(geom, mp);
}

PolySymbol build_effective(const RunConfig& cfg, const LatticeGeometry& geom, int p) {
  PolySymbol b = taylor_effective(build_trig_symbol(cfg, geom), geom.K, 0.0, p);
  b.set_delta(cfg.model.delta);
  return b;
}

LiftConfig build_lift(const RunConfig& cfg, const LatticeGeometry& geom) {
  LiftConfig lc;
  lc.K = geom.K;
  lc.delta = cfg.model.delta;
  lc.method = LiftMethod::spline;
  return lc;
}

EdgeSetup build_edge_setup(const RunConfig& cfg, const LatticeGeometry& geom) {
  const auto& m = cfg.model;
  const auto& pk = cfg.packet;
  if (m.family != "bilayer") fail(Errc::config, "edge packets need the bilayer family");
  const double width = m.omega;  // macroscopic wall width
  const double Ly = pk.strip_Ly > 0 ? pk.strip_Ly : 64 * width;
  const int Ky = pk.strip_Ky > 0 ? pk.strip_Ky : int(std::ceil(4 * Ly / width));
  PolySymbol b = bilayer_strip_symbol(geom, m.omega / m.delta, m.gamma / m.delta, width, Ly, m.order, m.delta);
  EdgeProblem prob(b, Ky, Ly);
  const double kext = pk.k_extent > 0 ? pk.k_extent : 2.0 / width;
  std::vector<double> ks(pk.k_points);
  for (int i = 0; i < pk.k_points; ++i) ks[i] = -kext + 2 * kext * i / (pk.k_points - 1);
  EdgeSpectrum spec = edge_band_structure(prob, ks);
  const double box_macro = m.delta * cfg.domain.box_x;
  const double ww = pk.window_width > 0 ? pk.window_width : std::min(10 * 2 * pi / box_macro, kext / 2);
  EdgeWindows win = default_edge_windows(prob, spec, ww);
  return {std::move(b), std::move(prob), std::move(spec), win};
}

Packet build_packet(const RunConfig& cfg, const SupercellIndex& cell) {
  const auto& m = cfg.model;
  const auto& pk = cfg.packet;
  const LatticeGeometry& geom = cell.geometry();
  const LiftConfig lc = build_lift(cfg, geom);
  const Vec2 box = macro_box(cell, m.delta);
  if (pk.kind == "gaussian") {
    const int n = cell.n_orbitals();
    CVec c;
    if (pk.amplitudes.empty()) {
      c = random_amplitudes(n, cfg.seed);
    } else {
      if (int(pk.amplitudes.size()) != n)
        fail(Errc::config, "packet.amplitudes: expected " + std::to_string(n) + " entries");
      c = Eigen::Map<const CVec>(pk.amplitudes.data(), n);
    }
    Packet p = gaussian_packet(m.delta * pk.sigma, c, m.delta * pk.center, cell, lc, cfg.domain.Kx, cfg.domain.Ky);
    p.metadata["seed"] = cfg.seed;
    return p;
  }
  EdgeSetup es = build_edge_setup(cfg, geom);
  EdgeWindow w;
  if (pk.window == "explicit") {
    w = {pk.band, pk.k_lo, pk.k_hi};
  } else {
    const auto& opt = pk.window == "fast" ? es.windows.fast : es.windows.slow;
    if (!opt) fail(Errc::no_modes, "no in-gap edge branch found for the " + pk.window + " window");
    w = *opt;
  }
  Placement pl;
  switch (m.mass.kind) {
    case MassProfile::Kind::racetrack:
    case MassProfile::Kind::circle: pl.center = Vec2(0.0, m.delta * m.mass.w / 2); break;
    default: pl.center = Vec2::Zero();
  }
  pl.center += m.delta * pk.center;
  EdgePacketOptions eo;
  eo.envelope_sigma = pk.envelope_sigma;
  eo.Kx = cfg.domain.Kx;
  eo.Ky = cfg.domain.Ky;
  eo.Lx = box.x();
  eo.Ly = box.y();
  return synthesize_edge_packet(es.problem, es.spectrum, w, pl, eo, &cell, &lc);
}

}  // namespace tbcont
