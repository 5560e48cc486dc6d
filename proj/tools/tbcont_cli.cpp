#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "tbcont/config.hpp"
#include "tbcont/continuum.hpp"
#include "tbcont/error.hpp"
#include "tbcont/harness.hpp"
#include "tbcont/tbsim.hpp"
#include "tbcont/topology.hpp"

using namespace tbcont;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

enum Exit { ok = 0, generic = 1, config_error = 2, numerical = 3, undefined_invariant = 4 };

struct Common {
  std::string config_path;
  std::string out = "";
  int threads = 0;
  bool dry_run = false;
};

RunConfig load_config(const Common& c) {
  return c.config_path.empty() ? RunConfig::from_json(json::object()) : RunConfig::load(c.config_path);
}

fs::path out_dir(const Common& c, const RunConfig& cfg) {
  fs::path d = c.out.empty() ? fs::path(cfg.output.directory) : fs::path(c.out);
  fs::create_directories(d);
  return d;
}

void write_json(const fs::path& p, const json& j) {
  std::ofstream f(p);
  if (!f) fail(Errc::config, "cannot write " + p.string());
  f << j.dump(2) << "\n";
}

void log(const std::string& s) { std::fprintf(stderr, "%s\n", s.c_str()); }

std::vector<double> snapshot_times(double every, double T) {
  std::vector<double> t;
  if (every <= 0) every = T;
  const long n = std::lround(std::floor(T / every + 1e-9));
  for (long i = 0; i <= n; ++i) t.push_back(double(i) * every);
  if (T - t.back() > 1e-9 * T) t.push_back(T);
  return t;
}

SparseHamiltonian build_tb(const RunConfig& cfg, const SupercellIndex& cell) {
  const auto& m = cfg.model;
  if (m.family == "bilayer") return assemble_bilayer(cell, m.delta, m.omega, m.gamma, m.mass);
  return assemble(build_trig_symbol(cfg, cell.geometry()), cell, m.delta);
}

json plan(const RunConfig& cfg, const SupercellIndex& cell) {
  const Vec2 box = macro_box(cell, cfg.model.delta);
  const double h = cfg.integrator.h_tb;
  return {{"sites", cell.size()},
          {"Lx", cell.Lx()},
          {"Ly", cell.Ly()},
          {"macro_box", {box.x(), box.y()}},
          {"tb_steps", std::llround(cfg.integrator.T / h)},
          {"continuum_steps", std::llround(cfg.integrator.T / cfg.integrator.h_c)},
          {"snapshots", snapshot_times(cfg.integrator.snapshot_every, cfg.integrator.T).size()}};
}

void write_norms(const fs::path& p, const std::vector<double>& t, const std::vector<double>& n, double n0) {
  std::ofstream f(p);
  f << "t,norm,drift\n";
  f.precision(17);
  for (std::size_t i = 0; i < t.size(); ++i) f << t[i] << "," << n[i] << "," << std::abs(n[i] - n0) << "\n";
}

// --- subcommands --------------------------------------------------------------------------------

int cmd_geometry(const Common& c) {
  const RunConfig cfg = load_config(c);
  const SupercellIndex cell = build_cell(cfg);
  json j = {{"geometry", to_json(cell.geometry())}, {"cell", cell.to_json()}, {"config", cfg.to_json()}};
  if (c.dry_run) {
    std::cout << plan(cfg, cell).dump(2) << "\n";
    return ok;
  }
  const fs::path d = out_dir(c, cfg);
  write_json(d / "geometry.json", j);
  write_json(d / "config.json", cfg.to_json());
  std::cout << to_json(cell.geometry()).dump(2) << "\n";
  return ok;
}

int cmd_simulate_tb(const Common& c) {
  const RunConfig cfg = load_config(c);
  const SupercellIndex cell = build_cell(cfg);
  if (c.dry_run) {
    std::cout << json{{"config", cfg.to_json()}, {"plan", plan(cfg, cell)}}.dump(2) << "\n";
    return ok;
  }
  const fs::path d = out_dir(c, cfg);
  write_json(d / "config.json", cfg.to_json());
  const Packet pk = build_packet(cfg, cell);
  const SparseHamiltonian H = build_tb(cfg, cell);
  const auto& in = cfg.integrator;
  const fs::path ck = d / "tb_checkpoints.bin";
  fs::remove(ck);
  if (cfg.output.checkpoints) write_sidecar((d / "tb_checkpoints.json").string(), cell.to_json());
  Rk4Options o;
  o.sample_times = snapshot_times(in.snapshot_every, in.T);
  o.store_states = false;
  o.observer = [&](double t, const CVec& psi) {
    if (cfg.output.checkpoints) append_checkpoint(ck.string(), t, psi);
    log("t = " + std::to_string(t));
  };
  const TbTrajectory tr = rk4_propagate(H, pk.lattice, in.h_tb, in.T, o);
  write_norms(d / "tb_norms.csv", tr.times, tr.norms, tr.norm0);
  json rep = {{"sites", cell.size()}, {"steps", tr.steps}, {"max_norm_drift", tr.max_norm_drift},
              {"packet", pk.metadata}};
  write_json(d / "tb_report.json", rep);
  std::cout << rep.dump(2) << "\n";
  return ok;
}

int cmd_simulate_continuum(const Common& c) {
  const RunConfig cfg = load_config(c);
  const SupercellIndex cell = build_cell(cfg);
  if (c.dry_run) {
    std::cout << json{{"config", cfg.to_json()}, {"plan", plan(cfg, cell)}}.dump(2) << "\n";
    return ok;
  }
  const fs::path d = out_dir(c, cfg);
  write_json(d / "config.json", cfg.to_json());
  const Packet pk = build_packet(cfg, cell);
  const double delta = cfg.model.delta;
  const PolySymbol b = build_effective(cfg, cell.geometry(), cfg.model.order);
  const auto& in = cfg.integrator;
  std::vector<double> times;
  for (double t : snapshot_times(in.snapshot_every, in.T)) times.push_back(delta * t);
  ContinuumOptions o;
  o.sample_times = times;
  o.store_states = false;
  int idx = 0;
  o.observer = [&](double t, const SpectralField& phi) {
    if (cfg.output.checkpoints) phi.save((d / ("continuum_" + std::to_string(idx))).string(), t);
    ++idx;
    log("T = " + std::to_string(t));
  };
  const ContinuumTrajectory tr = propagate_continuum(b, pk.phi, delta * in.h_c, delta * in.T, o);
  write_norms(d / "continuum_norms.csv", tr.times, tr.norms, tr.norm0);
  json rep = {{"order", cfg.model.order}, {"steps", tr.steps}, {"max_norm_drift", tr.max_norm_drift},
              {"metadata", tr.metadata}, {"packet", pk.metadata}};
  write_json(d / "continuum_report.json", rep);
  std::cout << rep.dump(2) << "\n";
  return ok;
}

int cmd_compare(const Common& c) {
  const RunConfig cfg = load_config(c);
  const SupercellIndex cell = build_cell(cfg);
  if (c.dry_run) {
    std::cout << json{{"config", cfg.to_json()}, {"plan", plan(cfg, cell)}}.dump(2) << "\n";
    return ok;
  }
  const fs::path d = out_dir(c, cfg);
  write_json(d / "config.json", cfg.to_json());
  const Packet pk = build_packet(cfg, cell);
  const double delta = cfg.model.delta;
  const auto& in = cfg.integrator;
  const std::vector<double> ts = snapshot_times(in.snapshot_every, in.T);
  std::vector<double> Ts;
  for (double t : ts) Ts.push_back(delta * t);
  const PolySymbol b = build_effective(cfg, cell.geometry(), cfg.model.order);
  const ContinuumTrajectory cont = propagate_continuum(b, pk.phi, delta * in.h_c, delta * in.T, {Ts, true, {}});
  log("continuum done, drift " + std::to_string(cont.max_norm_drift));
  const LiftConfig lc = build_lift(cfg, cell.geometry());
  ErrorTracker tracker(cell, lc, cont);
  const SparseHamiltonian H = build_tb(cfg, cell);
  Rk4Options o;
  o.sample_times = ts;
  o.store_states = false;
  o.observer = [&](double t, const CVec& psi) { tracker(t, psi); };
  const TbTrajectory tb = rk4_propagate(H, pk.lattice, in.h_tb, in.T, o);
  const ErrorSeries& es = tracker.series();
  es.write_csv((d / "error_series.csv").string());
  json rep = {{"order", cfg.model.order},
              {"times", es.times},
              {"E", es.E},
              {"tb_norm_drift", tb.max_norm_drift},
              {"continuum_norm_drift", cont.max_norm_drift},
              {"metadata", es.metadata}};
  write_json(d / "compare_report.json", rep);
  std::cout << rep.dump(2) << "\n";
  return ok;
}

int cmd_scan(const Common& c) {
  const RunConfig cfg = load_config(c);
  const auto& s = cfg.scan;
  BilayerScanSpec spec;
  spec.v = cfg.model.v;
  spec.omega_hat = s.omega_hat;
  spec.gamma_hat = s.gamma_hat;
  // one cosine period across the box keeps the gate periodic for every delta
  spec.gate_profile = [](const Vec2& box) { return Field::cosine(Vec2(0.0, 2 * pi / box.y()), 1.0); };
  spec.box_X = s.box_X;
  spec.box_Y = s.box_Y;
  spec.sigma = s.sigma;
  spec.amplitudes = random_amplitudes(4, cfg.seed);
  spec.Kx = s.Kx;
  spec.Ky = s.Ky;
  spec.h_tb = cfg.integrator.h_tb;
  spec.continuum_substeps = s.substeps;
  spec.T_factor = s.T_factor;
  spec.n_samples = s.n_samples;
  spec.control_run = s.control_run;
  if (c.dry_run) {
    json cells = json::array();
    for (double dl : s.delta_list) cells.push_back({{"delta", dl}, {"sites", scan_cell(dl, spec.v, s.box_X, s.box_Y).size()}});
    std::cout << json{{"config", cfg.to_json()}, {"cells", cells}}.dump(2) << "\n";
    return ok;
  }
  const fs::path d = out_dir(c, cfg);
  write_json(d / "config.json", cfg.to_json());
  const ScanResult r = convergence_scan(spec, s.p_list, s.delta_list, log);
  r.write_csv((d / "fits.csv").string(), (d / "exponents.csv").string());
  json fits = json::array();
  for (const auto& f : r.fits) fits.push_back({{"p", f.p}, {"q", f.q}, {"residual", f.residual}, {"flagged", f.flagged}});
  std::cout << json{{"fits", fits}}.dump(2) << "\n";
  return ok;
}

int cmd_edge_bands(const Common& c) {
  const RunConfig cfg = load_config(c);
  if (c.dry_run) {
    std::cout << cfg.to_json().dump(2) << "\n";
    return ok;
  }
  const fs::path d = out_dir(c, cfg);
  write_json(d / "config.json", cfg.to_json());
  const EdgeSetup es = build_edge_setup(cfg, honeycomb_geometry(cfg.model.v));
  es.spectrum.write_csv((d / "edge_bands.csv").string());
  auto window = [](const std::optional<EdgeWindow>& w, double v) {
    if (!w) return json(nullptr);
    return json{{"band", w->band}, {"k_lo", w->k_lo}, {"k_hi", w->k_hi}, {"velocity", v}};
  };
  json rep = {{"bulk_gap", es.spectrum.bulk_gap},
              {"k_points", es.spectrum.k1.size()},
              {"fast", window(es.windows.fast, es.windows.fast_velocity)},
              {"slow", window(es.windows.slow, es.windows.slow_velocity)}};
  write_json(d / "edge_report.json", rep);
  std::cout << rep.dump(2) << "\n";
  return ok;
}

struct BdiArgs {
  std::string family = "dirac1";
  double h = 0.0, alpha = 1.0, delta = 0.1;
};

int cmd_bdi(const Common& c, const BdiArgs& a) {
  VectorField3 F;
  if (a.family == "dirac1")
    F = dirac1_field(1.0, 1.0, a.delta);
  else if (a.family == "gauge" || a.family == "haldane-gauge")
    F = haldane_gauge_family(a.h, a.delta);
  else if (a.family == "regularized")
    F = regularized_field(a.alpha, a.delta);
  else
    fail(Errc::config, "bdi: unknown family '" + a.family + "'");
  if (c.dry_run) {
    std::cout << json{{"family", F.name}}.dump() << "\n";
    return ok;
  }
  const BDIResult r = bdi(F);
  json j = r.to_json();
  j["family"] = F.name;
  if (!c.out.empty()) {
    fs::create_directories(c.out);
    write_json(fs::path(c.out) / "bdi.json", j);
  }
  std::cout << j.dump(2) << "\n";
  return ok;
}

int exit_code(Errc e) {
  switch (e) {
    case Errc::config:
    case Errc::invalid_config: return config_error;
    case Errc::numerical_abort: return numerical;
    case Errc::degenerate_zero: return undefined_invariant;
    default: return generic;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tight-binding and effective continuum wave-packet simulations"};
  app.require_subcommand(1);
  Common common;
  BdiArgs bargs;
  auto add_common = [&](CLI::App* sub, bool needs_config) {
    auto* opt = sub->add_option("--config", common.config_path, "JSON run configuration")->check(CLI::ExistingFile);
    if (needs_config) opt->required();
    sub->add_option("--out", common.out, "output directory (default: output.directory of the config)");
    sub->add_option("--threads", common.threads, "cap on worker threads (0: runtime default)")->check(CLI::NonNegativeNumber);
    sub->add_flag("--dry-run", common.dry_run, "validate the configuration and report the planned work");
  };
  std::map<std::string, std::function<int()>> handlers;
  auto reg = [&](const std::string& name, const std::string& help, bool needs_config, std::function<int()> fn) {
    CLI::App* sub = app.add_subcommand(name, help);
    add_common(sub, needs_config);
    handlers[name] = std::move(fn);
    return sub;
  };
  reg("geometry", "dump lattice geometry and supercell", false, [&] { return cmd_geometry(common); });
  reg("simulate-tb", "RK4 tight-binding propagation", true, [&] { return cmd_simulate_tb(common); });
  reg("simulate-continuum", "splitting propagation of the effective equation", true,
      [&] { return cmd_simulate_continuum(common); });
  reg("compare", "propagate both models and write the error series", true, [&] { return cmd_compare(common); });
  reg("scan", "convergence scan over p and delta", false, [&] { return cmd_scan(common); });
  reg("edge-bands", "edge band structure on a straight interface", false, [&] { return cmd_edge_bands(common); });
  CLI::App* b = reg("bdi", "bulk-difference invariant of an effective symbol family", false,
                    [&] { return cmd_bdi(common, bargs); });
  b->set_help_flag("--help", "Print this help message and exit");
  b->add_option("--family", bargs.family, "dirac1 | haldane-gauge (gauge) | regularized")
      ->check(CLI::IsMember({"dirac1", "gauge", "haldane-gauge", "regularized"}));
  b->add_option("--h", bargs.h, "gauge parameter");
  b->add_option("--alpha", bargs.alpha, "regularization strength");
  b->add_option("--delta", bargs.delta, "scale parameter")->check(CLI::PositiveNumber);
  // positional family name: `bdi haldane-gauge --h 0`
  b->add_option("family_name", bargs.family)->check(CLI::IsMember({"dirac1", "gauge", "haldane-gauge", "regularized"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? ok : config_error;
  }
#ifdef _OPENMP
  if (common.threads > 0) omp_set_num_threads(common.threads);
#endif
  try {
    for (CLI::App* sub : app.get_subcommands()) return handlers.at(sub->get_name())();
  } catch (const Error& e) {
    std::fprintf(stderr, "error [%s]: %s\n", errc_name(e.code()), e.what());
    return exit_code(e.code());
  } catch (const nlohmann::json::exception& e) {
    std::fprintf(stderr, "error [config]: %s\n", e.what());
    return config_error;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return generic;
  }
  return generic;
}
