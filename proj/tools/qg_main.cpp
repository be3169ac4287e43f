// qg: pseudo-spectral simulator and dyadic-analysis toolkit for the
// dissipative surface quasi-geostrophic equation on the periodic square.
//
//   qg simulate   time-step the equation, write diagnostics / checkpoints
//   qg analyze    shell spectrum + decay-exponent fit for a stored snapshot
//   qg bootstrap  run the exponent-improvement iteration for (alpha, delta, p)
//   qg verify     randomized checks of the functional inequalities
//
// Exit codes: 0 success, 1 usage/config/check failure, 2 resolution exceeded.

#include <cinttypes>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "qg/hash.hpp"
#include "qg/qg.hpp"
#include "qg/version.hpp"

namespace {

using namespace qg;

void print_usage() {
  std::fprintf(stderr,
               "usage: qg <simulate|analyze|bootstrap|verify> [--config FILE] [flags]\n"
               "\n"
               "common flags: --seed N --output-dir DIR\n"
               "simulate:  --n --dt --t-end --alpha [--kappa --cfl-safety --diag-interval\n"
               "           --checkpoint-interval --ic --ic-amplitude --ic-k1 --ic-k2\n"
               "           --ic-kmin --ic-kmax --ic-slope --ic-delta --ic-jlo --ic-jhi\n"
               "           --monitor --monitor-alpha --fit-drop-low --fit-drop-high]\n"
               "analyze:   --snapshot FILE --alpha A [--fit-drop-low --fit-drop-high]\n"
               "bootstrap: --alpha A --delta D --p P\n"
               "verify:    [--suite NAME --trials N --n N --alpha A --p P --q Q\n"
               "           --delta D --j J]\n");
}

struct FlagSpec {
  const char* key;
  bool takes_value;
};

std::map<std::string, FlagSpec> flag_table(Mode mode) {
  std::map<std::string, FlagSpec> t = {
      {"--seed", {"seed", true}},
      {"--output-dir", {"output_dir", true}},
  };
  switch (mode) {
    case Mode::simulate:
      t["--kappa"] = {"solver.kappa", true};
      t["--alpha"] = {"solver.alpha", true};
      t["--n"] = {"solver.n", true};
      t["--dt"] = {"solver.dt", true};
      t["--t-end"] = {"solver.t_end", true};
      t["--cfl-safety"] = {"solver.cfl_safety", true};
      t["--diag-interval"] = {"solver.diag_interval", true};
      t["--checkpoint-interval"] = {"solver.checkpoint_interval", true};
      t["--ic"] = {"initial_condition.name", true};
      t["--ic-amplitude"] = {"initial_condition.amplitude", true};
      t["--ic-k1"] = {"initial_condition.k1", true};
      t["--ic-k2"] = {"initial_condition.k2", true};
      t["--ic-kmin"] = {"initial_condition.k_min", true};
      t["--ic-kmax"] = {"initial_condition.k_max", true};
      t["--ic-slope"] = {"initial_condition.slope", true};
      t["--ic-delta"] = {"initial_condition.delta", true};
      t["--ic-jlo"] = {"initial_condition.j_lo", true};
      t["--ic-jhi"] = {"initial_condition.j_hi", true};
      t["--monitor"] = {"monitor.enabled", false};
      t["--monitor-alpha"] = {"monitor.alpha", true};
      t["--fit-drop-low"] = {"monitor.drop_low", true};
      t["--fit-drop-high"] = {"monitor.drop_high", true};
      break;
    case Mode::analyze:
      t["--snapshot"] = {"analyze.snapshot", true};
      t["--alpha"] = {"analyze.alpha", true};
      t["--fit-drop-low"] = {"analyze.drop_low", true};
      t["--fit-drop-high"] = {"analyze.drop_high", true};
      break;
    case Mode::bootstrap:
      t["--alpha"] = {"bootstrap.alpha", true};
      t["--delta"] = {"bootstrap.delta", true};
      t["--p"] = {"bootstrap.p", true};
      break;
    case Mode::verify:
      t["--suite"] = {"verify.suite", true};
      t["--trials"] = {"verify.trials", true};
      t["--n"] = {"verify.n", true};
      t["--alpha"] = {"verify.alpha", true};
      t["--p"] = {"verify.p", true};
      t["--q"] = {"verify.q", true};
      t["--delta"] = {"verify.delta", true};
      t["--j"] = {"verify.j", true};
      break;
  }
  return t;
}

std::string out_path(const RunConfig& cfg, const std::string& name) {
  return (std::filesystem::path(cfg.output_dir) / name).string();
}

nlohmann::ordered_json resolved_json(const RunConfig& cfg) {
  nlohmann::ordered_json j;
  j["mode"] = to_string(cfg.mode);
  j["seed"] = cfg.seed;
  j["output_dir"] = cfg.output_dir;
  switch (cfg.mode) {
    case Mode::simulate:
      j["solver.kappa"] = cfg.solver.phys.kappa;
      j["solver.alpha"] = cfg.solver.phys.alpha;
      j["solver.n"] = cfg.solver.n;
      j["solver.dt"] = cfg.solver.dt;
      j["solver.t_end"] = cfg.solver.t_end;
      j["solver.cfl_safety"] = cfg.solver.cfl_safety;
      j["solver.diag_interval"] = cfg.solver.diag_interval;
      j["solver.checkpoint_interval"] = cfg.solver.checkpoint_interval;
      j["initial_condition.name"] = cfg.ic.name;
      j["initial_condition.amplitude"] = cfg.ic.amplitude;
      j["initial_condition.k1"] = cfg.ic.k1;
      j["initial_condition.k2"] = cfg.ic.k2;
      j["initial_condition.k_min"] = cfg.ic.k_min;
      j["initial_condition.k_max"] = cfg.ic.k_max;
      j["initial_condition.slope"] = cfg.ic.slope;
      j["initial_condition.delta"] = cfg.ic.delta;
      j["initial_condition.j_lo"] = cfg.ic.j_lo;
      j["initial_condition.j_hi"] = cfg.ic.j_hi;
      j["monitor.enabled"] = cfg.monitor_enabled;
      j["monitor.alpha"] = cfg.monitor_alpha;
      j["monitor.drop_low"] = cfg.fit.drop_low;
      j["monitor.drop_high"] = cfg.fit.drop_high;
      break;
    case Mode::analyze:
      j["analyze.snapshot"] = cfg.analyze_snapshot;
      j["analyze.alpha"] = cfg.analyze_alpha;
      j["analyze.drop_low"] = cfg.fit.drop_low;
      j["analyze.drop_high"] = cfg.fit.drop_high;
      break;
    case Mode::bootstrap:
      j["bootstrap.alpha"] = cfg.boot.alpha;
      j["bootstrap.delta"] = cfg.boot.delta;
      j["bootstrap.p"] = cfg.boot.p;
      break;
    case Mode::verify:
      j["verify.suite"] = cfg.verify_suite;
      j["verify.trials"] = cfg.verify_trials;
      j["verify.n"] = cfg.verify_n;
      j["verify.alpha"] = cfg.verify_alpha;
      j["verify.p"] = cfg.verify_p;
      j["verify.q"] = cfg.verify_q;
      j["verify.delta"] = cfg.verify_delta;
      j["verify.j"] = cfg.verify_j;
      break;
  }
  return j;
}

void write_manifest(const RunConfig& cfg, const std::map<std::string, std::string>& input_hashes) {
  nlohmann::ordered_json j;
  j["tool"] = "qg";
  j["version"] = version;
  j["resolved"] = resolved_json(cfg);
  j["inputs"] = nlohmann::ordered_json::object();
  for (const auto& [name, sha] : input_hashes) j["inputs"][name] = sha;
  write_text_file(out_path(cfg, "manifest.json"), j.dump(2) + "\n");
}

int run_simulate(const RunConfig& cfg) {
  Grid2D g = Grid2D::make(cfg.solver.n);
  SpectralField theta0 = make_initial_condition(g, cfg.ic, cfg.seed);

  std::ofstream diag_csv(out_path(cfg, "diagnostics.csv"));
  if (!diag_csv) throw Error("cannot open diagnostics.csv for writing");
  write_diagnostics_header(diag_csv);

  DyadicDecomposition decomp;
  std::vector<std::pair<double, ShellSpectrum>> monitor_series;
  if (cfg.monitor_enabled) decomp = DyadicDecomposition::build(g);

  RunCallbacks cb;
  cb.on_diag = [&](const SolverState& s, const DiagnosticsSample& d) {
    write_diagnostics_row(diag_csv, d);
    if (cfg.monitor_enabled) {
      double inf = std::numeric_limits<double>::infinity();
      monitor_series.push_back({s.time, shell_spectrum(decomp, s.theta, inf)});
    }
  };
  cb.on_checkpoint = [&](const SolverState& s) {
    char name[64];
    std::snprintf(name, sizeof name, "checkpoint_%06ld.qgf", s.step);
    std::string base = out_path(cfg, name);
    write_snapshot(base, to_real(s.theta), s.time);
    write_checkpoint_sidecar(base.substr(0, base.size() - 4) + ".json", cfg.solver.phys,
                             cfg.solver.dt, s.step, s.time);
  };

  RunResult res = run_simulation(cfg.solver, theta0, cb);
  diag_csv.close();

  if (cfg.monitor_enabled) {
    auto records = monitor_run(monitor_series, cfg.monitor_alpha, cfg.fit);
    std::ofstream mon(out_path(cfg, "monitor.csv"));
    if (!mon) throw Error("cannot open monitor.csv for writing");
    write_monitor_csv(records, mon);
  }

  if (res.status == "completed") {
    std::string base = out_path(cfg, "final.qgf");
    write_snapshot(base, to_real(res.state.theta), res.state.time);
    write_checkpoint_sidecar(out_path(cfg, "final.json"), cfg.solver.phys, cfg.solver.dt,
                             res.state.step, res.state.time);
  }

  nlohmann::ordered_json status;
  status["status"] = res.status;
  status["reason"] = res.reason;
  status["final_time"] = res.state.time;
  status["steps"] = res.state.step;
  status["cfl_exceeded"] = res.cfl_exceeded;
  write_text_file(out_path(cfg, "run_status.json"), status.dump(2) + "\n");

  const DiagnosticsSample& last = res.diagnostics.back();
  std::printf("simulate: %s at t=%s after %ld steps, l2=%s linf=%s\n", res.status.c_str(),
              fmt_g17(res.state.time).c_str(), res.state.step, fmt_g17(last.l2).c_str(),
              fmt_g17(last.linf).c_str());
  if (res.status != "completed") {
    std::fprintf(stderr, "simulate: resolution exceeded (%s) at t=%s\n", res.reason.c_str(),
                 fmt_g17(res.state.time).c_str());
    return 2;
  }
  return 0;
}

int run_analyze(const RunConfig& cfg) {
  double time = 0.0;
  SpectralField theta = load_snapshot_spectral(cfg.analyze_snapshot, &time);
  DyadicDecomposition decomp = DyadicDecomposition::build(theta.grid);
  double inf = std::numeric_limits<double>::infinity();
  ShellSpectrum spectrum = shell_spectrum(decomp, theta, inf);

  std::ofstream shells(out_path(cfg, "shells.csv"));
  if (!shells) throw Error("cannot open shells.csv for writing");
  write_shell_csv(spectrum, shells);

  auto records = monitor_run({{time, spectrum}}, cfg.analyze_alpha, cfg.fit);
  std::ofstream mon(out_path(cfg, "monitor.csv"));
  if (!mon) throw Error("cannot open monitor.csv for writing");
  write_monitor_csv(records, mon);

  const MonitorRecord& r = records.front();
  if (r.fit) {
    std::printf("analyze: t=%s delta_est=%s threshold=%s criterion=%s\n",
                fmt_g17(time).c_str(), fmt_g17(r.fit->delta_est).c_str(),
                fmt_g17(1.0 - 2.0 * cfg.analyze_alpha).c_str(), to_string(r.status));
    if (r.trace)
      std::printf("analyze: bootstrap p=%s steps=%zu terminated=%d\n",
                  fmt_g17(r.p_used).c_str(), r.trace->deltas.size(),
                  r.trace->terminated ? 1 : 0);
  } else {
    std::printf("analyze: t=%s criterion=insufficient (too few informative shells)\n",
                fmt_g17(time).c_str());
  }
  return 0;
}

int run_bootstrap(const RunConfig& cfg) {
  BootstrapTrace tr = bootstrap(cfg.boot);
  nlohmann::ordered_json j;
  j["alpha"] = tr.alpha;
  j["delta"] = tr.delta;
  j["p"] = tr.p;
  j["p0"] = tr.p0;
  j["p1"] = tr.p1;
  j["deltas"] = tr.deltas;
  j["terminated"] = tr.terminated;
  write_text_file(out_path(cfg, "bootstrap.json"), j.dump(2) + "\n");

  std::printf("bootstrap: p0=%s p1=%s\n", fmt_g17(tr.p0).c_str(), fmt_g17(tr.p1).c_str());
  std::printf("bootstrap: deltas =");
  for (double d : tr.deltas) std::printf(" %s", fmt_g17(d).c_str());
  std::printf("\nbootstrap: %s after %zu steps\n",
              tr.terminated ? "exponent escaped past 1" : "iteration capped", tr.deltas.size());
  return tr.terminated ? 0 : 1;
}

int run_verify(const RunConfig& cfg) {
  Grid2D g = Grid2D::make(cfg.verify_n);
  DyadicDecomposition decomp = DyadicDecomposition::build(g);
  TestCorpus corpus{cfg.seed, cfg.verify_n, cfg.verify_trials};
  int mid_lo = std::min(decomp.j_min + 1, decomp.j_max);
  int mid_hi = std::max(decomp.j_max - 1, decomp.j_min);

  std::vector<InequalityReport> reports;
  auto want = [&](const char* s) { return cfg.verify_suite == "all" || cfg.verify_suite == s; };

  if (want("bernstein_l2"))
    reports.push_back(
        check_bernstein_l2(corpus, decomp, cfg.verify_alpha, decomp.j_min, decomp.j_max));
  if (want("bernstein_lp_lq"))
    reports.push_back(
        check_bernstein_lp_lq(corpus, decomp, cfg.verify_p, cfg.verify_q, mid_lo, mid_hi));
  if (want("lower_bound"))
    reports.push_back(
        check_lower_bound(corpus, decomp, cfg.verify_alpha, cfg.verify_p, mid_lo, mid_hi));
  if (want("interpolation"))
    reports.push_back(check_interpolation(corpus, decomp, cfg.verify_delta, cfg.verify_p));
  if (want("velocity_domination"))
    reports.push_back(check_velocity_domination(corpus, decomp));
  if (want("paraproduct")) {
    int j_lo = decomp.j_min + 2, j_hi = decomp.j_max - 2;
    if (cfg.verify_j >= 0) j_lo = j_hi = cfg.verify_j;
    for (int j = j_lo; j <= j_hi; ++j)
      reports.push_back(check_paraproduct(corpus, decomp, j));
  }
  if (reports.empty()) throw ConfigError("no suite selected");

  long total_violations = 0;
  for (const auto& rep : reports) {
    std::string name = rep.name;
    if (rep.name == "paraproduct")
      name += "_j" + std::to_string(static_cast<int>(rep.params.at("j")));
    write_text_file(out_path(cfg, "report_" + name + ".json"), report_to_json(rep).dump(2) + "\n");
    std::printf("verify %s: trials=%ld violations=%ld ratio=[%s, %s]\n", name.c_str(), rep.trials,
                rep.violations, fmt_g17(rep.min_ratio).c_str(), fmt_g17(rep.max_ratio).c_str());
    total_violations += rep.violations;
  }
  if (total_violations > 0) {
    std::fprintf(stderr, "verify: %ld violation(s)\n", total_violations);
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    print_usage();
    return 1;
  }
  std::string first = argv[1];
  if (first == "-h" || first == "--help") {
    print_usage();
    return 0;
  }
  if (first == "--version") {
    std::printf("qg %s\n", qg::version);
    return 0;
  }

  try {
    Mode mode = parse_mode(first);
    auto flags = flag_table(mode);
    std::string config_path;
    std::vector<std::pair<std::string, std::string>> overrides;
    for (int i = 2; i < argc; ++i) {
      std::string arg = argv[i];
      if (arg == "--config") {
        if (i + 1 >= argc) throw ConfigError("--config needs a file argument");
        config_path = argv[++i];
        continue;
      }
      auto it = flags.find(arg);
      if (it == flags.end())
        throw ConfigError("unknown flag '" + arg + "' for mode " + to_string(mode));
      if (it->second.takes_value) {
        if (i + 1 >= argc) throw ConfigError("flag '" + arg + "' needs a value");
        overrides.push_back({it->second.key, argv[++i]});
      } else {
        overrides.push_back({it->second.key, "true"});
      }
    }

    std::string config_text;
    RawConfig raw;
    if (!config_path.empty()) {
      config_text = read_text_file(config_path);
      raw = parse_config_text(config_text);
    }
    const char* env_dir = std::getenv("QG_OUTPUT_DIR");
    RunConfig cfg = resolve_config(mode, raw, overrides, env_dir ? env_dir : "");

    std::filesystem::create_directories(cfg.output_dir);
    std::map<std::string, std::string> input_hashes;
    if (!config_path.empty()) input_hashes["config"] = git_blob_sha1(config_text);
    if (mode == Mode::analyze)
      input_hashes["snapshot"] = git_blob_sha1(read_text_file(cfg.analyze_snapshot));
    write_manifest(cfg, input_hashes);

    switch (mode) {
      case Mode::simulate: return run_simulate(cfg);
      case Mode::analyze: return run_analyze(cfg);
      case Mode::bootstrap: return run_bootstrap(cfg);
      case Mode::verify: return run_verify(cfg);
    }
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 1;
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
