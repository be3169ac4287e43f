#pragma once

#include <cctype>
#include <cstdint>
#include <limits>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "qg/regularity.hpp"
#include "qg/solver.hpp"
#include "qg/util.hpp"

namespace qg {

enum class Mode { simulate, analyze, bootstrap, verify };

inline const char* to_string(Mode m) {
  switch (m) {
    case Mode::simulate: return "simulate";
    case Mode::analyze: return "analyze";
    case Mode::bootstrap: return "bootstrap";
    default: return "verify";
  }
}

inline Mode parse_mode(const std::string& s) {
  if (s == "simulate") return Mode::simulate;
  if (s == "analyze") return Mode::analyze;
  if (s == "bootstrap") return Mode::bootstrap;
  if (s == "verify") return Mode::verify;
  throw ConfigError("unknown mode '" + s + "' (expected simulate, analyze, bootstrap or verify)");
}

// Fully resolved run description.  Flat on purpose: one struct the whole tool
// reads, filled in layers (defaults, then file, then flags).
struct RunConfig {
  Mode mode = Mode::simulate;
  std::uint64_t seed = 0;
  std::string output_dir = ".";

  SolverConfig solver;
  IcParams ic;
  bool monitor_enabled = false;
  double monitor_alpha = std::numeric_limits<double>::quiet_NaN();
  FitWindow fit;

  std::string analyze_snapshot;
  double analyze_alpha = std::numeric_limits<double>::quiet_NaN();

  BootstrapParams boot;

  std::string verify_suite = "all";
  int verify_trials = 200;
  int verify_n = 64;
  double verify_alpha = 0.3;
  double verify_p = 4.0;
  double verify_q = std::numeric_limits<double>::infinity();
  double verify_delta = 0.4;
  int verify_j = -1;  // paraproduct output shell; -1 sweeps all admissible

  std::set<std::string> set_keys;  // canonical keys explicitly provided
};

struct ConfigEntry {
  std::string key;  // as written: bare or section.key
  std::string value;
  int line = 0;
};

struct RawConfig {
  std::vector<ConfigEntry> entries;
};

namespace detail {

inline std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

inline long long parse_int(const std::string& v, const std::string& ctx) {
  std::size_t pos = 0;
  long long out = 0;
  try {
    out = std::stoll(v, &pos);
  } catch (const std::exception&) {
    throw ConfigError(ctx + ": expected integer, got '" + v + "'");
  }
  if (pos != v.size()) throw ConfigError(ctx + ": expected integer, got '" + v + "'");
  return out;
}

inline std::uint64_t parse_u64(const std::string& v, const std::string& ctx) {
  std::size_t pos = 0;
  std::uint64_t out = 0;
  try {
    out = std::stoull(v, &pos);
  } catch (const std::exception&) {
    throw ConfigError(ctx + ": expected unsigned integer, got '" + v + "'");
  }
  if (pos != v.size()) throw ConfigError(ctx + ": expected unsigned integer, got '" + v + "'");
  return out;
}

inline double parse_double(const std::string& v, const std::string& ctx) {
  if (v == "inf") return std::numeric_limits<double>::infinity();
  std::size_t pos = 0;
  double out = 0.0;
  try {
    out = std::stod(v, &pos);
  } catch (const std::exception&) {
    throw ConfigError(ctx + ": expected number, got '" + v + "'");
  }
  if (pos != v.size()) throw ConfigError(ctx + ": expected number, got '" + v + "'");
  return out;
}

inline bool parse_bool(const std::string& v, const std::string& ctx) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw ConfigError(ctx + ": expected true/false, got '" + v + "'");
}

}  // namespace detail

// key = value lines with optional [section] headers and # comments; a bare
// key belongs to the most recent section, or to the top level before any
inline RawConfig parse_config_text(const std::string& text) {
  RawConfig raw;
  std::string section;
  int line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    std::string line = text.substr(start, end == std::string::npos ? std::string::npos : end - start);
    start = end == std::string::npos ? text.size() + 1 : end + 1;
    ++line_no;
    std::string t = detail::trim(line);
    if (t.empty() || t[0] == '#') continue;
    if (t[0] == '[') {
      if (t.back() != ']' || t.size() < 3)
        throw ConfigError("line " + std::to_string(line_no) + ": bad section header '" + t + "'");
      section = detail::trim(t.substr(1, t.size() - 2));
      if (section.empty())
        throw ConfigError("line " + std::to_string(line_no) + ": empty section name");
      continue;
    }
    std::size_t eq = t.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(line_no) + ": expected key = value, got '" + t +
                        "'");
    std::string key = detail::trim(t.substr(0, eq));
    std::string value = detail::trim(t.substr(eq + 1));
    if (key.empty()) throw ConfigError("line " + std::to_string(line_no) + ": empty key");
    if (key.find('.') == std::string::npos && !section.empty()) key = section + "." + key;
    raw.entries.push_back({key, value, line_no});
  }
  return raw;
}

namespace detail {

inline const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "mode", "seed", "output_dir",
      "solver.kappa", "solver.alpha", "solver.n", "solver.dt", "solver.t_end",
      "solver.cfl_safety", "solver.diag_interval", "solver.checkpoint_interval",
      "initial_condition.name", "initial_condition.amplitude", "initial_condition.k1",
      "initial_condition.k2", "initial_condition.k_min", "initial_condition.k_max",
      "initial_condition.slope", "initial_condition.delta", "initial_condition.j_lo",
      "initial_condition.j_hi",
      "monitor.enabled", "monitor.alpha", "monitor.drop_low", "monitor.drop_high",
      "analyze.snapshot", "analyze.alpha", "analyze.drop_low", "analyze.drop_high",
      "bootstrap.alpha", "bootstrap.delta", "bootstrap.p",
      "verify.suite", "verify.trials", "verify.n", "verify.alpha", "verify.p", "verify.q",
      "verify.delta", "verify.j",
  };
  return keys;
}

inline const char* primary_section(Mode m) {
  switch (m) {
    case Mode::simulate: return "solver";
    case Mode::analyze: return "analyze";
    case Mode::bootstrap: return "bootstrap";
    default: return "verify";
  }
}

inline bool key_valid_in_mode(const std::string& key, Mode m) {
  std::string section = key.substr(0, key.find('.'));
  if (section == key) return true;  // top-level keys are mode-agnostic
  switch (m) {
    case Mode::simulate:
      return section == "solver" || section == "initial_condition" || section == "monitor";
    case Mode::analyze: return section == "analyze";
    case Mode::bootstrap: return section == "bootstrap";
    default: return section == "verify";
  }
}

// bare keys resolve against the mode's primary section first, then top level
inline std::string canonicalize(const std::string& key, Mode m) {
  if (key.find('.') != std::string::npos) return key;
  std::string sectioned = std::string(primary_section(m)) + "." + key;
  if (known_keys().count(sectioned)) return sectioned;
  return key;
}

inline void apply_value(RunConfig& cfg, const std::string& key, const std::string& v,
                        const std::string& ctx) {
  if (key == "mode") {
    if (parse_mode(v) != cfg.mode)
      throw ConfigError(ctx + ": mode '" + v + "' conflicts with subcommand '" +
                        to_string(cfg.mode) + "'");
  } else if (key == "seed") {
    cfg.seed = parse_u64(v, ctx);
  } else if (key == "output_dir") {
    cfg.output_dir = v;
  } else if (key == "solver.kappa") {
    cfg.solver.phys.kappa = parse_double(v, ctx);
  } else if (key == "solver.alpha") {
    cfg.solver.phys.alpha = parse_double(v, ctx);
  } else if (key == "solver.n") {
    cfg.solver.n = static_cast<int>(parse_int(v, ctx));
  } else if (key == "solver.dt") {
    cfg.solver.dt = parse_double(v, ctx);
  } else if (key == "solver.t_end") {
    cfg.solver.t_end = parse_double(v, ctx);
  } else if (key == "solver.cfl_safety") {
    cfg.solver.cfl_safety = parse_double(v, ctx);
  } else if (key == "solver.diag_interval") {
    cfg.solver.diag_interval = static_cast<int>(parse_int(v, ctx));
  } else if (key == "solver.checkpoint_interval") {
    cfg.solver.checkpoint_interval = static_cast<int>(parse_int(v, ctx));
  } else if (key == "initial_condition.name") {
    cfg.ic.name = v;
  } else if (key == "initial_condition.amplitude") {
    cfg.ic.amplitude = parse_double(v, ctx);
  } else if (key == "initial_condition.k1") {
    cfg.ic.k1 = static_cast<int>(parse_int(v, ctx));
  } else if (key == "initial_condition.k2") {
    cfg.ic.k2 = static_cast<int>(parse_int(v, ctx));
  } else if (key == "initial_condition.k_min") {
    cfg.ic.k_min = static_cast<int>(parse_int(v, ctx));
  } else if (key == "initial_condition.k_max") {
    cfg.ic.k_max = static_cast<int>(parse_int(v, ctx));
  } else if (key == "initial_condition.slope") {
    cfg.ic.slope = parse_double(v, ctx);
  } else if (key == "initial_condition.delta") {
    cfg.ic.delta = parse_double(v, ctx);
  } else if (key == "initial_condition.j_lo") {
    cfg.ic.j_lo = static_cast<int>(parse_int(v, ctx));
  } else if (key == "initial_condition.j_hi") {
    cfg.ic.j_hi = static_cast<int>(parse_int(v, ctx));
  } else if (key == "monitor.enabled") {
    cfg.monitor_enabled = parse_bool(v, ctx);
  } else if (key == "monitor.alpha") {
    cfg.monitor_alpha = parse_double(v, ctx);
  } else if (key == "monitor.drop_low" || key == "analyze.drop_low") {
    cfg.fit.drop_low = static_cast<int>(parse_int(v, ctx));
  } else if (key == "monitor.drop_high" || key == "analyze.drop_high") {
    cfg.fit.drop_high = static_cast<int>(parse_int(v, ctx));
  } else if (key == "analyze.snapshot") {
    cfg.analyze_snapshot = v;
  } else if (key == "analyze.alpha") {
    cfg.analyze_alpha = parse_double(v, ctx);
  } else if (key == "bootstrap.alpha") {
    cfg.boot.alpha = parse_double(v, ctx);
  } else if (key == "bootstrap.delta") {
    cfg.boot.delta = parse_double(v, ctx);
  } else if (key == "bootstrap.p") {
    cfg.boot.p = parse_double(v, ctx);
  } else if (key == "verify.suite") {
    static const std::set<std::string> suites = {
        "all",           "bernstein_l2",        "bernstein_lp_lq", "lower_bound",
        "interpolation", "velocity_domination", "paraproduct"};
    if (!suites.count(v)) throw ConfigError(ctx + ": unknown suite '" + v + "'");
    cfg.verify_suite = v;
  } else if (key == "verify.trials") {
    cfg.verify_trials = static_cast<int>(parse_int(v, ctx));
  } else if (key == "verify.n") {
    cfg.verify_n = static_cast<int>(parse_int(v, ctx));
  } else if (key == "verify.alpha") {
    cfg.verify_alpha = parse_double(v, ctx);
  } else if (key == "verify.p") {
    cfg.verify_p = parse_double(v, ctx);
  } else if (key == "verify.q") {
    cfg.verify_q = parse_double(v, ctx);
  } else if (key == "verify.delta") {
    cfg.verify_delta = parse_double(v, ctx);
  } else if (key == "verify.j") {
    cfg.verify_j = static_cast<int>(parse_int(v, ctx));
  } else {
    throw ConfigError(ctx + ": unknown key '" + key + "'");
  }
}

}  // namespace detail

// Layered resolution: defaults, environment, config file, command-line
// overrides.  File problems carry line numbers; flag problems carry the flag
// name.  Unknown or misplaced keys are hard errors at every layer.
inline RunConfig resolve_config(Mode mode, const RawConfig& file,
                                const std::vector<std::pair<std::string, std::string>>& overrides,
                                const std::string& env_output_dir) {
  RunConfig cfg;
  cfg.mode = mode;
  if (!env_output_dir.empty()) cfg.output_dir = env_output_dir;

  std::vector<std::pair<std::string, int>> seen;  // canonical key, line
  for (const auto& e : file.entries) {
    std::string canonical = detail::canonicalize(e.key, mode);
    std::string ctx = "line " + std::to_string(e.line) + ": key '" + e.key + "'";
    if (!detail::known_keys().count(canonical))
      throw ConfigError(ctx + ": unknown key");
    if (!detail::key_valid_in_mode(canonical, mode))
      throw ConfigError(ctx + ": not valid in mode " + to_string(mode));
    for (const auto& [k, ln] : seen)
      if (k == canonical)
        throw ConfigError("line " + std::to_string(e.line) + ": duplicate key '" + e.key +
                          "' (already set on line " + std::to_string(ln) + ")");
    seen.push_back({canonical, e.line});
    detail::apply_value(cfg, canonical, e.value, ctx);
    cfg.set_keys.insert(canonical);
  }

  for (const auto& [flag_key, value] : overrides) {
    std::string canonical = detail::canonicalize(flag_key, mode);
    std::string ctx = "flag for key '" + canonical + "'";
    if (!detail::known_keys().count(canonical) || !detail::key_valid_in_mode(canonical, mode))
      throw ConfigError(ctx + ": unknown key");
    detail::apply_value(cfg, canonical, value, ctx);
    cfg.set_keys.insert(canonical);
  }

  auto require = [&](const char* key) {
    if (!cfg.set_keys.count(key))
      throw ConfigError(std::string("missing required key '") + key + "' for mode " +
                        to_string(mode));
  };
  switch (mode) {
    case Mode::simulate:
      require("solver.alpha");
      require("solver.n");
      require("solver.dt");
      require("solver.t_end");
      break;
    case Mode::analyze:
      require("analyze.snapshot");
      require("analyze.alpha");
      break;
    case Mode::bootstrap:
      require("bootstrap.alpha");
      require("bootstrap.delta");
      require("bootstrap.p");
      break;
    case Mode::verify: break;
  }

  if (std::isnan(cfg.monitor_alpha)) cfg.monitor_alpha = cfg.solver.phys.alpha;
  return cfg;
}

}  // namespace qg
