#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>

#include "qg/builders.hpp"
#include "qg/config.hpp"
#include "qg/hash.hpp"
#include "qg/io.hpp"

using namespace qg;

namespace {

std::filesystem::path scratch_dir() {
  std::filesystem::path p = std::filesystem::temp_directory_path() / "qg_io_tests";
  std::filesystem::create_directories(p);
  return p;
}

std::string match_error(const std::function<void()>& f) {
  try {
    f();
  } catch (const std::exception& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("config text parsing tracks sections and line numbers") {
  std::string text =
      "# header comment\n"
      "seed = 7\n"
      "\n"
      "[solver]\n"
      "alpha = 0.3\n"
      "n = 64\n"
      "[initial_condition]\n"
      "name = random_band\n"
      "monitor.enabled = true\n";
  RawConfig raw = parse_config_text(text);
  REQUIRE(raw.entries.size() == 5);
  CHECK(raw.entries[0].key == "seed");
  CHECK(raw.entries[0].line == 2);
  CHECK(raw.entries[1].key == "solver.alpha");
  CHECK(raw.entries[1].value == "0.3");
  CHECK(raw.entries[1].line == 5);
  CHECK(raw.entries[2].key == "solver.n");
  CHECK(raw.entries[3].key == "initial_condition.name");
  // dotted keys pass through regardless of the active section
  CHECK(raw.entries[4].key == "monitor.enabled");
  CHECK(raw.entries[4].line == 9);
}

TEST_CASE("config text syntax errors carry their line") {
  CHECK(match_error([] { parse_config_text("a = 1\n[oops\n"); }).find("line 2") !=
        std::string::npos);
  CHECK(match_error([] { parse_config_text("[ ]\n"); }).find("empty section") !=
        std::string::npos);
  CHECK(match_error([] { parse_config_text("\n\njust words\n"); }).find("line 3") !=
        std::string::npos);
  CHECK(match_error([] { parse_config_text("= 3\n"); }).find("empty key") != std::string::npos);
  CHECK_THROWS_AS(parse_config_text("x\n"), ConfigError);
}

TEST_CASE("layering order is defaults, environment, file, flags") {
  RawConfig file = parse_config_text(
      "[solver]\nalpha = 0.3\nn = 64\ndt = 0.001\nt_end = 1\nkappa = 0.1\n");
  RunConfig base = resolve_config(Mode::simulate, file, {}, "env_dir");
  CHECK(base.output_dir == "env_dir");
  CHECK(base.solver.phys.kappa == 0.1);
  CHECK(base.solver.n == 64);

  RawConfig with_dir = parse_config_text(
      "output_dir = file_dir\n[solver]\nalpha = 0.3\nn = 64\ndt = 0.001\nt_end = 1\n");
  CHECK(resolve_config(Mode::simulate, with_dir, {}, "env_dir").output_dir == "file_dir");

  RunConfig flagged = resolve_config(Mode::simulate, with_dir,
                                     {{"output_dir", "flag_dir"}, {"solver.kappa", "0.5"}},
                                     "env_dir");
  CHECK(flagged.output_dir == "flag_dir");
  CHECK(flagged.solver.phys.kappa == 0.5);
}

TEST_CASE("bare keys resolve against the primary section of the mode") {
  RawConfig boot = parse_config_text("alpha = 0.4\ndelta = 0.3\np = 50\n");
  RunConfig cfg = resolve_config(Mode::bootstrap, boot, {}, "");
  CHECK(cfg.boot.alpha == 0.4);
  CHECK(cfg.boot.delta == 0.3);
  CHECK(cfg.boot.p == 50.0);

  RawConfig sim = parse_config_text("alpha = 0.25\nn = 64\ndt = 0.001\nt_end = 1\n");
  CHECK(resolve_config(Mode::simulate, sim, {}, "").solver.phys.alpha == 0.25);
}

TEST_CASE("unknown, misplaced and duplicate keys are rejected with context") {
  RawConfig unknown = parse_config_text("a = 1\nb = 2\n[solver]\nbogus = 3\n");
  std::string msg =
      match_error([&] { resolve_config(Mode::simulate, unknown, {}, ""); });
  CHECK(msg.find("line 1") != std::string::npos);
  CHECK(msg.find("unknown key") != std::string::npos);

  RawConfig misplaced = parse_config_text("[verify]\ntrials = 10\n");
  msg = match_error([&] { resolve_config(Mode::simulate, misplaced, {}, ""); });
  CHECK(msg.find("not valid in mode simulate") != std::string::npos);

  RawConfig dup = parse_config_text("[solver]\ndt = 0.1\ndt = 0.2\n");
  msg = match_error([&] { resolve_config(Mode::simulate, dup, {}, ""); });
  CHECK(msg.find("duplicate key") != std::string::npos);
  CHECK(msg.find("line 3") != std::string::npos);
  CHECK(msg.find("line 2") != std::string::npos);

  CHECK_THROWS_AS(resolve_config(Mode::simulate, {}, {{"verify.trials", "5"}}, ""), ConfigError);
}

TEST_CASE("a mode key must agree with the subcommand") {
  RawConfig agree = parse_config_text("mode = bootstrap\nalpha = 0.4\ndelta = 0.3\np = 50\n");
  CHECK(resolve_config(Mode::bootstrap, agree, {}, "").boot.p == 50.0);

  RawConfig clash = parse_config_text("mode = simulate\nalpha = 0.4\ndelta = 0.3\np = 50\n");
  std::string msg = match_error([&] { resolve_config(Mode::bootstrap, clash, {}, ""); });
  CHECK(msg.find("conflicts with subcommand") != std::string::npos);
}

TEST_CASE("each mode enforces its required keys") {
  RawConfig sim = parse_config_text("[solver]\nalpha = 0.3\nn = 64\ndt = 0.001\n");
  std::string msg = match_error([&] { resolve_config(Mode::simulate, sim, {}, ""); });
  CHECK(msg.find("missing required key 'solver.t_end'") != std::string::npos);

  CHECK_THROWS_AS(resolve_config(Mode::analyze, {}, {}, ""), ConfigError);
  CHECK_THROWS_AS(resolve_config(Mode::bootstrap, {}, {{"bootstrap.alpha", "0.4"}}, ""),
                  ConfigError);

  RunConfig verify = resolve_config(Mode::verify, {}, {}, "");
  CHECK(verify.verify_trials == 200);
  CHECK(verify.verify_n == 64);
  CHECK(verify.verify_suite == "all");
  CHECK(verify.verify_q == std::numeric_limits<double>::infinity());
  CHECK(verify.verify_j == -1);
}

TEST_CASE("value parsing failures name the offending key") {
  RawConfig bad_int = parse_config_text("[solver]\nn = sixty\nalpha = 0.3\ndt = 1\nt_end = 1\n");
  CHECK(match_error([&] { resolve_config(Mode::simulate, bad_int, {}, ""); })
            .find("expected integer") != std::string::npos);

  RawConfig bad_num = parse_config_text("alpha = x2\ndelta = 0.3\np = 50\n");
  CHECK(match_error([&] { resolve_config(Mode::bootstrap, bad_num, {}, ""); })
            .find("expected number") != std::string::npos);

  RawConfig bad_bool = parse_config_text(
      "[solver]\nalpha = 0.3\nn = 64\ndt = 1\nt_end = 1\n[monitor]\nenabled = maybe\n");
  CHECK(match_error([&] { resolve_config(Mode::simulate, bad_bool, {}, ""); })
            .find("expected true/false") != std::string::npos);

  RawConfig bad_suite = parse_config_text("suite = everything\n");
  CHECK(match_error([&] { resolve_config(Mode::verify, bad_suite, {}, ""); })
            .find("unknown suite") != std::string::npos);

  RawConfig inf_q = parse_config_text("q = inf\n");
  CHECK(resolve_config(Mode::verify, inf_q, {}, "").verify_q ==
        std::numeric_limits<double>::infinity());
}

TEST_CASE("monitor alpha defaults to the dissipation exponent") {
  RawConfig plain = parse_config_text("[solver]\nalpha = 0.35\nn = 64\ndt = 1\nt_end = 1\n");
  CHECK(resolve_config(Mode::simulate, plain, {}, "").monitor_alpha == 0.35);

  RawConfig explicit_alpha = parse_config_text(
      "[solver]\nalpha = 0.35\nn = 64\ndt = 1\nt_end = 1\n[monitor]\nalpha = 0.2\n");
  CHECK(resolve_config(Mode::simulate, explicit_alpha, {}, "").monitor_alpha == 0.2);
}

TEST_CASE("shortest-round-trip formatting is stable") {
  CHECK(fmt_g17(0.1) == "0.10000000000000001");
  CHECK(fmt_g17(1.0) == "1");
  CHECK(fmt_g17(std::numeric_limits<double>::quiet_NaN()) == "nan");
  double pi = 3.14159265358979323846;
  CHECK(std::stod(fmt_g17(pi)) == pi);
  CHECK(std::stod(fmt_g17(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("pseudorandom streams are reproducible across instances") {
  Rng a(12345), b(12345), c(54321);
  bool all_equal = true, any_diff = false;
  for (int i = 0; i < 16; ++i) {
    double ua = a.uniform();
    double ub = b.uniform();
    all_equal = all_equal && ua == ub;
    any_diff = any_diff || ua != c.uniform();
    CHECK(ua >= 0.0);
    CHECK(ua < 1.0);
  }
  CHECK(all_equal);
  CHECK(any_diff);
  Rng g(9);
  double mean = 0.0;
  for (int i = 0; i < 2000; ++i) mean += g.gauss();
  CHECK(std::abs(mean / 2000.0) < 0.1);
}

TEST_CASE("snapshots round trip bit for bit") {
  Grid2D g = Grid2D::make(32);
  Rng rng(3);
  RealField f = to_real(random_band_field(g, 1, 9, -1.0, 1.0, rng));
  std::filesystem::path path = scratch_dir() / "roundtrip.qgf";
  write_snapshot(path.string(), f, 1.5);
  CHECK(std::filesystem::file_size(path) == 4 + 4 + 8 + 32 * 32 * 8);

  Snapshot snap = read_snapshot(path.string());
  CHECK(snap.time == 1.5);
  REQUIRE(snap.field.grid.n == 32);
  for (std::size_t i = 0; i < f.samples.size(); ++i)
    CHECK(snap.field.samples[i] == f.samples[i]);
  std::filesystem::remove(path);
}

TEST_CASE("snapshot reader rejects malformed files") {
  std::filesystem::path dir = scratch_dir();
  CHECK(match_error([&] { read_snapshot((dir / "missing.qgf").string()); }).find("cannot open") !=
        std::string::npos);

  std::filesystem::path bad_magic = dir / "bad_magic.qgf";
  write_text_file(bad_magic.string(), "NOPE and some bytes");
  CHECK(match_error([&] { read_snapshot(bad_magic.string()); }).find("bad magic") !=
        std::string::npos);

  std::filesystem::path short_header = dir / "short_header.qgf";
  write_text_file(short_header.string(), std::string("QGF1\x20", 6));
  CHECK(match_error([&] { read_snapshot(short_header.string()); }).find("truncated header") !=
        std::string::npos);

  Grid2D g = Grid2D::make(32);
  std::filesystem::path short_payload = dir / "short_payload.qgf";
  write_snapshot(short_payload.string(), RealField::zeros(g), 0.0);
  std::filesystem::resize_file(short_payload, 4 + 4 + 8 + 100);
  CHECK(match_error([&] { read_snapshot(short_payload.string()); }).find("truncated payload") !=
        std::string::npos);

  for (const auto& p : {bad_magic, short_header, short_payload}) std::filesystem::remove(p);
}

TEST_CASE("loading a snapshot as coefficients drops the stored mean") {
  Grid2D g = Grid2D::make(32);
  RealField f = to_real(cosine_mode_field(g, 1, 0, 1.0));
  for (auto& s : f.samples) s += 0.5;
  std::filesystem::path path = scratch_dir() / "mean.qgf";
  write_snapshot(path.string(), f, 0.0);

  SpectralField spec = load_snapshot_spectral(path.string());
  CHECK(spec.mode(0, 0) == std::complex<double>(0.0, 0.0));
  CHECK(std::abs(spec.mode(1, 0) - std::complex<double>(0.5, 0.0)) < 1e-14);
  std::filesystem::remove(path);
}

TEST_CASE("checkpoint sidecars carry the restart parameters") {
  std::filesystem::path path = scratch_dir() / "sidecar.json";
  write_checkpoint_sidecar(path.string(), {0.1, 0.35}, 1e-3, 250, 0.25);
  nlohmann::json j = nlohmann::json::parse(read_text_file(path.string()));
  CHECK(j["kappa"] == 0.1);
  CHECK(j["alpha"] == 0.35);
  CHECK(j["dt"] == 1e-3);
  CHECK(j["step"] == 250);
  CHECK(j["time"] == 0.25);
  CHECK(read_text_file(path.string()).rfind("{\n  \"kappa\"", 0) == 0);
  std::filesystem::remove(path);
}

TEST_CASE("diagnostics rows are full-precision csv") {
  std::ostringstream os;
  write_diagnostics_header(os);
  DiagnosticsSample d;
  d.time = 0.1;
  d.l2 = 1.0;
  d.linf = 2.0;
  d.halpha_seminorm = 0.5;
  d.cfl_dt = 0.25;
  write_diagnostics_row(os, d);
  CHECK(os.str() ==
        "time,l2,linf,halpha_seminorm,cfl_dt\n"
        "0.10000000000000001,1,2,0.5,0.25\n");
}

TEST_CASE("content hashes match the git blob convention") {
  CHECK(git_blob_sha1("") == "e69de29bb2d1d6434b8b29ae775ad8c2e48c5391");
  CHECK(git_blob_sha1("hello\n") == "ce013625030ba8dba906f756967f9e9ca394464a");
}

TEST_CASE("text files round trip") {
  std::filesystem::path path = scratch_dir() / "note.txt";
  write_text_file(path.string(), "line one\nline two\n");
  CHECK(read_text_file(path.string()) == "line one\nline two\n");
  CHECK_THROWS_AS(read_text_file((scratch_dir() / "absent.txt").string()), Error);
  std::filesystem::remove(path);
}
