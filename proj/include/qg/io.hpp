#pragma once

#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <ostream>
#include <string>

#include <json.hpp>

#include "qg/field.hpp"
#include "qg/solver.hpp"
#include "qg/util.hpp"

namespace qg {

static_assert(std::endian::native == std::endian::little,
              "snapshot format is little-endian; byte-swapping is not implemented");

// Snapshot layout: magic "QGF1", u32 grid size, f64 time, then n*n f64
// real-space samples in row-major order (x2 fastest).
inline void write_snapshot(const std::string& path, const RealField& f, double time) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("snapshot: cannot open '" + path + "' for writing");
  os.write("QGF1", 4);
  std::uint32_t n = static_cast<std::uint32_t>(f.grid.n);
  os.write(reinterpret_cast<const char*>(&n), sizeof n);
  os.write(reinterpret_cast<const char*>(&time), sizeof time);
  os.write(reinterpret_cast<const char*>(f.samples.data()),
           static_cast<std::streamsize>(f.samples.size() * sizeof(double)));
  if (!os) throw Error("snapshot: write failed for '" + path + "'");
}

struct Snapshot {
  RealField field;
  double time = 0.0;
};

inline Snapshot read_snapshot(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error("snapshot: cannot open '" + path + "'");
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, "QGF1", 4) != 0)
    throw Error("snapshot: bad magic in '" + path + "'");
  std::uint32_t n = 0;
  double time = 0.0;
  is.read(reinterpret_cast<char*>(&n), sizeof n);
  is.read(reinterpret_cast<char*>(&time), sizeof time);
  if (!is) throw Error("snapshot: truncated header in '" + path + "'");
  Grid2D g = Grid2D::make(static_cast<int>(n));
  Snapshot snap{RealField::zeros(g), time};
  is.read(reinterpret_cast<char*>(snap.field.samples.data()),
          static_cast<std::streamsize>(snap.field.samples.size() * sizeof(double)));
  if (is.gcount() != static_cast<std::streamsize>(snap.field.samples.size() * sizeof(double)))
    throw Error("snapshot: truncated payload in '" + path + "'");
  return snap;
}

// snapshot -> coefficients; a nonzero stored mean is legal input but gets
// dropped, so say so out loud
inline SpectralField load_snapshot_spectral(const std::string& path, double* time = nullptr) {
  Snapshot snap = read_snapshot(path);
  if (time) *time = snap.time;
  double mean = 0.0;
  SpectralField f = to_spectral(snap.field, &mean);
  if (std::abs(mean) > 1e-12)
    std::fprintf(stderr, "snapshot '%s': discarding mean %.3e\n", path.c_str(), mean);
  return f;
}

inline void write_checkpoint_sidecar(const std::string& path, const PhysParams& phys, double dt,
                                     long step, double time) {
  nlohmann::ordered_json j;
  j["kappa"] = phys.kappa;
  j["alpha"] = phys.alpha;
  j["dt"] = dt;
  j["step"] = step;
  j["time"] = time;
  std::ofstream os(path);
  if (!os) throw Error("sidecar: cannot open '" + path + "' for writing");
  os << j.dump(2) << '\n';
}

inline void write_diagnostics_header(std::ostream& os) {
  os << "time,l2,linf,halpha_seminorm,cfl_dt\n";
}

inline void write_diagnostics_row(std::ostream& os, const DiagnosticsSample& d) {
  os << fmt_g17(d.time) << ',' << fmt_g17(d.l2) << ',' << fmt_g17(d.linf) << ','
     << fmt_g17(d.halpha_seminorm) << ',' << fmt_g17(d.cfl_dt) << '\n';
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error("cannot open '" + path + "'");
  std::string out((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
  return out;
}

inline void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot open '" + path + "' for writing");
  os << content;
  if (!os) throw Error("write failed for '" + path + "'");
}

}  // namespace qg
