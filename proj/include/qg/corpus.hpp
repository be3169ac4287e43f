#pragma once

#include <cstdint>
#include <string>

#include "qg/builders.hpp"
#include "qg/littlewood_paley.hpp"
#include "qg/util.hpp"

namespace qg {

// Deterministic trial generator.  Trial i is a pure function of (seed, n, i):
// checks regenerate fields on the fly instead of materializing hundreds of
// grids, and two runs with the same seed see bit-identical inputs.
struct TestCorpus {
  std::uint64_t seed = 0;
  int n = 64;
  int count = 200;

  Rng rng_for(int trial) const {
    return Rng(seed + 0x9e3779b97f4a7c15ULL * (static_cast<std::uint64_t>(trial) + 1));
  }
};

struct CorpusField {
  SpectralField field;
  std::string family;
  int shell = -1;  // tagged shell index for shell-supported trials
};

// Broadband mix: cascade-like random bands, lacunary sums, near-cancelling
// shifted pairs, Gaussian noise.  Scales drawn across four decades so the
// checks exercise relative tolerances, not a fixed magnitude.
inline CorpusField broadband_field(const TestCorpus& c, int trial) {
  Grid2D g = Grid2D::make(c.n);
  Rng rng = c.rng_for(trial);
  double scale = std::pow(10.0, rng.uniform(-2.0, 2.0));
  int kmax = std::min(g.n / 3, 24);
  CorpusField out;
  switch (trial % 4) {
    case 0:
      out.family = "random_band";
      out.field = random_band_field(g, 1, kmax, rng.uniform(-2.5, -0.5), scale, rng);
      break;
    case 1:
      out.family = "weierstrass";
      out.field = weierstrass_field(g, rng.uniform(0.2, 0.9), 0,
                                    std::min(4, static_cast<int>(std::log2(g.n / 4))), scale, rng);
      break;
    case 2: {
      out.family = "near_cancel";
      SpectralField base = random_band_field(g, 1, kmax, -1.0, scale, rng);
      double h = rng.uniform(1e-6, 1e-4);
      out.field = shifted_difference(base, h, h * rng.uniform(0.0, 1.0));
      break;
    }
    default:
      out.family = "gaussian";
      out.field = scale * gaussian_band_field(g, 1.0, kmax, rng);
      break;
  }
  return out;
}

// Shell-supported trials tagged with their shell index, cycling families and
// shells so every (family, shell) pair appears.  The coherent family has all
// modes in phase and saturates sup-norm inequalities; random phases alone
// would leave the constants untested from above.
inline CorpusField shell_field(const TestCorpus& c, const DyadicDecomposition& d, int trial,
                               int j_lo, int j_hi) {
  if (j_lo < d.j_min || j_hi > d.j_max || j_lo > j_hi)
    throw Error("shell_field: shell range outside decomposition");
  Grid2D g = d.grid;
  Rng rng = c.rng_for(trial);
  int span = j_hi - j_lo + 1;
  int j = j_lo + trial % span;
  int fam = (trial / span) % 4;
  double scale = std::pow(10.0, rng.uniform(-2.0, 2.0));
  CorpusField out;
  out.shell = j;
  switch (fam) {
    case 0:
      out.family = "white_shell";
      out.field = shell_project(d, scale * gaussian_band_field(g, 1.0, g.n / 3.0, rng), j);
      break;
    case 1:
      out.family = "coherent_shell";
      out.field = coherent_shell_field(g, j, scale);
      break;
    case 2:
      out.family = "cosine_shell";
      out.field = cosine_mode_field(g, 1 << j, 0, scale);
      break;
    default: {
      out.family = "ramped_shell";
      SpectralField base = coherent_shell_field(g, j, scale);
      out.field = shifted_difference(base, rng.uniform(0.0, 2.0 * M_PI), rng.uniform(0.0, 2.0 * M_PI));
      break;
    }
  }
  return out;
}

// Gaussian field supported on the closed annulus 2^(j-1) <= |k| <= 2^(j+1):
// only shells j-1, j, j+1 are populated
inline SpectralField annulus_field(const TestCorpus& c, int trial, int j) {
  Grid2D g = Grid2D::make(c.n);
  Rng rng = c.rng_for(trial);
  return gaussian_band_field(g, std::exp2(j - 1), std::exp2(j + 1), rng);
}

}  // namespace qg
