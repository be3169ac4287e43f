#pragma once

#include <cmath>
#include <limits>
#include <ostream>
#include <vector>

#include "qg/field.hpp"
#include "qg/grid.hpp"
#include "qg/util.hpp"

namespace qg {

// Smooth radial cutoff: 1 on [0, 1/2], 0 on [1, inf), glued in between with
// the standard exp(-1/s) bump quotient.  Infinitely differentiable in r.
inline double cutoff_chi(double r) {
  if (r <= 0.5) return 1.0;
  if (r >= 1.0) return 0.0;
  auto eta = [](double s) { return std::exp(-1.0 / s); };
  double up = eta(2.0 - 2.0 * r);
  double down = eta(2.0 * r - 1.0);
  return up / (up + down);
}

// annulus bump: psi(r) = chi(r/2) - chi(r); equals 1 at r = 1, supported in (1/2, 2)
inline double shell_psi(double r) { return cutoff_chi(0.5 * r) - cutoff_chi(r); }

// Dyadic shell filters psi(|k| / 2^j) for j in [j_min, j_max].  Shell j
// covers |k| in (2^(j-1), 2^(j+1)).  j_max = floor(log2(n/3)) keeps the top
// shell inside the representable lattice.
//
// Each filter entry is computed as a difference chi_at(j+1) - chi_at(j) of
// cutoff values at power-of-two-scaled radii.  Scaling by exp2(-j) is exact
// in floating point, so summing the filters over j telescopes to
// chi_at(j_max+1) - chi_at(j_min) up to a few ulp: the partition of unity
// holds to rounding on 1 <= |k| <= 2^j_max, not just approximately.
struct DyadicDecomposition {
  Grid2D grid;
  int j_min = 0;
  int j_max = 0;
  std::vector<double> radii;                 // |k| per lattice index
  std::vector<std::vector<double>> filters;  // filters[j][idx]

  static DyadicDecomposition build(const Grid2D& g) {
    DyadicDecomposition d;
    d.grid = g;
    d.j_min = 0;
    d.j_max = static_cast<int>(std::floor(std::log2(g.n / 3.0)));
    if (d.j_max < d.j_min) throw Error("littlewood_paley: grid too small to host one full shell");
    d.radii.resize(g.size());
    for (int i1 = 0; i1 < g.n; ++i1)
      for (int i2 = 0; i2 < g.n; ++i2)
        d.radii[static_cast<std::size_t>(i1) * g.n + i2] = g.k_mag(i1, i2);
    d.filters.assign(d.j_max + 1, std::vector<double>(g.size()));
    for (int j = d.j_min; j <= d.j_max; ++j) {
      double lo = std::exp2(static_cast<double>(-(j + 1)));
      double hi = std::exp2(static_cast<double>(-j));
      for (std::size_t idx = 0; idx < d.radii.size(); ++idx)
        d.filters[j][idx] = cutoff_chi(d.radii[idx] * lo) - cutoff_chi(d.radii[idx] * hi);
    }
    return d;
  }

  int shell_count() const { return j_max - j_min + 1; }
};

inline SpectralField shell_project(const DyadicDecomposition& d, const SpectralField& f, int j) {
  check_same_grid(d.grid, f.grid);
  if (j < d.j_min || j > d.j_max) throw Error("shell_project: shell index out of range");
  SpectralField out = f;
  const auto& w = d.filters[j];
  for (std::size_t i = 0; i < out.coeffs.size(); ++i) out.coeffs[i] *= w[i];
  return out;
}

// S_j = sum of shells below j; multiplier chi(|k|/2^j) - chi(|k|/2^j_min).
// The subtracted term kills everything at j = j_min (no inhomogeneous block
// on the torus: the mean mode is pinned to zero and shell 0 starts at |k|=1).
// Valid for j in [j_min, j_max+1].
inline SpectralField low_pass(const DyadicDecomposition& d, const SpectralField& f, int j) {
  check_same_grid(d.grid, f.grid);
  if (j < d.j_min || j > d.j_max + 1) throw Error("low_pass: index out of range");
  SpectralField out = f;
  double sj = std::exp2(static_cast<double>(-j));
  double smin = std::exp2(static_cast<double>(-d.j_min));
  for (std::size_t i = 0; i < out.coeffs.size(); ++i)
    out.coeffs[i] *= cutoff_chi(d.radii[i] * sj) - cutoff_chi(d.radii[i] * smin);
  return out;
}

struct ReconstructResult {
  SpectralField field;
  double residual_linf = 0.0;  // ||sum_j shell_j(f) - f||_inf
};

// Sum of all resolved shells.  For fields supported in 1 <= |k| <= 2^j_max
// the residual is pure rounding; content above the top shell shows up here
// as a genuine residual instead of being hidden.
inline ReconstructResult reconstruct(const DyadicDecomposition& d, const SpectralField& f) {
  check_same_grid(d.grid, f.grid);
  SpectralField sum = SpectralField::zeros(f.grid);
  for (int j = d.j_min; j <= d.j_max; ++j) {
    const auto& w = d.filters[j];
    for (std::size_t i = 0; i < sum.coeffs.size(); ++i) sum.coeffs[i] += w[i] * f.coeffs[i];
  }
  ReconstructResult r{sum, 0.0};
  r.residual_linf = lp_norm(sum - f, std::numeric_limits<double>::infinity());
  return r;
}

struct ShellEntry {
  int j = 0;
  double norm = 0.0;
};

struct ShellSpectrum {
  double p = 0.0;
  std::vector<ShellEntry> entries;
};

// per-shell L^p norms, one entry per resolved shell
inline ShellSpectrum shell_spectrum(const DyadicDecomposition& d, const SpectralField& f,
                                    double p) {
  ShellSpectrum s;
  s.p = p;
  for (int j = d.j_min; j <= d.j_max; ++j)
    s.entries.push_back({j, lp_norm(shell_project(d, f, j), p)});
  return s;
}

inline void write_shell_csv(const ShellSpectrum& s, std::ostream& os) {
  os << "j,norm\n";
  for (const auto& e : s.entries) os << e.j << ',' << fmt_g17(e.norm) << '\n';
}

struct BesovParams {
  double s = 0.0;
  double p = 2.0;
  double q = std::numeric_limits<double>::infinity();
};

// homogeneous Besov norm truncated to the resolved shells:
// sup_j (or l^q over j) of 2^(j*s) ||shell_j f||_p
inline double besov_norm(const DyadicDecomposition& d, const SpectralField& f,
                         const BesovParams& bp) {
  if (!(bp.p >= 1.0) && bp.p != std::numeric_limits<double>::infinity())
    throw Error("besov_norm: p must be >= 1 or inf");
  if (!(bp.q >= 1.0) && bp.q != std::numeric_limits<double>::infinity())
    throw Error("besov_norm: q must be >= 1 or inf");
  double inf = std::numeric_limits<double>::infinity();
  double sup = 0.0;
  double acc = 0.0;
  for (int j = d.j_min; j <= d.j_max; ++j) {
    double term = std::exp2(j * bp.s) * lp_norm(shell_project(d, f, j), bp.p);
    if (bp.q == inf)
      sup = std::max(sup, term);
    else
      acc += std::pow(term, bp.q);
  }
  return bp.q == inf ? sup : std::pow(acc, 1.0 / bp.q);
}

// Computable stand-in for the Holder C^delta norm: sup norm plus the
// B^delta_{inf,inf} seminorm over resolved shells.
inline double holder_proxy_norm(const DyadicDecomposition& d, const SpectralField& f,
                                double delta) {
  double inf = std::numeric_limits<double>::infinity();
  return lp_norm(f, inf) + besov_norm(d, f, {delta, inf, inf});
}

}  // namespace qg
