#pragma once

#include <cmath>
#include <limits>

#include "qg/field.hpp"
#include "qg/littlewood_paley.hpp"
#include "qg/util.hpp"

namespace qg {

// Shared field constructors.  Used both for solver initial conditions and for
// the randomized corpora in the inequality checks; everything here is a pure
// function of its arguments (and the passed-in rng state).

// amplitude * sin(k1*x1 + k2*x2)
inline SpectralField single_mode_field(Grid2D g, int k1, int k2, double amplitude) {
  if (k1 == 0 && k2 == 0) throw Error("single_mode: wavevector must be nonzero");
  int half = g.n / 2;
  if (std::abs(k1) >= half || std::abs(k2) >= half)
    throw Error("single_mode: wavevector outside resolved band");
  SpectralField f = SpectralField::zeros(g);
  std::complex<double> c(0.0, -0.5 * amplitude);  // sin = (e^{ikx} - e^{-ikx}) / 2i
  f.mode(k1, k2) = c;
  f.mode(-k1, -k2) = std::conj(c);
  return f;
}

// amplitude * cos(k1*x1 + k2*x2)
inline SpectralField cosine_mode_field(Grid2D g, int k1, int k2, double amplitude) {
  if (k1 == 0 && k2 == 0) throw Error("cosine_mode: wavevector must be nonzero");
  int half = g.n / 2;
  if (std::abs(k1) >= half || std::abs(k2) >= half)
    throw Error("cosine_mode: wavevector outside resolved band");
  SpectralField f = SpectralField::zeros(g);
  f.mode(k1, k2) = 0.5 * amplitude;
  f.mode(-k1, -k2) = 0.5 * amplitude;
  return f;
}

// amplitude * (cos x1 + cos x2 + sin(x1 + x2)); mildly anisotropic, activates
// the nonlinearity immediately
inline SpectralField two_mode_field(Grid2D g, double amplitude) {
  SpectralField f = cosine_mode_field(g, 1, 0, amplitude) + cosine_mode_field(g, 0, 1, amplitude);
  return f + single_mode_field(g, 1, 1, amplitude);
}

inline SpectralField scale_to_linf(SpectralField f, double amplitude) {
  double m = lp_norm(f, std::numeric_limits<double>::infinity());
  if (m == 0.0) throw Error("scale_to_linf: zero field");
  return (amplitude / m) * f;
}

// random phases on the annulus kmin <= |k| <= kmax, amplitudes |k|^slope,
// rescaled to ||f||_inf = amplitude
inline SpectralField random_band_field(Grid2D g, int kmin, int kmax, double slope,
                                       double amplitude, Rng& rng) {
  if (kmin < 1 || kmax < kmin) throw Error("random_band: bad annulus bounds");
  if (kmax >= g.n / 2) throw Error("random_band: kmax outside resolved band");
  SpectralField f = SpectralField::zeros(g);
  // walk half the lattice, mirror fills the rest
  for (int k1 = -kmax; k1 <= kmax; ++k1)
    for (int k2 = -kmax; k2 <= kmax; ++k2) {
      if (k1 < 0 || (k1 == 0 && k2 <= 0)) continue;
      double r = std::sqrt(static_cast<double>(k1) * k1 + static_cast<double>(k2) * k2);
      if (r < kmin || r > kmax) continue;
      double phase = rng.uniform(0.0, 2.0 * M_PI);
      std::complex<double> c = std::pow(r, slope) * std::complex<double>(std::cos(phase), std::sin(phase));
      f.mode(k1, k2) = c;
      f.mode(-k1, -k2) = std::conj(c);
    }
  return scale_to_linf(f, amplitude);
}

// lacunary sum: amplitude * sum_j 2^(-delta*j) cos(2^j x1 + phase_j); lands
// exactly one mode in each shell j, so per-shell sup norms decay like
// 2^(-delta*j) by construction
inline SpectralField weierstrass_field(Grid2D g, double delta, int j_lo, int j_hi,
                                       double amplitude, Rng& rng) {
  if (j_lo < 0 || j_hi < j_lo) throw Error("weierstrass: bad shell range");
  if ((1 << j_hi) >= g.n / 2) throw Error("weierstrass: top shell outside resolved band");
  SpectralField f = SpectralField::zeros(g);
  for (int j = j_lo; j <= j_hi; ++j) {
    double phase = rng.uniform(0.0, 2.0 * M_PI);
    double a = amplitude * std::exp2(-delta * j);
    std::complex<double> c = 0.5 * a * std::complex<double>(std::cos(phase), std::sin(phase));
    f.mode(1 << j, 0) += c;
    f.mode(-(1 << j), 0) += std::conj(c);
  }
  return f;
}

// all-positive coefficients psi(|k|/2^j) across shell j: every mode in phase
// at the origin.  These are the extremal fields for sup-norm inequalities;
// random phases would never saturate them.
inline SpectralField coherent_shell_field(Grid2D g, int j, double amplitude) {
  if (j < 0 || (1 << (j + 1)) > g.n / 2)
    throw Error("coherent_shell: shell outside resolved band");
  SpectralField f = SpectralField::zeros(g);
  double s = std::exp2(static_cast<double>(-j));
  for (int i1 = 0; i1 < g.n; ++i1)
    for (int i2 = 0; i2 < g.n; ++i2) {
      double w = shell_psi(g.k_mag(i1, i2) * s);
      if (w != 0.0) f.at(i1, i2) = w;
    }
  return scale_to_linf(f, amplitude);
}

// independent complex Gaussian coefficients on kmin <= |k| <= kmax
inline SpectralField gaussian_band_field(Grid2D g, double kmin, double kmax, Rng& rng) {
  SpectralField f = SpectralField::zeros(g);
  for (int i1 = 0; i1 < g.n; ++i1)
    for (int i2 = 0; i2 < g.n; ++i2) {
      int k1 = g.wavenumber(i1);
      int k2 = g.wavenumber(i2);
      if (k1 < 0 || (k1 == 0 && k2 <= 0)) continue;
      double r = g.k_mag(i1, i2);
      if (r < kmin || r > kmax) continue;
      std::complex<double> c(rng.gauss(), rng.gauss());
      f.mode(k1, k2) = c;
      f.mode(-k1, -k2) = std::conj(c);
    }
  return f;
}

// f(x) - f(x - shift): spectral ramp c_k * (1 - e^{-i k . shift}); for small
// shifts the two copies nearly cancel, a stress case for relative tolerances
inline SpectralField shifted_difference(const SpectralField& f, double shift1, double shift2) {
  SpectralField out = f;
  int n = f.grid.n;
  for (int i1 = 0; i1 < n; ++i1)
    for (int i2 = 0; i2 < n; ++i2) {
      double a = f.grid.wavenumber(i1) * shift1 + f.grid.wavenumber(i2) * shift2;
      out.at(i1, i2) *= 1.0 - std::complex<double>(std::cos(a), -std::sin(a));
    }
  return out;
}

}  // namespace qg
