#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <limits>
#include <vector>

#include "qg/fft.hpp"
#include "qg/grid.hpp"
#include "qg/util.hpp"

namespace qg {

// Real-space samples, row-major, x2 fastest: samples[i1*n + i2].
struct RealField {
  Grid2D grid;
  std::vector<double> samples;

  static RealField zeros(Grid2D g) { return {g, std::vector<double>(g.size(), 0.0)}; }

  double& at(int i1, int i2) { return samples[static_cast<std::size_t>(i1) * grid.n + i2]; }
  double at(int i1, int i2) const { return samples[static_cast<std::size_t>(i1) * grid.n + i2]; }
};

// Fourier coefficients on the full n x n lattice, same layout as RealField.
// Forward transform is normalized by 1/n^2, so cos(x1) has coefficient 1/2 at
// k = (+-1, 0).  Fields of interest are real and mean-free: coefficients are
// conjugate-symmetric and the k = 0 entry is pinned to zero.
struct SpectralField {
  Grid2D grid;
  std::vector<std::complex<double>> coeffs;

  static SpectralField zeros(Grid2D g) {
    return {g, std::vector<std::complex<double>>(g.size(), {0.0, 0.0})};
  }

  std::complex<double>& at(int i1, int i2) {
    return coeffs[static_cast<std::size_t>(i1) * grid.n + i2];
  }
  std::complex<double> at(int i1, int i2) const {
    return coeffs[static_cast<std::size_t>(i1) * grid.n + i2];
  }

  // coefficient of wavevector (k1, k2), components in [-n/2, n/2)
  std::complex<double>& mode(int k1, int k2) {
    int n = grid.n;
    return at((k1 % n + n) % n, (k2 % n + n) % n);
  }
  std::complex<double> mode(int k1, int k2) const {
    int n = grid.n;
    return at((k1 % n + n) % n, (k2 % n + n) % n);
  }
};

inline void check_same_grid(const Grid2D& a, const Grid2D& b) {
  if (a.n != b.n) throw Error("field: grid size mismatch");
}

inline SpectralField operator+(const SpectralField& a, const SpectralField& b) {
  check_same_grid(a.grid, b.grid);
  SpectralField out = a;
  for (std::size_t i = 0; i < out.coeffs.size(); ++i) out.coeffs[i] += b.coeffs[i];
  return out;
}

inline SpectralField operator-(const SpectralField& a, const SpectralField& b) {
  check_same_grid(a.grid, b.grid);
  SpectralField out = a;
  for (std::size_t i = 0; i < out.coeffs.size(); ++i) out.coeffs[i] -= b.coeffs[i];
  return out;
}

inline SpectralField operator*(double s, const SpectralField& a) {
  SpectralField out = a;
  for (auto& c : out.coeffs) c *= s;
  return out;
}

inline void add_scaled(SpectralField& acc, double s, const SpectralField& a) {
  check_same_grid(acc.grid, a.grid);
  for (std::size_t i = 0; i < acc.coeffs.size(); ++i) acc.coeffs[i] += s * a.coeffs[i];
}

// Round-trip contract: to_real(to_spectral(f)) == f - mean(f) up to rounding.
inline RealField to_real(const SpectralField& f) {
  RealField out{f.grid, std::vector<double>(f.grid.size())};
  std::vector<std::complex<double>> buf(f.grid.size());
  FftPlans::get(f.grid.n).backward(f.coeffs.data(), buf.data());
  for (std::size_t i = 0; i < buf.size(); ++i) out.samples[i] = buf[i].real();
  return out;
}

// Forward transform.  The mean mode is removed unconditionally (the dynamics
// below preserve a zero mean exactly; keeping a stray mean would silently
// shift every sup-norm diagnostic).  Conjugate symmetry is enforced here and
// only here: downstream multipliers are built to preserve it bit-exactly.
inline SpectralField to_spectral(const RealField& f, double* discarded_mean = nullptr) {
  int n = f.grid.n;
  if (f.samples.size() != f.grid.size()) throw Error("to_spectral: sample count mismatch");
  SpectralField out = SpectralField::zeros(f.grid);
  std::vector<std::complex<double>> buf(f.grid.size());
  for (std::size_t i = 0; i < buf.size(); ++i) buf[i] = f.samples[i];
  FftPlans::get(n).forward(buf.data(), out.coeffs.data());
  double norm = 1.0 / (static_cast<double>(n) * n);
  for (auto& c : out.coeffs) c *= norm;

  // average each coefficient with the conjugate of its mirror partner
  for (int i1 = 0; i1 < n; ++i1) {
    int m1 = (n - i1) % n;
    for (int i2 = 0; i2 < n; ++i2) {
      int m2 = (n - i2) % n;
      std::size_t idx = static_cast<std::size_t>(i1) * n + i2;
      std::size_t mdx = static_cast<std::size_t>(m1) * n + m2;
      if (idx < mdx) {
        std::complex<double> avg = 0.5 * (out.coeffs[idx] + std::conj(out.coeffs[mdx]));
        out.coeffs[idx] = avg;
        out.coeffs[mdx] = std::conj(avg);
      } else if (idx == mdx) {
        out.coeffs[idx] = {out.coeffs[idx].real(), 0.0};
      }
    }
  }

  if (discarded_mean) *discarded_mean = out.coeffs[0].real();
  out.coeffs[0] = {0.0, 0.0};
  return out;
}

// largest deviation from conjugate symmetry, |c(-k) - conj(c(k))|
inline double hermitian_defect(const SpectralField& f) {
  int n = f.grid.n;
  double worst = 0.0;
  for (int i1 = 0; i1 < n; ++i1) {
    int m1 = (n - i1) % n;
    for (int i2 = 0; i2 < n; ++i2) {
      int m2 = (n - i2) % n;
      worst = std::max(worst, std::abs(f.at(m1, m2) - std::conj(f.at(i1, i2))));
    }
  }
  return worst;
}

// (-Laplacian)^alpha: diagonal multiplier |k|^(2*alpha), zero on the mean mode.
inline SpectralField fractional_laplacian(const SpectralField& f, double alpha) {
  SpectralField out = f;
  int n = f.grid.n;
  for (int i1 = 0; i1 < n; ++i1)
    for (int i2 = 0; i2 < n; ++i2) {
      double r = f.grid.k_mag(i1, i2);
      out.at(i1, i2) *= (r == 0.0) ? 0.0 : std::pow(r, 2.0 * alpha);
    }
  return out;
}

// d/dx_axis, axis in {1, 2}.  The Nyquist plane of the differentiated axis
// has no conjugate partner on the lattice, so an odd multiplier there would
// make the output complex; those modes are dropped.
inline SpectralField derivative(const SpectralField& f, int axis) {
  if (axis != 1 && axis != 2) throw Error("derivative: axis must be 1 or 2");
  SpectralField out = f;
  int n = f.grid.n;
  for (int i1 = 0; i1 < n; ++i1) {
    int k1 = f.grid.wavenumber(i1);
    for (int i2 = 0; i2 < n; ++i2) {
      int k2 = f.grid.wavenumber(i2);
      int km = (axis == 1) ? k1 : k2;
      if (km == -n / 2) km = 0;
      out.at(i1, i2) *= std::complex<double>(0.0, static_cast<double>(km));
    }
  }
  return out;
}

struct VelocityField {
  SpectralField u1, u2;
};

// u = (-R2 theta, R1 theta); Riesz symbol i*k_j/|k|.  Divergence-free by
// construction.  Nyquist planes dropped for the same reason as in derivative().
inline VelocityField riesz_velocity(const SpectralField& theta) {
  int n = theta.grid.n;
  VelocityField u{SpectralField::zeros(theta.grid), SpectralField::zeros(theta.grid)};
  for (int i1 = 0; i1 < n; ++i1) {
    int k1 = theta.grid.wavenumber(i1);
    for (int i2 = 0; i2 < n; ++i2) {
      int k2 = theta.grid.wavenumber(i2);
      double r = theta.grid.k_mag(i1, i2);
      if (r == 0.0) continue;
      std::complex<double> c = theta.at(i1, i2);
      // u1 = -R2: symbol -i*k2/|k|, odd in k2
      if (k2 != -n / 2) u.u1.at(i1, i2) = std::complex<double>(0.0, -k2 / r) * c;
      // u2 = +R1: symbol +i*k1/|k|, odd in k1
      if (k1 != -n / 2) u.u2.at(i1, i2) = std::complex<double>(0.0, k1 / r) * c;
    }
  }
  return u;
}

// 2/3-rule truncation: zero every mode with max(|k1|, |k2|) > n/3.  Products
// of two surviving modes then alias nowhere inside the kept band.
inline SpectralField dealias(const SpectralField& f) {
  SpectralField out = f;
  int n = f.grid.n;
  double cut = n / 3.0;
  for (int i1 = 0; i1 < n; ++i1) {
    int k1 = f.grid.wavenumber(i1);
    for (int i2 = 0; i2 < n; ++i2) {
      int k2 = f.grid.wavenumber(i2);
      if (std::max(std::abs(k1), std::abs(k2)) > cut) out.at(i1, i2) = 0.0;
    }
  }
  return out;
}

// L^p norm by grid quadrature, exact for trig polynomials below the Nyquist
// band.  p = inf is the max of |f| over samples.
inline double lp_norm(const RealField& f, double p) {
  if (p == std::numeric_limits<double>::infinity()) {
    double m = 0.0;
    for (double v : f.samples) m = std::max(m, std::abs(v));
    return m;
  }
  if (!(p >= 1.0)) throw Error("lp_norm: p must be >= 1 or inf");
  std::vector<double> terms(f.samples.size());
  if (p == 2.0) {
    for (std::size_t i = 0; i < terms.size(); ++i) terms[i] = f.samples[i] * f.samples[i];
  } else if (p == 1.0) {
    for (std::size_t i = 0; i < terms.size(); ++i) terms[i] = std::abs(f.samples[i]);
  } else {
    for (std::size_t i = 0; i < terms.size(); ++i)
      terms[i] = std::pow(std::abs(f.samples[i]), p);
  }
  double h = f.grid.h();
  return std::pow(h * h * pairwise_sum(terms), 1.0 / p);
}

inline double lp_norm(const SpectralField& f, double p) { return lp_norm(to_real(f), p); }

// Plancherel: ||f||_2 = 2*pi*sqrt(sum |c_k|^2), summed in fixed index order.
inline double l2_norm_spectral(const SpectralField& f) {
  std::vector<double> terms(f.coeffs.size());
  for (std::size_t i = 0; i < terms.size(); ++i) terms[i] = std::norm(f.coeffs[i]);
  return 2.0 * std::numbers::pi * std::sqrt(pairwise_sum(terms));
}

// homogeneous seminorm ||Lambda^alpha f||_2 without leaving spectral space
inline double h_alpha_seminorm(const SpectralField& f, double alpha) {
  int n = f.grid.n;
  std::vector<double> terms(f.coeffs.size());
  for (int i1 = 0; i1 < n; ++i1)
    for (int i2 = 0; i2 < n; ++i2) {
      double r = f.grid.k_mag(i1, i2);
      std::size_t idx = static_cast<std::size_t>(i1) * n + i2;
      terms[idx] = (r == 0.0) ? 0.0 : std::pow(r, 2.0 * alpha) * std::norm(f.coeffs[idx]);
    }
  return 2.0 * std::numbers::pi * std::sqrt(pairwise_sum(terms));
}

// u . grad(theta) by collocation: transform factors, multiply samples,
// transform back.  No dealiasing here; callers that need the alias-free
// product (the time stepper) truncate afterwards.
inline SpectralField advection(const VelocityField& u, const SpectralField& theta) {
  RealField u1 = to_real(u.u1);
  RealField u2 = to_real(u.u2);
  RealField t1 = to_real(derivative(theta, 1));
  RealField t2 = to_real(derivative(theta, 2));
  RealField prod{theta.grid, std::vector<double>(theta.grid.size())};
  for (std::size_t i = 0; i < prod.samples.size(); ++i)
    prod.samples[i] = u1.samples[i] * t1.samples[i] + u2.samples[i] * t2.samples[i];
  return to_spectral(prod);
}

}  // namespace qg
