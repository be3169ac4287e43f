#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "qg/corpus.hpp"
#include "qg/field.hpp"
#include "qg/littlewood_paley.hpp"
#include "qg/regularity.hpp"
#include "qg/util.hpp"

namespace qg {

// Relative slack granted to inequalities that are exact in real arithmetic.
// A check that fails only because two equal numbers rounded differently is
// reporting noise, not a counterexample.
inline constexpr double kRoundingSlack = 1e-12;

struct InequalityReport {
  std::string name;
  long trials = 0;
  long violations = 0;
  double min_ratio = std::numeric_limits<double>::infinity();
  double max_ratio = -std::numeric_limits<double>::infinity();
  std::uint64_t seed = 0;
  int n = 0;
  std::map<std::string, double> params;

  void record_ratio(double r) {
    min_ratio = std::min(min_ratio, r);
    max_ratio = std::max(max_ratio, r);
  }
};

inline nlohmann::ordered_json report_to_json(const InequalityReport& r) {
  nlohmann::ordered_json j;
  j["name"] = r.name;
  j["trials"] = r.trials;
  j["violations"] = r.violations;
  j["min_ratio"] = r.min_ratio;
  j["max_ratio"] = r.max_ratio;
  j["seed"] = r.seed;
  j["n"] = r.n;
  j["params"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : r.params) j["params"][k] = v;
  return j;
}

inline void require_shell_support(const DyadicDecomposition& d, const SpectralField& f, int j) {
  double inner = std::exp2(j - 1);
  double outer = std::exp2(j + 1);
  double peak = 0.0;
  for (const auto& c : f.coeffs) peak = std::max(peak, std::abs(c));
  if (peak == 0.0) return;
  for (std::size_t i = 0; i < f.coeffs.size(); ++i)
    if ((d.radii[i] <= inner || d.radii[i] >= outer) && std::abs(f.coeffs[i]) > 1e-13 * peak)
      throw Error("inequality: field is not supported in the tagged shell annulus");
}

// ||Lambda^(2 alpha) f||_2 sandwiched by 2^(+-2 alpha) * 2^(2 alpha j) ||f||_2
// on shell j.  Exact mode-by-mode, so zero violations is the bar.
inline InequalityReport check_bernstein_l2(const TestCorpus& corpus, const DyadicDecomposition& d,
                                           double alpha, int j_lo, int j_hi) {
  InequalityReport rep;
  rep.name = "bernstein_l2";
  rep.seed = corpus.seed;
  rep.n = corpus.n;
  rep.params["alpha"] = alpha;
  double lo = std::exp2(-2.0 * alpha);
  double hi = std::exp2(2.0 * alpha);
  for (int t = 0; t < corpus.count; ++t) {
    CorpusField cf = shell_field(corpus, d, t, j_lo, j_hi);
    require_shell_support(d, cf.field, cf.shell);
    double base = l2_norm_spectral(cf.field);
    if (base == 0.0) continue;  // 0/0 guard
    double top = l2_norm_spectral(fractional_laplacian(cf.field, alpha));
    double ratio = top / (std::exp2(2.0 * alpha * cf.shell) * base);
    rep.record_ratio(ratio);
    if (ratio < lo * (1.0 - kRoundingSlack) || ratio > hi * (1.0 + kRoundingSlack))
      rep.violations += 1;
    rep.trials += 1;
  }
  return rep;
}

// ||f_j||_q <= C 2^(2 j (1/p - 1/q)) ||f_j||_p for q >= p on shell j.  The
// constant is not 1, so single trials cannot fail; what is checkable is that
// the per-shell extremal ratio does not drift with j (the 2^(2j(1/p-1/q))
// factor carries all the scale dependence) and that the finite-measure
// Holder direction ||f||_p <= (4 pi^2)^(1/p-1/q) ||f||_q never fails.
inline InequalityReport check_bernstein_lp_lq(const TestCorpus& corpus,
                                              const DyadicDecomposition& d, double p, double q,
                                              int j_lo, int j_hi) {
  if (!(q >= p)) throw Error("bernstein_lp_lq: q must be >= p");
  InequalityReport rep;
  rep.name = "bernstein_lp_lq";
  rep.seed = corpus.seed;
  rep.n = corpus.n;
  rep.params["p"] = p;
  rep.params["q"] = q;
  double inf = std::numeric_limits<double>::infinity();
  double inv_p = 1.0 / p;
  double inv_q = (q == inf) ? 0.0 : 1.0 / q;
  double measure = 4.0 * std::numbers::pi * std::numbers::pi;
  std::map<int, double> shell_peak;
  for (int t = 0; t < corpus.count; ++t) {
    CorpusField cf = shell_field(corpus, d, t, j_lo, j_hi);
    require_shell_support(d, cf.field, cf.shell);
    RealField samples = to_real(cf.field);
    double np = lp_norm(samples, p);
    double nq = lp_norm(samples, q);
    if (np == 0.0) continue;
    // Holder on the finite torus, exact for the quadrature sums as well
    if (np > std::pow(measure, inv_p - inv_q) * nq * (1.0 + kRoundingSlack)) rep.violations += 1;
    double ratio = nq / (std::exp2(2.0 * cf.shell * (inv_p - inv_q)) * np);
    rep.record_ratio(ratio);
    auto it = shell_peak.find(cf.shell);
    if (it == shell_peak.end())
      shell_peak[cf.shell] = ratio;
    else
      it->second = std::max(it->second, ratio);
    rep.trials += 1;
  }
  double peak_lo = inf, peak_hi = -inf;
  for (const auto& [j, r] : shell_peak) {
    peak_lo = std::min(peak_lo, r);
    peak_hi = std::max(peak_hi, r);
  }
  rep.params["shell_peak_spread"] = (peak_lo > 0.0) ? peak_hi / peak_lo : inf;
  if (rep.params["shell_peak_spread"] > 4.0) rep.violations += 1;
  return rep;
}

// integral |f_j|^(p-2) f_j Lambda^(2 alpha) f_j dx >= c 2^(2 alpha j) ||f_j||_p^p.
// At p = 2 the integrand diagonalizes in Fourier and the normalized ratio is
// pinned to [2^(-2 alpha), 2^(2 alpha)] exactly.  For general p only
// positivity and j-independence of the empirical constant are checkable.
inline InequalityReport check_lower_bound(const TestCorpus& corpus, const DyadicDecomposition& d,
                                          double alpha, double p, int j_lo, int j_hi) {
  if (!(p >= 2.0)) throw Error("lower_bound: p must be >= 2");
  InequalityReport rep;
  rep.name = "lower_bound";
  rep.seed = corpus.seed;
  rep.n = corpus.n;
  rep.params["alpha"] = alpha;
  rep.params["p"] = p;
  double inf = std::numeric_limits<double>::infinity();
  std::map<int, double> shell_floor;
  for (int t = 0; t < corpus.count; ++t) {
    CorpusField cf = shell_field(corpus, d, t, j_lo, j_hi);
    require_shell_support(d, cf.field, cf.shell);
    RealField g = to_real(cf.field);
    RealField lg = to_real(fractional_laplacian(cf.field, alpha));
    std::vector<double> terms(g.samples.size());
    for (std::size_t i = 0; i < terms.size(); ++i) {
      double v = g.samples[i];
      double w = (p == 2.0) ? 1.0 : std::pow(std::abs(v), p - 2.0);
      terms[i] = w * v * lg.samples[i];
    }
    double h = g.grid.h();
    double integral = h * h * pairwise_sum(terms);
    double npp = std::pow(lp_norm(g, p), p);
    if (npp == 0.0) continue;
    double ratio = integral / (std::exp2(2.0 * alpha * cf.shell) * npp);
    rep.record_ratio(ratio);
    if (p == 2.0) {
      double lo = std::exp2(-2.0 * alpha);
      double hi = std::exp2(2.0 * alpha);
      if (ratio < lo * (1.0 - kRoundingSlack) || ratio > hi * (1.0 + kRoundingSlack))
        rep.violations += 1;
    } else if (!(integral > 0.0)) {
      rep.violations += 1;
    }
    auto it = shell_floor.find(cf.shell);
    if (it == shell_floor.end())
      shell_floor[cf.shell] = ratio;
    else
      it->second = std::min(it->second, ratio);
    rep.trials += 1;
  }
  double floor_lo = inf, floor_hi = -inf;
  for (const auto& [j, r] : shell_floor) {
    floor_lo = std::min(floor_lo, r);
    floor_hi = std::max(floor_hi, r);
  }
  rep.params["shell_floor_spread"] = (floor_lo > 0.0) ? floor_hi / floor_lo : inf;
  if (p != 2.0 && rep.params["shell_floor_spread"] > 4.0) rep.violations += 1;
  return rep;
}

// ||f||_{B^{delta(1-2/p)}_{p,inf}} <= ||f||_holder^(1-2/p) ||f||_2^(2/p).
// Shell by shell this is norm log-convexity plus Plancherel, so it holds to
// rounding for every field, not just on average.
inline InequalityReport check_interpolation(const TestCorpus& corpus,
                                            const DyadicDecomposition& d, double delta,
                                            double p) {
  InequalityReport rep;
  rep.name = "interpolation";
  rep.seed = corpus.seed;
  rep.n = corpus.n;
  rep.params["delta"] = delta;
  rep.params["p"] = p;
  double inf = std::numeric_limits<double>::infinity();
  double theta_exp = 1.0 - 2.0 / p;
  for (int t = 0; t < corpus.count; ++t) {
    CorpusField cf = broadband_field(corpus, t);
    double l2 = lp_norm(cf.field, 2.0);
    if (l2 == 0.0) continue;
    double lhs = besov_norm(d, cf.field, {interpolation_exponent(delta, p), p, inf});
    double rhs = std::pow(holder_proxy_norm(d, cf.field, delta), theta_exp) * std::pow(l2, 2.0 / p);
    double ratio = lhs / rhs;
    rep.record_ratio(ratio);
    if (lhs > rhs * (1.0 + kRoundingSlack)) rep.violations += 1;
    rep.trials += 1;
  }
  return rep;
}

// Constitutive law u = (-R2, R1) theta never amplifies shell L^2 mass:
// |u_hat| = |theta_hat| mode by mode away from the dropped Nyquist planes.
// Sup norms can grow by an O(1) Riesz constant; those ratios are recorded,
// only the L^2 domination is a hard per-trial bound.
inline InequalityReport check_velocity_domination(const TestCorpus& corpus,
                                                  const DyadicDecomposition& d) {
  InequalityReport rep;
  rep.name = "velocity_domination";
  rep.seed = corpus.seed;
  rep.n = corpus.n;
  double inf = std::numeric_limits<double>::infinity();
  double worst_sup = 0.0;
  for (int t = 0; t < corpus.count; ++t) {
    CorpusField cf = broadband_field(corpus, t);
    VelocityField u = riesz_velocity(cf.field);
    for (int j = d.j_min; j <= d.j_max; ++j) {
      SpectralField tj = shell_project(d, cf.field, j);
      double base = l2_norm_spectral(tj);
      if (base < 1e-14) continue;
      for (const SpectralField* um : {&u.u1, &u.u2}) {
        double mass = l2_norm_spectral(shell_project(d, *um, j));
        double ratio = mass / base;
        rep.record_ratio(ratio);
        if (ratio > 1.0 + kRoundingSlack) rep.violations += 1;
        double sup = lp_norm(shell_project(d, *um, j), inf) / lp_norm(tj, inf);
        worst_sup = std::max(worst_sup, sup);
      }
    }
    rep.trials += 1;
  }
  rep.params["max_sup_ratio"] = worst_sup;
  return rep;
}

struct ParaproductResult {
  double lhs_l2 = 0.0;   // ||shell_j(u . grad theta)||_2
  double sum_l2 = 0.0;   // same for the three-part decomposition
  double diff_l2 = 0.0;
  double rel_discrepancy = 0.0;
};

// Frequency-localized decomposition of the advection term at output shell j:
//   low-high   sum_{|k-j|<=2}  S_{k-1} u . grad shell_k theta
//   high-low   sum_{|k-j|<=2}  shell_k u . grad S_{k-1} theta
//   high-high  sum_{k>=j-1} sum_{|l-k|<=1} shell_k u . grad shell_l theta
// all filtered by shell_j.  For fields supported in the closed annulus
// [2^(j-1), 2^(j+1)] only shells j-1, j, j+1 are populated and every shell
// pair lands in exactly one of the three sums, so the identity is exact on
// the grid, aliasing included; both sides run through identical collocation
// products.  Broadband fields spread mass across the gapless filter tails
// and satisfy the identity only up to O(1e-5): this check is about the index
// bookkeeping, and the corpus is chosen where the bookkeeping is complete.
inline ParaproductResult paraproduct_identity(const DyadicDecomposition& d,
                                              const SpectralField& theta, int j) {
  if (j - 2 < d.j_min || j + 2 > d.j_max)
    throw Error("paraproduct: j too close to the shell band edges");
  VelocityField u = riesz_velocity(theta);
  Grid2D g = theta.grid;

  auto shell_u = [&](int k) {
    return VelocityField{shell_project(d, u.u1, k), shell_project(d, u.u2, k)};
  };
  auto low_u = [&](int k) {
    return VelocityField{low_pass(d, u.u1, k), low_pass(d, u.u2, k)};
  };
  auto live = [](const SpectralField& f) {
    for (const auto& c : f.coeffs)
      if (c != std::complex<double>(0.0, 0.0)) return true;
    return false;
  };
  auto live_u = [&](const VelocityField& v) { return live(v.u1) || live(v.u2); };
  SpectralField total = SpectralField::zeros(g);
  auto accumulate = [&](const VelocityField& v, const SpectralField& f) {
    // a factor that is identically zero contributes nothing; skip its FFTs
    if (live_u(v) && live(f)) add_scaled(total, 1.0, advection(v, f));
  };

  for (int k = std::max(j - 2, d.j_min); k <= std::min(j + 2, d.j_max); ++k) {
    if (k - 1 >= d.j_min) {
      accumulate(low_u(k - 1), shell_project(d, theta, k));
      accumulate(shell_u(k), low_pass(d, theta, k - 1));
    }
  }
  for (int k = std::max(j - 1, d.j_min); k <= d.j_max; ++k)
    for (int l = std::max(k - 1, d.j_min); l <= std::min(k + 1, d.j_max); ++l)
      accumulate(shell_u(k), shell_project(d, theta, l));

  SpectralField lhs = shell_project(d, advection(u, theta), j);
  SpectralField rhs = shell_project(d, total, j);

  ParaproductResult r;
  r.lhs_l2 = l2_norm_spectral(lhs);
  r.sum_l2 = l2_norm_spectral(rhs);
  r.diff_l2 = l2_norm_spectral(rhs - lhs);
  r.rel_discrepancy = r.diff_l2 / std::max(r.lhs_l2, std::numeric_limits<double>::min());
  return r;
}

inline InequalityReport check_paraproduct(const TestCorpus& corpus, const DyadicDecomposition& d,
                                          int j) {
  InequalityReport rep;
  rep.name = "paraproduct";
  rep.seed = corpus.seed;
  rep.n = corpus.n;
  rep.params["j"] = j;
  for (int t = 0; t < corpus.count; ++t) {
    SpectralField theta = annulus_field(corpus, t, j);
    ParaproductResult pr = paraproduct_identity(d, theta, j);
    rep.record_ratio(pr.rel_discrepancy);
    if (pr.rel_discrepancy > 1e-10) rep.violations += 1;
    rep.trials += 1;
  }
  return rep;
}

// Low-high interactions three or more shells below the output band leave no
// trace there: the product of S_{k-1} u and shell_k theta lives inside the
// ball of radius 2.5 * 2^k, strictly below shell k+3.  Returns the largest
// relative leak over admissible (k, j) pairs.
inline double paraproduct_support_leak(const DyadicDecomposition& d, const SpectralField& theta) {
  VelocityField u = riesz_velocity(theta);
  double worst = 0.0;
  for (int k = d.j_min; k <= d.j_max - 3; ++k) {
    VelocityField su{low_pass(d, u.u1, std::max(k - 1, d.j_min)),
                     low_pass(d, u.u2, std::max(k - 1, d.j_min))};
    SpectralField prod = advection(su, shell_project(d, theta, k));
    double scale = l2_norm_spectral(prod);
    if (scale < 1e-300) continue;
    for (int j = k + 3; j <= d.j_max; ++j)
      worst = std::max(worst, l2_norm_spectral(shell_project(d, prod, j)) / scale);
  }
  return worst;
}

}  // namespace qg
