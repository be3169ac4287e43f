#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "qg/littlewood_paley.hpp"
#include "qg/util.hpp"

namespace qg {

struct HypothesisViolatedError : Error {
  using Error::Error;
};

struct ThresholdError : Error {
  using Error::Error;
};

struct FitWindow {
  int drop_low = 1;   // shells skipped at the coarse end (contaminated by the
                      // inhomogeneous cutoff region)
  int drop_high = 2;  // shells skipped at the fine end (butt against resolution)
};

struct ExponentFit {
  double delta_est = 0.0;  // minus the fitted slope of log2 ||shell_j|| vs j
  double intercept = 0.0;  // fitted log2 amplitude at j = 0
  double residual = 0.0;   // rms deviation from the fitted line
  int j_lo = 0, j_hi = 0;  // shells actually used
  int n_shells = 0;
};

// Least-squares decay exponent of the shell sup norms.  Shells with norms at
// rounding level carry no slope information and are excluded; fewer than
// three informative shells in the window is an error, not a guess.
inline ExponentFit fit_exponent(const ShellSpectrum& spectrum, const FitWindow& w = {}) {
  if (spectrum.p != std::numeric_limits<double>::infinity())
    throw Error("fit_exponent: spectrum must be at p = inf");
  if (spectrum.entries.empty()) throw InsufficientShellsError("fit_exponent: empty spectrum");
  int lo = spectrum.entries.front().j + w.drop_low;
  int hi = spectrum.entries.back().j - w.drop_high;
  std::vector<ShellEntry> used;
  for (const auto& e : spectrum.entries)
    if (e.j >= lo && e.j <= hi && e.norm > 1e-14) used.push_back(e);
  if (used.size() < 3)
    throw InsufficientShellsError("fit_exponent: insufficient shells in fit window");

  double n = static_cast<double>(used.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (const auto& e : used) {
    double x = e.j;
    double y = std::log2(e.norm);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  double denom = n * sxx - sx * sx;
  double slope = (n * sxy - sx * sy) / denom;
  double icept = (sy - slope * sx) / n;

  double ss = 0.0;
  for (const auto& e : used) {
    double d = std::log2(e.norm) - (icept + slope * e.j);
    ss += d * d;
  }
  ExponentFit fit;
  fit.delta_est = -slope;
  fit.intercept = icept;
  fit.residual = std::sqrt(ss / n);
  fit.j_lo = used.front().j;
  fit.j_hi = used.back().j;
  fit.n_shells = static_cast<int>(used.size());
  return fit;
}

struct CriterionResult {
  bool holds = false;
  double threshold = 0.0;  // 1 - 2*alpha
  double margin = 0.0;     // delta_est - threshold
};

// small-data-free regularity criterion: Holder exponent strictly above 1 - 2*alpha
inline CriterionResult criterion(const ExponentFit& fit, double alpha) {
  CriterionResult r;
  r.threshold = 1.0 - 2.0 * alpha;
  r.margin = fit.delta_est - r.threshold;
  r.holds = r.margin > 0.0;
  return r;
}

// Holder exponent surviving L^p interpolation against L^2: delta * (1 - 2/p)
inline double interpolation_exponent(double delta, double p) {
  if (!(p >= 2.0)) throw Error("interpolation_exponent: p must be >= 2");
  return delta * (1.0 - 2.0 / p);
}

struct BootstrapParams {
  double alpha = 0.0;
  double delta = 0.0;
  double p = 0.0;

  void validate() const {
    if (!(alpha > 0.0 && alpha < 0.5))
      throw Error("bootstrap: alpha outside supercritical range (0, 1/2)");
    if (!(delta > 0.0)) throw Error("bootstrap: delta must be > 0");
    if (!(p > 2.0)) throw Error("bootstrap: p must be > 2");
  }
};

struct BootstrapTrace {
  double alpha = 0.0, delta = 0.0, p = 0.0;
  double p0 = 0.0;              // 2*delta / (delta - (1 - 2*alpha))
  double p1 = 0.0;              // 2 / (delta_1 - (1 - 2*alpha))
  std::vector<double> deltas;   // delta_1, delta_2, ... up to the first > 1
  bool terminated = false;      // reached an exponent above 1
};

// Exponent improvement iteration: starting from delta_1 = delta * (1 - 2/p),
// each pass gains delta_{k+1} = 2*delta_k + 2*alpha - 1 - 2/p.  Above both
// thresholds p0, p1 the per-step gain doubles, so the sequence escapes past 1
// in finitely many steps.  Below either threshold the iteration is not
// increasing and the attempt is rejected.
inline BootstrapTrace bootstrap(const BootstrapParams& params) {
  params.validate();
  double c = 1.0 - 2.0 * params.alpha;
  // strict inequality, with rounding room: a margin at the last-bit level
  // (delta = 1 - 2*alpha written in decimal) is equality, not a margin
  double guard = 64.0 * std::numeric_limits<double>::epsilon();
  if (!(params.delta > c + guard))
    throw HypothesisViolatedError("bootstrap: hypothesis violated, delta = " +
                                  fmt_g17(params.delta) + " does not exceed 1 - 2*alpha = " +
                                  fmt_g17(c));
  BootstrapTrace tr;
  tr.alpha = params.alpha;
  tr.delta = params.delta;
  tr.p = params.p;
  tr.p0 = 2.0 * params.delta / (params.delta - c);
  double d1 = params.delta * (1.0 - 2.0 / params.p);
  tr.p1 = (d1 > c) ? 2.0 / (d1 - c) : std::numeric_limits<double>::infinity();
  if (!(params.p > tr.p0) || !(params.p > tr.p1))
    throw ThresholdError("bootstrap: p = " + fmt_g17(params.p) +
                         " below threshold, need p > max(p0 = " + fmt_g17(tr.p0) +
                         ", p1 = " + fmt_g17(tr.p1) + ")");

  double d = d1;
  tr.deltas.push_back(d);
  int cap = 10000;
  while (d <= 1.0 && static_cast<int>(tr.deltas.size()) < cap) {
    d = 2.0 * d + 2.0 * params.alpha - 1.0 - 2.0 / params.p;
    tr.deltas.push_back(d);
  }
  tr.terminated = d > 1.0;
  return tr;
}

enum class MonitorStatus { holds, fails, insufficient };

inline const char* to_string(MonitorStatus s) {
  switch (s) {
    case MonitorStatus::holds: return "holds";
    case MonitorStatus::fails: return "fails";
    default: return "insufficient";
  }
}

struct MonitorRecord {
  double time = 0.0;
  MonitorStatus status = MonitorStatus::insufficient;
  std::optional<ExponentFit> fit;
  double margin = std::numeric_limits<double>::quiet_NaN();
  double p_used = 0.0;
  std::optional<BootstrapTrace> trace;
};

// p large enough for both bootstrap thresholds.  p1 depends on delta_1 and
// hence on p itself, so seed with the p -> inf limit of the threshold and
// double until self-consistent; doubling the first candidate already leaves
// slack, the loop is a guard.
inline double select_bootstrap_p(double alpha, double delta) {
  double c = 1.0 - 2.0 * alpha;
  double p0 = 2.0 * delta / (delta - c);
  double p1_limit = 2.0 / (delta - c);
  double p = 2.0 * std::ceil(std::max(p0, p1_limit));
  for (int guard = 0; guard < 64; ++guard) {
    double d1 = delta * (1.0 - 2.0 / p);
    double p1 = (d1 > c) ? 2.0 / (d1 - c) : std::numeric_limits<double>::infinity();
    if (p > p0 && p > p1) break;
    p *= 2.0;
  }
  return p;
}

// Evaluate the criterion on a time series of shell spectra (p = inf); when it
// holds with a working margin, run the exponent iteration to confirm the
// estimate actually escapes past 1.
inline std::vector<MonitorRecord> monitor_run(
    const std::vector<std::pair<double, ShellSpectrum>>& series, double alpha,
    const FitWindow& w = {}) {
  std::vector<MonitorRecord> out;
  for (const auto& [time, spectrum] : series) {
    MonitorRecord rec;
    rec.time = time;
    try {
      ExponentFit fit = fit_exponent(spectrum, w);
      CriterionResult cr = criterion(fit, alpha);
      rec.fit = fit;
      rec.margin = cr.margin;
      rec.status = cr.holds ? MonitorStatus::holds : MonitorStatus::fails;
      if (cr.holds && cr.margin > 0.01 && alpha > 0.0 && alpha < 0.5) {
        rec.p_used = select_bootstrap_p(alpha, fit.delta_est);
        rec.trace = bootstrap({alpha, fit.delta_est, rec.p_used});
      }
    } catch (const InsufficientShellsError&) {
      rec.status = MonitorStatus::insufficient;
    }
    out.push_back(std::move(rec));
  }
  return out;
}

inline void write_monitor_csv(const std::vector<MonitorRecord>& records, std::ostream& os) {
  os << "time,delta_est,residual,margin,criterion,p_used,bootstrap_steps,gamma_reached\n";
  double nan = std::numeric_limits<double>::quiet_NaN();
  for (const auto& r : records) {
    double de = r.fit ? r.fit->delta_est : nan;
    double res = r.fit ? r.fit->residual : nan;
    os << fmt_g17(r.time) << ',' << fmt_g17(de) << ',' << fmt_g17(res) << ','
       << fmt_g17(r.margin) << ',' << to_string(r.status) << ',' << fmt_g17(r.p_used) << ','
       << (r.trace ? r.trace->deltas.size() : 0) << ','
       << (r.trace && r.trace->terminated ? 1 : 0) << '\n';
  }
}

}  // namespace qg
