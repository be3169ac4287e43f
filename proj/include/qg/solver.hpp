#pragma once

#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "qg/builders.hpp"
#include "qg/field.hpp"
#include "qg/grid.hpp"
#include "qg/util.hpp"

namespace qg {

struct PhysParams {
  double kappa = 0.0;  // dissipation strength, >= 0
  double alpha = 0.5;  // dissipation exponent: kappa * (-Laplacian)^alpha

  void validate() const {
    if (!(kappa >= 0.0)) throw Error("phys: kappa must be >= 0");
    if (!(alpha > 0.0 && alpha <= 1.0)) throw Error("phys: alpha must be in (0, 1]");
  }
};

struct SolverConfig {
  PhysParams phys;
  int n = 0;
  double dt = 0.0;
  double t_end = 0.0;
  double cfl_safety = 0.5;
  int diag_interval = 10;
  int checkpoint_interval = 0;  // 0: final checkpoint only

  void validate() const {
    phys.validate();
    if (!(dt > 0.0)) throw Error("solver: dt must be > 0");
    if (!(t_end > 0.0)) throw Error("solver: t_end must be > 0");
    if (!(cfl_safety > 0.0)) throw Error("solver: cfl_safety must be > 0");
    if (diag_interval < 1) throw Error("solver: diag_interval must be >= 1");
  }
};

struct SolverState {
  SpectralField theta;
  double time = 0.0;
  long step = 0;
};

// advective nonlinearity u . grad(theta) with u = (-R2, R1) theta, truncated
// by the 2/3 rule.  The state is kept inside the truncated band, so the
// collocation product is alias-free and the semi-discrete system conserves
// ||theta||_2 exactly when kappa = 0.
inline SpectralField nonlinear_term(const SpectralField& theta) {
  return dealias(advection(riesz_velocity(theta), theta));
}

// Classical RK4 applied in integrating-factor variables: the dissipative
// semigroup exp(-kappa |k|^(2 alpha) t) is applied exactly via precomputed
// half-step tables, RK4 only sees the advection term.  A pure dissipation
// run therefore decays to rounding accuracy regardless of dt.
class IfRk4Stepper {
 public:
  IfRk4Stepper(Grid2D g, PhysParams phys, double dt, bool disable_nonlinearity = false)
      : grid_(g), dt_(dt), skip_nonlinear_(disable_nonlinearity) {
    phys.validate();
    if (!(dt > 0.0)) throw Error("stepper: dt must be > 0");
    half_.resize(g.size());
    full_.resize(g.size());
    for (int i1 = 0; i1 < g.n; ++i1)
      for (int i2 = 0; i2 < g.n; ++i2) {
        double r = g.k_mag(i1, i2);
        double lam = (r == 0.0) ? 0.0 : phys.kappa * std::pow(r, 2.0 * phys.alpha);
        std::size_t idx = static_cast<std::size_t>(i1) * g.n + i2;
        half_[idx] = std::exp(-0.5 * lam * dt);
        full_[idx] = half_[idx] * half_[idx];
      }
  }

  // one step; returns false when the state stopped being finite
  bool advance(SolverState& s) const {
    check_same_grid(grid_, s.theta.grid);
    const SpectralField& v = s.theta;

    SpectralField a = rhs(v);
    SpectralField b = rhs(mul(half_, axpy(v, 0.5, a)));
    SpectralField c = rhs(axpy(mul(half_, v), 0.5, b));
    SpectralField d = rhs(axpy(mul(full_, v), 1.0, mul(half_, c)));

    SpectralField out = mul(full_, v);
    add_scaled(out, 1.0 / 6.0, mul(full_, a));
    SpectralField bc = b + c;
    add_scaled(out, 2.0 / 6.0, mul(half_, bc));
    add_scaled(out, 1.0 / 6.0, d);

    s.theta = std::move(out);
    s.step += 1;
    s.time = s.step * dt_;

    for (const auto& z : s.theta.coeffs)
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    return true;
  }

 private:
  SpectralField rhs(const SpectralField& v) const {
    if (skip_nonlinear_) return SpectralField::zeros(v.grid);
    SpectralField n = nonlinear_term(v);
    for (auto& z : n.coeffs) z = -dt_ * z;
    return n;
  }

  SpectralField mul(const std::vector<double>& table, const SpectralField& v) const {
    SpectralField out = v;
    for (std::size_t i = 0; i < out.coeffs.size(); ++i) out.coeffs[i] *= table[i];
    return out;
  }

  static SpectralField axpy(SpectralField base, double s, const SpectralField& inc) {
    add_scaled(base, s, inc);
    return base;
  }

  Grid2D grid_;
  double dt_;
  bool skip_nonlinear_;
  std::vector<double> half_;  // exp(-L dt/2)
  std::vector<double> full_;  // exp(-L dt)
};

// single-step convenience wrapper
inline bool step(SolverState& s, const SolverConfig& cfg) {
  IfRk4Stepper st(s.theta.grid, cfg.phys, cfg.dt);
  return st.advance(s);
}

// advective stability limit: safety * h / max pointwise speed
inline double cfl_dt(const SpectralField& theta, double cfl_safety) {
  VelocityField u = riesz_velocity(theta);
  RealField u1 = to_real(u.u1);
  RealField u2 = to_real(u.u2);
  double speed = 0.0;
  for (std::size_t i = 0; i < u1.samples.size(); ++i) {
    double s = std::sqrt(u1.samples[i] * u1.samples[i] + u2.samples[i] * u2.samples[i]);
    speed = std::max(speed, s);
  }
  return cfl_safety * theta.grid.h() / std::max(speed, 1e-12);
}

struct DiagnosticsSample {
  double time = 0.0;
  double l2 = 0.0;
  double linf = 0.0;
  double halpha_seminorm = 0.0;
  double cfl_dt = 0.0;
};

inline DiagnosticsSample measure_diagnostics(const SpectralField& theta, double time,
                                             const PhysParams& phys, double cfl_safety) {
  DiagnosticsSample s;
  s.time = time;
  s.l2 = lp_norm(theta, 2.0);
  s.linf = lp_norm(theta, std::numeric_limits<double>::infinity());
  s.halpha_seminorm = h_alpha_seminorm(theta, phys.alpha);
  s.cfl_dt = cfl_dt(theta, cfl_safety);
  return s;
}

// Relative defect in d/dt (1/2)||theta||_2^2 = -kappa ||Lambda^alpha theta||_2^2,
// with the dissipation integral approximated by the trapezoid rule over the
// sampled diagnostics.  Zero initial energy returns 0 by convention.
inline double energy_balance(const std::vector<DiagnosticsSample>& samples, double kappa) {
  if (samples.size() < 2) throw Error("energy_balance: need at least two samples");
  double e0 = 0.5 * samples.front().l2 * samples.front().l2;
  double e1 = 0.5 * samples.back().l2 * samples.back().l2;
  if (e0 == 0.0) return 0.0;
  double dissipated = 0.0;
  for (std::size_t i = 0; i + 1 < samples.size(); ++i) {
    double a = samples[i].halpha_seminorm;
    double b = samples[i + 1].halpha_seminorm;
    dissipated += 0.5 * (a * a + b * b) * (samples[i + 1].time - samples[i].time);
  }
  return std::abs(e1 - e0 + kappa * dissipated) / e0;
}

struct IcParams {
  std::string name = "two_mode";
  double amplitude = 1.0;
  int k1 = 1, k2 = 0;               // single_mode
  int k_min = 1, k_max = 8;         // random_band
  double slope = -2.0;              // random_band
  double delta = 0.4;               // weierstrass
  int j_lo = 1, j_hi = 4;           // weierstrass
};

inline SpectralField make_initial_condition(Grid2D g, const IcParams& ic, std::uint64_t seed) {
  Rng rng(seed);
  SpectralField f = SpectralField::zeros(g);
  if (ic.name == "single_mode") {
    f = single_mode_field(g, ic.k1, ic.k2, ic.amplitude);
  } else if (ic.name == "two_mode") {
    f = two_mode_field(g, ic.amplitude);
  } else if (ic.name == "random_band") {
    f = random_band_field(g, ic.k_min, ic.k_max, ic.slope, ic.amplitude, rng);
  } else if (ic.name == "weierstrass") {
    f = weierstrass_field(g, ic.delta, ic.j_lo, ic.j_hi, ic.amplitude, rng);
  } else {
    throw ConfigError("unknown initial condition '" + ic.name + "'");
  }
  return dealias(f);
}

struct RunCallbacks {
  // called at every diagnostics sample (including step 0 and the final step)
  std::function<void(const SolverState&, const DiagnosticsSample&)> on_diag;
  // called at every checkpoint interval and on completion
  std::function<void(const SolverState&)> on_checkpoint;
};

struct RunResult {
  SolverState state;
  std::string status;  // "completed" | "resolution_exceeded"
  std::string reason;  // empty, "nan", or "gradient"
  std::vector<DiagnosticsSample> diagnostics;
  bool cfl_exceeded = false;
};

inline double grad_linf(const SpectralField& theta) {
  RealField g1 = to_real(derivative(theta, 1));
  RealField g2 = to_real(derivative(theta, 2));
  double m = 0.0;
  for (std::size_t i = 0; i < g1.samples.size(); ++i)
    m = std::max(m, std::sqrt(g1.samples[i] * g1.samples[i] + g2.samples[i] * g2.samples[i]));
  return m;
}

// Fixed-step time loop with periodic diagnostics.  Stops early and flags the
// run when the state has left the resolvable regime: NaN coefficients or a
// gradient too steep for any fixed grid to represent honestly.
inline RunResult run_simulation(const SolverConfig& cfg, SpectralField theta0,
                                const RunCallbacks& cb = {}) {
  cfg.validate();
  Grid2D g = theta0.grid;
  RunResult res;
  res.status = "completed";
  res.state = SolverState{dealias(theta0), 0.0, 0};

  IfRk4Stepper stepper(g, cfg.phys, cfg.dt);
  long n_steps = std::llround(cfg.t_end / cfg.dt);
  if (n_steps < 1) n_steps = 1;

  auto diag = [&](const SolverState& s) {
    DiagnosticsSample d = measure_diagnostics(s.theta, s.time, cfg.phys, cfg.cfl_safety);
    res.diagnostics.push_back(d);
    if (cfg.dt > d.cfl_dt && !res.cfl_exceeded) {
      res.cfl_exceeded = true;
      std::fprintf(stderr, "warning: dt %.3e exceeds advective limit %.3e at t=%.3f\n", cfg.dt,
                   d.cfl_dt, s.time);
    }
    if (cb.on_diag) cb.on_diag(s, d);
    return d;
  };

  diag(res.state);
  for (long k = 0; k < n_steps; ++k) {
    bool finite = stepper.advance(res.state);
    bool due = (res.state.step % cfg.diag_interval == 0) || res.state.step == n_steps;
    if (!finite) {
      diag(res.state);
      res.status = "resolution_exceeded";
      res.reason = "nan";
      return res;
    }
    if (due) {
      diag(res.state);
      if (grad_linf(res.state.theta) > 1e8) {
        res.status = "resolution_exceeded";
        res.reason = "gradient";
        return res;
      }
    }
    if (cfg.checkpoint_interval > 0 && res.state.step % cfg.checkpoint_interval == 0 &&
        cb.on_checkpoint && res.state.step < n_steps)
      cb.on_checkpoint(res.state);
  }
  if (cb.on_checkpoint) cb.on_checkpoint(res.state);
  return res;
}

}  // namespace qg
