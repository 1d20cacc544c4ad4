#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "bgklab/evolution/linear_flow.hpp"
#include "bgklab/evolution/split_step.hpp"
#include "bgklab/norms.hpp"

namespace bgklab {

struct EvolutionConfig {
  double dt = 0.01;
  double t_end = 20.0;
  SplittingScheme scheme = SplittingScheme::strang;
  int record_every = 5;
  bool linearized = true;
  FrequencyConvention convention = FrequencyConvention::angular;

  void validate() const {
    if (!(dt > 0.0)) throw parameter_error("time step must be positive");
    if (!(t_end >= dt))
      throw parameter_error("horizon must cover at least one step");
    if (record_every < 1)
      throw parameter_error("record stride must be at least 1");
  }
};

/// Least-squares slope of log(y) against t. The residual is the RMS misfit
/// of the log data; the stderr is the resulting uncertainty of the slope,
/// which gates comparisons of the fitted rate against certified rates.
struct LogSlopeFit {
  double rate = 0.0;      // minus the slope
  double residual = 0.0;  // RMS of log-residuals
  double stderr_ = 0.0;   // standard error of the slope
  bool valid = false;
};

inline LogSlopeFit fit_log_slope(const std::vector<double>& t,
                                 const std::vector<double>& y, double t_from,
                                 double t_to) {
  LogSlopeFit fit;
  std::vector<double> ts, ls;
  for (std::size_t i = 0; i < t.size(); ++i)
    if (t[i] >= t_from && t[i] <= t_to && y[i] > 0.0) {
      ts.push_back(t[i]);
      ls.push_back(std::log(y[i]));
    }
  const std::size_t n = ts.size();
  if (n < 3) return fit;
  double tm = 0.0, lm = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    tm += ts[i];
    lm += ls[i];
  }
  tm /= n;
  lm /= n;
  double stt = 0.0, stl = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    stt += (ts[i] - tm) * (ts[i] - tm);
    stl += (ts[i] - tm) * (ls[i] - lm);
  }
  if (stt == 0.0) return fit;
  const double slope = stl / stt;
  double ss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = ls[i] - lm - slope * (ts[i] - tm);
    ss += r * r;
  }
  fit.rate = -slope;
  fit.residual = std::sqrt(ss / n);
  fit.stderr_ = std::sqrt(ss / std::max<std::size_t>(n - 2, 1)) /
                std::sqrt(stt);
  fit.valid = true;
  return fit;
}

/// Time series and rate diagnostics of one decay run.
struct DecayReport {
  std::vector<double> times;
  std::vector<double> norms_h;
  std::vector<double> norms_h1;
  // nonlinear runs also track the moment diagnostics
  std::vector<double> rho_min;
  std::vector<double> pressure_dev;
  std::vector<double> momentum_sup;

  double fitted_rate = 0.0;
  double fit_residual = 0.0;
  double fit_stderr = 0.0;
  double theorem_rate = 0.0;
  double theorem_prefactor = 4.0;
  double prefactor_check = 0.0;  // sup_t |h_t| e^{lambda t} / |h_0|
  bool bound_ok = true;          // |h_t| <= 4 e^{-lambda t} |h_0| + 1e-8
  bool bound_ok_h1 = true;
  bool lyapunov_monotone = true;
  bool instability = false;
};

inline void finalize_report(DecayReport& rep, double lambda,
                            double window_from, double window_to) {
  rep.theorem_rate = lambda;
  const double n0 = rep.norms_h.empty() ? 0.0 : rep.norms_h.front();
  const double n0_1 = rep.norms_h1.empty() ? 0.0 : rep.norms_h1.front();
  for (std::size_t i = 0; i < rep.times.size(); ++i) {
    const double envelope =
        4.0 * std::exp(-lambda * rep.times[i]) * n0 + 1e-8;
    if (rep.norms_h[i] > envelope) rep.bound_ok = false;
    const double envelope1 =
        4.0 * std::exp(-lambda * rep.times[i]) * n0_1 + 1e-8;
    if (rep.norms_h1[i] > envelope1) rep.bound_ok_h1 = false;
    if (n0 > 0.0)
      rep.prefactor_check =
          std::max(rep.prefactor_check,
                   rep.norms_h[i] * std::exp(lambda * rep.times[i]) / n0);
  }
  rep.instability = !rep.bound_ok;
  const LogSlopeFit fit =
      fit_log_slope(rep.times, rep.norms_h, window_from, window_to);
  if (fit.valid) {
    rep.fitted_rate = fit.rate;
    rep.fit_residual = fit.residual;
    rep.fit_stderr = fit.stderr_;
  }
}

/// Linearized decay experiment: per-mode matrix exponentials, norms recorded
/// in both weights, bound checked against the explicit rate certificate.
inline DecayReport run_decay_experiment(const CoefficientField& h0,
                                        const SpectralBasis& basis,
                                        const EvolutionConfig& cfg) {
  cfg.validate();
  const RateCertificate rc = explicit_rate(basis.params);
  LinearFlow flow(basis, h0.K, cfg.dt, cfg.convention);
  CoefficientField h = h0;
  DecayReport rep;
  const int steps = static_cast<int>(std::round(cfg.t_end / cfg.dt));
  double prev_e = -1.0, prev_e1 = -1.0;
  for (int s = 0; s <= steps; ++s) {
    const double t = s * cfg.dt;
    if (s % cfg.record_every == 0 || s == steps) {
      rep.times.push_back(t);
      rep.norms_h.push_back(h.norm(false));
      rep.norms_h1.push_back(h.norm(true));
      const double e = h.lyapunov_energy(flow.lyapunov_matrices(), false);
      const double e1 = h.lyapunov_energy(flow.lyapunov_matrices(), true);
      if (prev_e >= 0.0 &&
          (e > prev_e * (1.0 + 1e-12) + 1e-300 ||
           e1 > prev_e1 * (1.0 + 1e-12) + 1e-300))
        rep.lyapunov_monotone = false;
      prev_e = e;
      prev_e1 = e1;
    }
    if (s < steps) flow.step(h);
  }
  finalize_report(rep, rc.lambda, cfg.t_end / 2.0, cfg.t_end);
  return rep;
}

/// Nonlinear decay experiment: split-step flow of a probability field,
/// fluctuation measured against the uniform steady state.
inline DecayReport run_decay_experiment(const PhaseField& f0,
                                        const ModelParams& p,
                                        const EvolutionConfig& cfg) {
  cfg.validate();
  const RateCertificate rc = explicit_rate(p);
  const Eigen::VectorXd fi = uniform_ness(p, f0.grid());
  PhaseField f = f0;
  DecayReport rep;
  const int steps = static_cast<int>(std::round(cfg.t_end / cfg.dt));
  const double pinf = p.p_inf();
  for (int s = 0; s <= steps; ++s) {
    const double t = s * cfg.dt;
    if (s % cfg.record_every == 0 || s == steps) {
      PhaseField h = f;
      h.mode(0) -= fi.transpose().cast<std::complex<double>>();
      rep.times.push_back(t);
      rep.norms_h.push_back(std::sqrt(weighted_norm_squared(h, fi, false)));
      rep.norms_h1.push_back(std::sqrt(weighted_norm_squared(h, fi, true)));
      const Moments m = compute_moments(f);
      rep.rho_min.push_back(m.rho.min_on_grid(4 * f.truncation()));
      DensityProfile pdev = m.pressure;
      pdev.c(0) -= pinf;
      rep.pressure_dev.push_back(
          pdev.values_on_grid(4 * f.truncation()).cwiseAbs().maxCoeff());
      rep.momentum_sup.push_back(
          m.momentum.values_on_grid(4 * f.truncation()).cwiseAbs().maxCoeff());
    }
    if (s < steps) f = split_step(f, p, cfg.dt, cfg.scheme);
  }
  rep.lyapunov_monotone = true;  // tracked only for the linearized flow
  finalize_report(rep, rc.lambda, cfg.t_end / 2.0, cfg.t_end);
  return rep;
}

}  // namespace bgklab
