#pragma once

#include <cmath>
#include <numbers>

#include "bgklab/maxwellian.hpp"
#include "bgklab/moments.hpp"
#include "bgklab/ness/contraction.hpp"
#include "bgklab/params.hpp"
#include "bgklab/quadrature.hpp"

namespace bgklab {

/// Closed form of int |v|^{-r} M_T(v) dv for r in [0,1).
inline double singular_maxwellian_moment(double T, double r) {
  return std::pow(T, -0.5 * r) * std::pow(2.0, 0.5 * (1.0 - r)) *
         std::exp(std::lgamma(0.5 * (1.0 - r))) /
         std::sqrt(2.0 * std::numbers::pi);
}

/// Quadrature route for the same integral: power series against the exact
/// antiderivatives of v^{2n-r} near the origin, Gauss-Legendre panels beyond.
inline double singular_maxwellian_moment_quadrature(double T, double r) {
  const double delta = std::min(1.0, std::sqrt(T));
  const double norm = 1.0 / std::sqrt(2.0 * std::numbers::pi * T);
  double series = 0.0;
  double term = 1.0;  // (-1)^n (2T)^{-n} / n!
  for (int n = 0; n < 60; ++n) {
    const double contrib =
        term * std::pow(delta, 2 * n + 1 - r) / (2 * n + 1 - r);
    series += contrib;
    if (std::abs(contrib) < 1e-18 * std::abs(series) && n > 2) break;
    term *= -1.0 / (2.0 * T * (n + 1));
  }
  static const GaussLegendre rule(32);
  const double outer = rule.integrate_panels(
      [&](double v) { return std::pow(v, -r) * std::exp(-v * v / (2.0 * T)); },
      delta, delta + 10.0 * std::sqrt(T), 32);
  return 2.0 * norm * (series + outer);
}

/// The a-priori constants controlling any steady-state density: the moment
/// lower bound, the pointwise lower bound r_inf, the gain-of-integrability
/// constants A_r and B_r (closed form and quadrature cross-check), and the
/// measured surrogate for the contraction bound at the uniform profile.
struct AprioriBounds {
  double alpha = 0.0;
  double r = 0.0;
  double lower_moment = 0.0;     // 1 / (3(2-alpha) + (1-alpha)/(6 P_inf))
  double lower_pointwise = 0.0;  // r_inf
  double a_r = 0.0;
  double b_r = 0.0;
  double a_r_quadrature = 0.0;
  double b_r_quadrature = 0.0;
  double delta_g = 0.0;           // 1 - gamma_1
  double alpha_part_norm = 0.0;   // sup_k |d_k| at the uniform profile
  double contraction_upper = 0.0; // alpha*|d|_sup + (1-alpha)(1-delta_g)
};

/// Mass of the reservoir mixture on 1 <= |v| <= 2, via the error function.
inline double reservoir_band_mass(const ModelParams& p) {
  const auto band = [](double T) {
    const double s = std::sqrt(2.0 * T);
    return std::erf(2.0 / s) - std::erf(1.0 / s);
  };
  return 0.5 * (band(p.t1) + band(p.t2));
}

inline AprioriBounds apriori_bounds(const ModelParams& p, double r,
                                    const VelocityGrid& grid) {
  if (!(r >= 0.0 && r < 1.0))
    throw parameter_error("singular moment exponent r must lie in [0,1)");
  AprioriBounds b;
  b.alpha = p.alpha;
  b.r = r;
  const double pinf = p.p_inf();
  b.lower_moment =
      1.0 / (3.0 * (2.0 - p.alpha) + (1.0 - p.alpha) / (6.0 * pinf));
  b.lower_pointwise =
      (1.0 - p.alpha) / (4.0 * std::sqrt(std::numbers::e)) *
      reservoir_band_mass(p);
  b.a_r = std::pow(pinf, -0.5 * r) * std::pow(2.0, 0.5 * (1.0 - r)) *
          std::exp(std::lgamma(0.5 * (1.0 - r))) /
          std::sqrt(2.0 * std::numbers::pi);
  b.b_r = 0.5 * (singular_maxwellian_moment(p.t1, r) +
                 singular_maxwellian_moment(p.t2, r));
  b.a_r_quadrature =
      std::pow(pinf, -0.5 * r) * singular_maxwellian_moment_quadrature(1.0, r);
  b.b_r_quadrature = 0.5 * (singular_maxwellian_moment_quadrature(p.t1, r) +
                            singular_maxwellian_moment_quadrature(p.t2, r));
  const double gamma1 = g_multiplier(p, grid, 1);
  b.delta_g = 1.0 - gamma1;
  double dsup = 0.0;
  for (int k = 1; k <= 4; ++k)
    dsup = std::max(dsup, std::abs(maxwellian_multiplier(p, grid, k)));
  b.alpha_part_norm = dsup;
  b.contraction_upper = p.alpha * dsup + (1.0 - p.alpha) * gamma1;
  return b;
}

inline AprioriBounds apriori_bounds(const ModelParams& p, double r) {
  return apriori_bounds(p, r, VelocityGrid::for_params(p));
}

struct FourthMomentCheck {
  double deviation = 0.0;  // sup_x |int v^4 f dv - mean|
  double bound = 0.0;      // (1-alpha)(t1+t2)/12
  bool within() const { return deviation <= bound + 1e-8; }
};

inline FourthMomentCheck verify_fourth_moment_relation(const PhaseField& f,
                                                       const ModelParams& p) {
  FourthMomentCheck out;
  const Moments m = compute_moments(f);
  out.deviation = profile_deviation(m.fourth);
  out.bound = (1.0 - p.alpha) * (p.t1 + p.t2) / 12.0;
  return out;
}

}  // namespace bgklab
