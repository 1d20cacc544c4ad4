#pragma once

#include <cmath>
#include <limits>
#include <numbers>

#include "bgklab/errors.hpp"
#include "bgklab/quadrature.hpp"

namespace bgklab {

/// Periodized kernel of (1 - v^2 d_xx)^{-1} on the unit torus: the image sum
/// of the two-sided exponential exp(-|x|/|v|)/(2|v|). The geometric image sum
/// has the closed form
///   phi_v(x) = (e^{-|x|/a} + e^{-(1-|x|)/a}) / (2a (1 - e^{-1/a})),  a = |v|,
/// evaluated in that form to stay finite for all a.
class GreenKernel {
 public:
  explicit GreenKernel(double v) : a_(std::abs(v)) {
    if (a_ == 0.0)
      throw parameter_error("Green kernel is singular at velocity 0");
  }

  double velocity() const { return a_; }

  /// Fourier multiplier of the resolvent; well defined for every v including
  /// 0 (the operator is the identity there).
  static double symbol(double v, int k) {
    const double t = 2.0 * std::numbers::pi * v * k;
    return 1.0 / (1.0 + t * t);
  }

  double operator()(double x) const {
    const double r = reduce(x);
    const double denom = 2.0 * a_ * (-std::expm1(-1.0 / a_));
    return (std::exp(-r / a_) + std::exp(-(1.0 - r) / a_)) / denom;
  }

  /// Truncated image sum, for validating the closed form. The discarded tail
  /// is below exp(-images/a)/(a (1-e^{-1/a})).
  double image_sum(double x, int images) const {
    const double r = reduce(x);
    double s = 0.0;
    for (int m = -images; m <= images; ++m)
      s += std::exp(-std::abs(r + m) / a_);
    return s / (2.0 * a_);
  }

  double image_tail_bound(int images) const {
    return std::exp(-(images - 0.5) / a_) / (a_ * (-std::expm1(-1.0 / a_)));
  }

  /// Number of images needed for a tail below the requested bound.
  int images_for_tolerance(double tol) const {
    const double lhs = tol * a_ * (-std::expm1(-1.0 / a_));
    const double m = 0.5 - a_ * std::log(lhs);
    return std::max(4, static_cast<int>(std::ceil(m)));
  }

  /// Partial Fourier synthesis of the symbol at x, with |k| <= modes.
  double fourier_partial_sum(double x, int modes) const {
    double s = 1.0;
    for (int k = 1; k <= modes; ++k)
      s += 2.0 * std::cos(2.0 * std::numbers::pi * k * x) * symbol(a_, k);
    return s;
  }

  /// Closed-form L^p norm of the kernel on the full line.
  static double line_lp_norm(double v, double p) {
    const double a = std::abs(v);
    if (a == 0.0)
      throw parameter_error("Green kernel is singular at velocity 0");
    if (std::isinf(p)) return 1.0 / (2.0 * a);
    if (!(p >= 1.0)) throw parameter_error("Lp exponent must be >= 1");
    return std::pow(1.0 / p, 1.0 / p) * std::pow(1.0 / (2.0 * a), (p - 1) / p);
  }

  /// Torus L^p norm of the periodized kernel, by quadrature (reported
  /// alongside the line norm; the two are deliberately not compared).
  double torus_lp_norm(double p, int panels = 64) const {
    if (std::isinf(p)) return (*this)(0.0);
    if (!(p >= 1.0)) throw parameter_error("Lp exponent must be >= 1");
    static const GaussLegendre rule(24);
    // integrand is smooth away from the kink at 0: integrate on [0, 1/2]
    const double val = rule.integrate_panels(
        [&](double x) { return std::pow((*this)(x), p); }, 0.0, 0.5, panels);
    return std::pow(2.0 * val, 1.0 / p);
  }

  /// Uniform lower bound e^{-1/|v|}/(2|v|) for the periodized kernel.
  static double lower_bound(double v) {
    const double a = std::abs(v);
    if (a == 0.0)
      throw parameter_error("Green kernel is singular at velocity 0");
    return std::exp(-1.0 / a) / (2.0 * a);
  }

 private:
  static double reduce(double x) {
    double r = x - std::round(x);
    return std::abs(r);
  }

  double a_;
};

}  // namespace bgklab
