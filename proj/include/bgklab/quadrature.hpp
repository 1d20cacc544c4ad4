#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <numbers>

#include "bgklab/errors.hpp"

namespace bgklab {

/// Gauss-Legendre rule on [-1,1]; nodes by Newton iteration from the
/// Chebyshev initial guess.
struct GaussLegendre {
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;

  explicit GaussLegendre(int n) {
    if (n < 1) throw parameter_error("quadrature order must be positive");
    nodes.resize(n);
    weights.resize(n);
    for (int i = 0; i < n; ++i) {
      double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
      double dp = 0.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = x;
        for (int m = 2; m <= n; ++m) {
          const double p2 = ((2 * m - 1) * x * p1 - (m - 1) * p0) / m;
          p0 = p1;
          p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        const double dx = p1 / dp;
        x -= dx;
        if (std::abs(dx) < 1e-15) break;
      }
      nodes[i] = x;
      weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
  }

  double integrate(const std::function<double(double)>& f, double a,
                   double b) const {
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double s = 0.0;
    for (int i = 0; i < nodes.size(); ++i)
      s += weights[i] * f(mid + half * nodes[i]);
    return s * half;
  }

  double integrate_panels(const std::function<double(double)>& f, double a,
                          double b, int panels) const {
    double s = 0.0;
    const double width = (b - a) / panels;
    for (int p = 0; p < panels; ++p)
      s += integrate(f, a + p * width, a + (p + 1) * width);
    return s;
  }
};

}  // namespace bgklab
