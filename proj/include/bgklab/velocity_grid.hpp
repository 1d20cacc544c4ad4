#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <string>

#include "bgklab/errors.hpp"
#include "bgklab/params.hpp"

namespace bgklab {

/// Uniform symmetric velocity grid on [-cutoff, cutoff] with trapezoid
/// weights. Nodes come in exact +/- pairs (the middle node is exactly zero
/// when the count is odd), so parity arguments hold to the bit.
struct VelocityGrid {
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;
  double cutoff = 0.0;

  int size() const { return static_cast<int>(nodes.size()); }

  static VelocityGrid uniform(double cutoff, int n) {
    if (!(cutoff > 0.0))
      throw parameter_error("velocity cutoff must be positive");
    if (n < 8) throw parameter_error("velocity grid needs at least 8 nodes");
    VelocityGrid g;
    g.cutoff = cutoff;
    g.nodes.resize(n);
    const double step = 2.0 * cutoff / (n - 1);
    for (int i = 0; i < n / 2; ++i) {
      const double v = -cutoff + i * step;
      g.nodes[i] = v;
      g.nodes[n - 1 - i] = -v;  // exact mirror
    }
    if (n % 2 == 1) g.nodes[n / 2] = 0.0;
    g.weights = Eigen::VectorXd::Constant(n, step);
    g.weights[0] *= 0.5;
    g.weights[n - 1] *= 0.5;
    return g;
  }

  /// Default discretization: cutoff 8*sqrt(max(t1,t2)), Gaussian tails there
  /// are below 1e-13.
  static VelocityGrid for_params(const ModelParams& p, int n = 512) {
    return uniform(8.0 * std::sqrt(p.t_max()), n);
  }

  /// Grid able to resolve velocity moments up to the given order against the
  /// model's Maxwellians: the integrand v^order exp(-v^2/2T) peaks at
  /// sqrt(order*T), so the cutoff must sit well beyond that turning point.
  static VelocityGrid for_moment_order(const ModelParams& p, int order) {
    if (order < 0) throw parameter_error("moment order must be nonnegative");
    const double tmax = p.t_max();
    const double st = std::sqrt(tmax);
    const double cutoff =
        std::max(8.0 * st, std::sqrt(2.0 * order * tmax) + 6.0 * st);
    const double target_step = st / 32.0;  // spacing of the 512-node default
    int n = static_cast<int>(std::ceil(2.0 * cutoff / target_step)) + 1;
    if (n < 512) n = 512;
    return uniform(cutoff, n);
  }

  /// Trapezoid quadrature of a nodal vector.
  double integrate(const Eigen::VectorXd& values) const {
    if (values.size() != nodes.size())
      throw shape_error("integrand has " + std::to_string(values.size()) +
                        " values for a grid of " + std::to_string(size()));
    return weights.dot(values);
  }

  std::complex<double> integrate(const Eigen::VectorXcd& values) const {
    if (values.size() != nodes.size())
      throw shape_error("integrand size mismatch with velocity grid");
    return (weights.cast<std::complex<double>>().array() * values.array())
        .sum();
  }

  bool same_as(const VelocityGrid& other) const {
    return size() == other.size() && cutoff == other.cutoff;
  }
};

}  // namespace bgklab
