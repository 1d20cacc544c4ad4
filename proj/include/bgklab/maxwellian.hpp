#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <numbers>

#include "bgklab/errors.hpp"
#include "bgklab/params.hpp"
#include "bgklab/velocity_grid.hpp"

namespace bgklab {

inline double maxwellian_value(double T, double v) {
  return std::exp(-v * v / (2.0 * T)) / std::sqrt(2.0 * std::numbers::pi * T);
}

/// Centered Gaussian velocity density with variance T, sampled on the grid.
inline Eigen::VectorXd maxwellian(double T, const VelocityGrid& grid) {
  if (!(T > 0.0)) throw parameter_error("temperature must be positive");
  const double norm = 1.0 / std::sqrt(2.0 * std::numbers::pi * T);
  return (norm * (-grid.nodes.array().square() / (2.0 * T)).exp()).matrix();
}

/// Half-half mixture of the two reservoir Maxwellians.
inline Eigen::VectorXd reservoir_mix(const ModelParams& p,
                                     const VelocityGrid& grid) {
  return 0.5 * (maxwellian(p.t1, grid) + maxwellian(p.t2, grid));
}

/// The spatially uniform steady state: alpha-weighted Maxwellian at the mean
/// temperature plus the reservoir mixture.
inline Eigen::VectorXd uniform_ness(const ModelParams& p,
                                    const VelocityGrid& grid) {
  return p.alpha * maxwellian(p.t_inf(), grid) +
         (1.0 - p.alpha) * reservoir_mix(p, grid);
}

/// Mean fourth velocity moment of the uniform steady state, in closed form.
inline double uniform_ness_fourth_moment(const ModelParams& p) {
  const double ti = p.t_inf();
  return 3.0 * (p.alpha * ti * ti +
                (1.0 - p.alpha) * 0.5 * (p.t1 * p.t1 + p.t2 * p.t2));
}

}  // namespace bgklab
