#pragma once

#include <string>

#include "bgklab/errors.hpp"

namespace bgklab {

/// Physical parameters of the two-reservoir relaxation model: the coupling
/// weight alpha between self-collisions and reservoir interaction, and the
/// two reservoir temperatures. The stationary temperature and pressure are
/// derived; with unit total mass they coincide.
struct ModelParams {
  double alpha;
  double t1;
  double t2;

  ModelParams(double alpha_, double t1_, double t2_)
      : alpha(alpha_), t1(t1_), t2(t2_) {
    if (!(alpha >= 0.0 && alpha <= 1.0))
      throw parameter_error("alpha must lie in [0,1], got " +
                            std::to_string(alpha));
    if (!(t1 > 0.0))
      throw parameter_error("t1 must be positive, got " + std::to_string(t1));
    if (!(t2 > 0.0))
      throw parameter_error("t2 must be positive, got " + std::to_string(t2));
  }

  double t_inf() const { return 0.5 * (t1 + t2); }
  double p_inf() const { return t_inf(); }
  double t_max() const { return t1 > t2 ? t1 : t2; }
};

}  // namespace bgklab
