#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <numbers>

#include "bgklab/maxwellian.hpp"
#include "bgklab/phase_field.hpp"

namespace bgklab {

/// Squared fluctuation norm weighted by the inverse uniform steady state,
/// summed over Fourier modes: sum_k w_k int |h^(k,v)|^2 / f_inf dv with
/// w_k = 1, or w_k = 1 + (2 pi k)^2 when the Sobolev flag is set.
inline double weighted_norm_squared(const PhaseField& h,
                                    const Eigen::VectorXd& f_inf,
                                    bool sobolev) {
  if (f_inf.size() != h.grid().nodes.size())
    throw shape_error("weight vector does not match the velocity grid");
  const auto& w = h.grid().weights;
  const int K = h.truncation();
  double total = 0.0;
  for (int k = -K; k <= K; ++k) {
    const double wk =
        sobolev ? 1.0 + std::pow(2.0 * std::numbers::pi * k, 2) : 1.0;
    const double vk = (h.mode(k).transpose().cwiseAbs2().array() * w.array() /
                       f_inf.array())
                          .sum();
    total += wk * vk;
  }
  return total;
}

inline double weighted_norm(const PhaseField& h, const ModelParams& p,
                            bool sobolev = false) {
  return std::sqrt(
      weighted_norm_squared(h, uniform_ness(p, h.grid()), sobolev));
}

}  // namespace bgklab
