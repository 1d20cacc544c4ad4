#pragma once

#include <Eigen/Dense>

#include "bgklab/density_profile.hpp"
#include "bgklab/phase_field.hpp"

namespace bgklab {

/// Velocity moments of a phase-space field as torus profiles: density,
/// momentum, pressure and the fourth moment.
struct Moments {
  DensityProfile rho;
  DensityProfile momentum;
  DensityProfile pressure;
  DensityProfile fourth;

  double total_mass() const { return rho.mean(); }
};

inline Moments compute_moments(const PhaseField& f) {
  const auto& v = f.grid().nodes;
  Moments m;
  m.rho = f.density();
  m.momentum = f.velocity_moment(v);
  m.pressure = f.velocity_moment(v.array().square().matrix());
  m.fourth = f.velocity_moment(v.array().square().square().matrix());
  return m;
}

/// Sup-norm of a profile's deviation from its mean, on a dense x grid.
inline double profile_deviation(const DensityProfile& p, int n = 512) {
  DensityProfile centered = p;
  centered.c(0) = 0.0;
  const auto vals = centered.values_on_grid(n);
  return vals.cwiseAbs().maxCoeff();
}

}  // namespace bgklab
