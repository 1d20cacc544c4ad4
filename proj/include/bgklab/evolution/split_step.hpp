#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "bgklab/collocation.hpp"
#include "bgklab/maxwellian.hpp"
#include "bgklab/moments.hpp"
#include "bgklab/phase_field.hpp"

namespace bgklab {

/// Exact free-streaming sub-flow: mode (k, v) picks up the phase
/// e^{-2 pi i k v dt}. Mass, momentum and energy are preserved per mode.
inline PhaseField step_transport(const PhaseField& f, double dt) {
  PhaseField out = f;
  const int K = f.truncation();
  const auto& v = f.grid().nodes;
  for (int k = 1; k <= K; ++k) {
    for (int j = 0; j < v.size(); ++j) {
      const auto phase =
          std::polar(1.0, -2.0 * std::numbers::pi * k * v[j] * dt);
      out.at(k, j) *= phase;
      out.at(-k, j) *= std::conj(phase);
    }
  }
  return out;
}

/// Exact relaxation sub-flow with moments frozen at the substep start:
/// f <- e^{-dt} f + (1 - e^{-dt}) (alpha M_f + (1-alpha) rho_f G). The local
/// Maxwellian rows are renormalized so their quadrature mass equals rho_f
/// exactly, which makes the substep conserve total mass to the bit.
inline PhaseField step_collision(const PhaseField& f, const ModelParams& p,
                                 double dt) {
  const int K = f.truncation();
  const VelocityGrid& grid = f.grid();
  const int nv = grid.size();
  const Collocation col = Collocation::dealiased(K);

  const DensityProfile rho = f.density();
  const DensityProfile pres =
      f.velocity_moment(grid.nodes.array().square().matrix());
  const Eigen::VectorXd rho_x = col.values(rho);
  const Eigen::VectorXd pres_x = col.values(pres);
  if (rho_x.minCoeff() <= 0.0) {
    int j = 0;
    rho_x.minCoeff(&j);
    throw positivity_error(
        "local density lost positivity during collision step: min " +
            std::to_string(rho_x.minCoeff()) + " at x = " +
            std::to_string(col.point(j)),
        rho_x.minCoeff(), col.point(j));
  }
  PhaseField target(K, grid);
  if (p.alpha > 0.0) {
    Eigen::MatrixXcd mf(col.points(), nv);
    for (int j = 0; j < col.points(); ++j) {
      const double r = rho_x[j];
      const double T = pres_x[j] / r;
      if (T <= 0.0)
        throw positivity_error(
            "local temperature lost positivity during collision step",
            T, col.point(j));
      double mass = 0.0;
      for (int i = 0; i < nv; ++i) {
        const double val = r * maxwellian_value(T, grid.nodes[i]);
        mf(j, i) = val;
        mass += grid.weights[i] * val;
      }
      mf.row(j) *= r / mass;
    }
    for (int i = 0; i < nv; ++i)
      target.raw().col(i) = p.alpha * col.project_complex(mf.col(i));
  }
  if (p.alpha < 1.0) {
    const Eigen::VectorXd g = reservoir_mix(p, grid);
    for (int k = -K; k <= K; ++k)
      target.mode(k) += (1.0 - p.alpha) * rho.c(k) * g.transpose();
  }
  const double decay = std::exp(-dt);
  PhaseField out = f;
  out.raw() = decay * f.raw() + (1.0 - decay) * target.raw();
  return out;
}

enum class SplittingScheme { lie, strang };

/// One step of the composed flow.
inline PhaseField split_step(const PhaseField& f, const ModelParams& p,
                             double dt, SplittingScheme scheme) {
  if (scheme == SplittingScheme::lie)
    return step_collision(step_transport(f, dt), p, dt);
  return step_transport(step_collision(step_transport(f, 0.5 * dt), p, dt),
                        0.5 * dt);
}

/// Right-hand side of the kinetic equation minus transport, for consistency
/// checks: alpha M_f + (1-alpha) rho_f G - f.
inline PhaseField collision_rhs(const PhaseField& f, const ModelParams& p) {
  PhaseField relaxed = step_collision(f, p, 1.0);
  // step_collision with dt has target*(1-e^{-dt}) + f e^{-dt}; recover the
  // generator from the exact one-step map: rhs = (target - f), and
  // relaxed = f + (1-e^{-1}) (target - f).
  PhaseField rhs = relaxed;
  rhs.raw() = (relaxed.raw() - f.raw()) / (1.0 - std::exp(-1.0));
  return rhs;
}

}  // namespace bgklab
