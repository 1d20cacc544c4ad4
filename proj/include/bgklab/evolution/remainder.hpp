#pragma once

#include <Eigen/Dense>
#include <cmath>

#include "bgklab/collocation.hpp"
#include "bgklab/maxwellian.hpp"
#include "bgklab/phase_field.hpp"

namespace bgklab {

/// Quadratic remainder of the local Maxwellian around the uniform state:
/// R[h] = M_{f_inf + h} - M_{T_inf} - [M_{T_inf} sigma
///        + (1/2)(v^2/T_inf - 1) M_{T_inf} (tau/T_inf - sigma)],
/// with sigma, tau the density and pressure fluctuations of h. Scales
/// quadratically in h.
inline PhaseField nonlinear_remainder(const PhaseField& h,
                                      const ModelParams& p) {
  const int K = h.truncation();
  const VelocityGrid& grid = h.grid();
  const int nv = grid.size();
  const double ti = p.t_inf();
  const Collocation col = Collocation::dealiased(K);

  const DensityProfile sigma = h.density();
  const DensityProfile tau =
      h.velocity_moment(grid.nodes.array().square().matrix());
  const Eigen::VectorXd sx = col.values(sigma);
  const Eigen::VectorXd tx = col.values(tau);

  Eigen::MatrixXd r_x(col.points(), nv);
  for (int j = 0; j < col.points(); ++j) {
    const double rho = 1.0 + sx[j];
    const double pres = ti + tx[j];
    if (rho <= 0.0)
      throw positivity_error("fluctuation drives the density non-positive",
                             rho, col.point(j));
    const double T = pres / rho;
    if (T <= 0.0)
      throw positivity_error("fluctuation drives the temperature non-positive",
                             T, col.point(j));
    for (int i = 0; i < nv; ++i) {
      const double v = grid.nodes[i];
      const double mw = maxwellian_value(ti, v);
      const double mf = rho * maxwellian_value(T, v);
      const double lin =
          mw * sx[j] + 0.5 * (v * v / ti - 1.0) * mw * (tx[j] / ti - sx[j]);
      r_x(j, i) = mf - mw - lin;
    }
  }
  PhaseField out(K, grid);
  for (int i = 0; i < nv; ++i)
    out.raw().col(i) =
        col.project_complex(r_x.col(i).cast<std::complex<double>>());
  return out;
}

/// First-order consistency probe: (M_{f_inf + eps h} - M_{f_inf}) / eps
/// evaluated as a field, for Richardson comparison with the linearization.
inline PhaseField maxwellian_difference_quotient(const PhaseField& h,
                                                 const ModelParams& p,
                                                 double eps) {
  PhaseField scaled = h;
  scaled *= eps;
  PhaseField r = nonlinear_remainder(scaled, p);
  // M_{f+eps h} - M - eps lin = R[eps h]  =>  quotient = lin + R[eps h]/eps
  const int K = h.truncation();
  const VelocityGrid& grid = h.grid();
  const double ti = p.t_inf();
  const DensityProfile sigma = h.density();
  const DensityProfile tau =
      h.velocity_moment(grid.nodes.array().square().matrix());
  PhaseField lin(K, grid);
  const Eigen::VectorXd mw = maxwellian(ti, grid);
  for (int k = -K; k <= K; ++k) {
    for (int j = 0; j < grid.size(); ++j) {
      const double v = grid.nodes[j];
      lin.at(k, j) = mw[j] * sigma.c(k) +
                     0.5 * (v * v / ti - 1.0) * mw[j] *
                         (tau.c(k) / ti - sigma.c(k));
    }
  }
  r *= 1.0 / eps;
  return lin + r;
}

}  // namespace bgklab
