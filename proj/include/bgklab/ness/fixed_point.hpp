#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "bgklab/collocation.hpp"
#include "bgklab/density_profile.hpp"
#include "bgklab/errors.hpp"
#include "bgklab/maxwellian.hpp"
#include "bgklab/moments.hpp"
#include "bgklab/params.hpp"
#include "bgklab/phase_field.hpp"
#include "bgklab/resolvent.hpp"

namespace bgklab {

/// Constant-pressure local Maxwellian of a density profile: temperature
/// T(x) = P_inf / rho(x). Evaluated pointwise on a dealiased collocation grid
/// and projected back to the Fourier band. Requires a strictly positive
/// reconstruction.
inline PhaseField local_maxwellian_of_density(const DensityProfile& rho,
                                              const ModelParams& p,
                                              const VelocityGrid& grid) {
  const int K = rho.truncation();
  const Collocation col = Collocation::dealiased(K);
  const Eigen::VectorXd rx = col.values(rho);
  const double pinf = p.p_inf();
  if (rx.minCoeff() <= 0.0) {
    int j = 0;
    rx.minCoeff(&j);
    throw positivity_error("density reconstruction is not positive: min " +
                               std::to_string(rx.minCoeff()) + " at x = " +
                               std::to_string(col.point(j)),
                           rx.minCoeff(), col.point(j));
  }
  const int nv = grid.size();
  Eigen::MatrixXcd values(col.points(), nv);
  for (int j = 0; j < col.points(); ++j) {
    const double r = rx[j];
    const double pref = std::pow(r, 1.5) /
                        std::sqrt(2.0 * std::numbers::pi * pinf);
    for (int i = 0; i < nv; ++i) {
      const double v = grid.nodes[i];
      values(j, i) = pref * std::exp(-v * v * r / (2.0 * pinf));
    }
  }
  PhaseField out(K, grid);
  for (int i = 0; i < nv; ++i)
    out.raw().col(i) = col.project_complex(values.col(i));
  return out;
}

/// Forcing F_alpha[rho] = alpha M[rho] + (1-alpha) rho (x) G(v); a
/// probability field for a probability density rho.
inline PhaseField forcing(const DensityProfile& rho, const ModelParams& p,
                          const VelocityGrid& grid) {
  const int K = rho.truncation();
  const Eigen::VectorXd g = reservoir_mix(p, grid);
  PhaseField out(K, grid);
  if (p.alpha > 0.0) {
    out = local_maxwellian_of_density(rho, p, grid);
    out *= p.alpha;
  }
  const double beta = 1.0 - p.alpha;
  if (beta > 0.0) {
    for (int k = -K; k <= K; ++k)
      out.mode(k) += beta * rho.c(k) * g.transpose();
  }
  return out;
}

/// The density image of the steady-state map: velocity marginal of the
/// resolvent applied to the forcing. The continuum map conserves total mass,
/// so the discrete mean is pinned to the input mean exactly.
inline DensityProfile psi_map(const DensityProfile& rho, const ModelParams& p,
                              const VelocityGrid& grid) {
  const PhaseField e = apply_resolvent(forcing(rho, p, grid));
  DensityProfile out = e.density();
  out.c(0) = rho.c(0);
  out.symmetrize();
  return out;
}

/// Full steady-state reconstruction from a (near-)fixed density: even part
/// from the resolvent, odd part from its x-derivative, f = E + O. The
/// residual reports how far rho is from being a fixed point, measured on the
/// transport equation with the forcing recomputed from the reconstruction's
/// own density.
struct NessReconstruction {
  PhaseField field;
  PhaseField even;
  PhaseField odd;
  double steady_residual = 0.0;
};

inline NessReconstruction reconstruct_ness(const DensityProfile& rho,
                                           const ModelParams& p,
                                           const VelocityGrid& grid) {
  const int K = rho.truncation();
  NessReconstruction rec;
  const PhaseField f_alpha = forcing(rho, p, grid);
  rec.even = apply_resolvent(f_alpha);
  rec.odd = PhaseField(K, grid);
  for (int k = -K; k <= K; ++k) {
    const std::complex<double> ik(0.0, 2.0 * std::numbers::pi * k);
    rec.odd.mode(k) = -ik * (rec.even.mode(k).array() *
                             grid.nodes.transpose().array())
                                .matrix();
  }
  rec.field = rec.even + rec.odd;

  const PhaseField f_self = forcing(rec.field.density(), p, grid);
  double worst = 0.0;
  for (int k = -K; k <= K; ++k) {
    const std::complex<double> ik(0.0, 2.0 * std::numbers::pi * k);
    const Eigen::VectorXcd r =
        (ik * rec.field.mode(k).array() * grid.nodes.transpose().array() +
         rec.field.mode(k).array() - f_self.mode(k).array())
            .matrix();
    worst = std::max(worst, r.cwiseAbs().maxCoeff());
  }
  rec.steady_residual = worst;
  return rec;
}

/// Picard iteration record for the density fixed-point map.
struct FixedPointReport {
  std::vector<DensityProfile> iterates;
  std::vector<double> residuals;           // |rho_{n+1} - rho_n|_{L2}
  std::vector<double> contraction_ratios;  // residual quotients
  bool converged = false;
  int iterations = 0;  // first n with |Psi(rho_n) - rho_n| < tol
  double trailing_ratio = 0.0;  // geometric mean of the last ratios
  DensityProfile final_density;
};

inline FixedPointReport iterate_fixed_point(const DensityProfile& rho0,
                                            const ModelParams& p,
                                            const VelocityGrid& grid,
                                            double tol = 1e-12,
                                            int max_iter = 10000) {
  if (!(tol > 0.0)) throw parameter_error("stopping tolerance must be positive");
  FixedPointReport rep;
  DensityProfile rho = rho0;
  rep.iterates.push_back(rho);
  for (int n = 0; n < max_iter; ++n) {
    DensityProfile next;
    try {
      next = psi_map(rho, p, grid);
    } catch (const positivity_error& e) {
      throw positivity_error(std::string(e.what()) + " (Picard iterate " +
                                 std::to_string(n) + ")",
                             e.value, e.location);
    }
    const double res = next.l2_distance(rho);
    rep.residuals.push_back(res);
    if (!rep.residuals.empty() && rep.residuals.size() >= 2) {
      const double prev = rep.residuals[rep.residuals.size() - 2];
      if (prev > 0.0) rep.contraction_ratios.push_back(res / prev);
    }
    rep.iterates.push_back(next);
    rho = next;
    if (res < tol) {
      rep.converged = true;
      rep.iterations = n;
      break;
    }
  }
  rep.final_density = rho;
  if (!rep.converged) rep.iterations = max_iter;
  const int tail = std::min<int>(10, static_cast<int>(rep.contraction_ratios.size()));
  if (tail > 0) {
    double logsum = 0.0;
    for (int i = 0; i < tail; ++i)
      logsum += std::log(
          rep.contraction_ratios[rep.contraction_ratios.size() - 1 - i]);
    rep.trailing_ratio = std::exp(logsum / tail);
  }
  return rep;
}

}  // namespace bgklab
