#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "bgklab/spectral/basis.hpp"

namespace bgklab {

/// Building blocks of the abstract hypocoercivity estimate, acting per
/// Fourier mode on velocity profiles in L2(1/f_inf dv). The auxiliary
/// operator has the closed per-mode form
///   (A h)^(k) = -[i kappa / (1 + T_inf kappa^2)] j^(k) f_inf,
/// kappa = 2 pi k, j = int v h dv.
class DmsOperators {
 public:
  DmsOperators(const ModelParams& p, const VelocityGrid& grid)
      : p_(p),
        grid_(grid),
        f_inf_(uniform_ness(p, grid)),
        mw_(maxwellian(p.t_inf(), grid)) {}

  const VelocityGrid& grid() const { return grid_; }
  const Eigen::VectorXd& f_inf() const { return f_inf_; }

  double norm2(const Eigen::VectorXcd& h) const {
    return (grid_.weights.array() * h.array().abs2() / f_inf_.array()).sum();
  }

  std::complex<double> mass(const Eigen::VectorXcd& h) const {
    return grid_.integrate(h);
  }

  Eigen::VectorXcd pi0(const Eigen::VectorXcd& h) const {
    return mass(h) * f_inf_.cast<std::complex<double>>();
  }

  Eigen::VectorXcd streaming(int k, const Eigen::VectorXcd& h) const {
    const std::complex<double> ik(0.0, 2.0 * std::numbers::pi * k);
    return ik * (grid_.nodes.array().cast<std::complex<double>>() * h.array())
                    .matrix();
  }

  /// Linearized collision operator on one mode.
  Eigen::VectorXcd collision(const Eigen::VectorXcd& h) const {
    const std::complex<double> sigma = mass(h);
    const std::complex<double> tau =
        grid_.integrate((grid_.nodes.array().square().cast<std::complex<double>>() *
                         h.array())
                            .matrix()
                            .eval());
    const double ti = p_.t_inf();
    const Eigen::ArrayXd quad = grid_.nodes.array().square() / ti - 1.0;
    return sigma * f_inf_.cast<std::complex<double>>() +
           0.5 * p_.alpha * (tau / ti - sigma) *
               (quad * mw_.array()).matrix().cast<std::complex<double>>() -
           h;
  }

  Eigen::VectorXcd auxiliary(int k, const Eigen::VectorXcd& h) const {
    const double kappa = 2.0 * std::numbers::pi * k;
    const std::complex<double> j = grid_.integrate(
        (grid_.nodes.array().cast<std::complex<double>>() * h.array())
            .matrix()
            .eval());
    const std::complex<double> mult =
        -std::complex<double>(0.0, kappa) /
        (1.0 + p_.t_inf() * kappa * kappa);
    return mult * j * f_inf_.cast<std::complex<double>>();
  }

 private:
  ModelParams p_;
  VelocityGrid grid_;
  Eigen::VectorXd f_inf_;
  Eigen::VectorXd mw_;
};

/// Constants of the abstract decay scheme: microscopic and macroscopic
/// coercivity, the measured bound on the auxiliary operator, the tuning
/// parameters, and the resulting rate and prefactor.
struct DmsConstants {
  double lambda_m = 0.0;
  double lambda_M = 0.0;
  double c_M = 0.0;
  double epsilon = 0.0;
  double delta = 0.0;
  double lambda = 0.0;
  double prefactor = 0.0;
  double max_a_ratio = 0.0;   // sup |A h| / |(1-Pi0) h|, must be <= 1/2
  double max_sa_ratio = 0.0;  // sup |S A h| / |(1-Pi0) h|, must be <= 1
  int samples = 0;
};

inline DmsConstants dms_constants(const ModelParams& p,
                                  const SpectralBasis& basis, int samples,
                                  std::uint64_t seed, int k_max = 8) {
  DmsOperators ops(p, basis.grid);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_int_distribution<int> kdist(1, k_max);

  DmsConstants out;
  out.lambda_m = 0.5 * (1.0 - p.alpha);
  out.lambda_M = p.t_inf();
  out.samples = samples;
  for (int s = 0; s < samples; ++s) {
    const int k = kdist(rng);
    Eigen::VectorXcd coeff(basis.order);
    for (int m = 0; m < basis.order; ++m)
      coeff[m] = std::complex<double>(gauss(rng), gauss(rng));
    const Eigen::VectorXcd h = basis.synthesize(coeff);
    const Eigen::VectorXcd hperp = h - ops.pi0(h);
    const double denom = std::sqrt(ops.norm2(hperp));
    if (denom < 1e-14) continue;

    const Eigen::VectorXcd ah = ops.auxiliary(k, h);
    out.max_a_ratio =
        std::max(out.max_a_ratio, std::sqrt(ops.norm2(ah)) / denom);
    out.max_sa_ratio = std::max(
        out.max_sa_ratio, std::sqrt(ops.norm2(ops.streaming(k, ah))) / denom);

    const Eigen::VectorXcd ash = ops.auxiliary(k, ops.streaming(k, hperp));
    const Eigen::VectorXcd alh = ops.auxiliary(k, ops.collision(h));
    const double cm =
        (std::sqrt(ops.norm2(ash)) + std::sqrt(ops.norm2(alh))) / denom;
    out.c_M = std::max(out.c_M, cm);
  }

  // tuning: delta keeps the macroscopic bracket at half strength, epsilon
  // then keeps the microscopic bracket at half strength
  out.delta = out.lambda_M / ((1.0 + out.lambda_M) * (1.0 + out.c_M));
  out.epsilon = std::min(out.lambda_m * out.delta / (1.0 + out.c_M), 0.5);
  const double micro =
      out.lambda_m - out.epsilon * (1.0 + out.c_M) / (2.0 * out.delta);
  const double macro =
      out.epsilon * (out.lambda_M / (1.0 + out.lambda_M) -
                     (1.0 + out.c_M) * out.delta / 2.0);
  const double kappa = std::min(micro, macro);
  out.lambda = kappa / (1.0 + out.epsilon);
  out.prefactor = std::sqrt((1.0 + out.epsilon) / (1.0 - out.epsilon));
  return out;
}

}  // namespace bgklab
