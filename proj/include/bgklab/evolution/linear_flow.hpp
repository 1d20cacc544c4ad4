#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <numbers>
#include <unsupported/Eigen/MatrixFunctions>
#include <vector>

#include "bgklab/phase_field.hpp"
#include "bgklab/spectral/mode_block.hpp"

namespace bgklab {

/// Fluctuation in the orthonormal basis: rows k = 0..K of expansion
/// coefficients; negative modes follow from conjugation (real fields).
struct CoefficientField {
  int K = 0;
  int M = 0;
  Eigen::MatrixXcd coeffs;  // (K+1) x M

  CoefficientField() = default;
  CoefficientField(int K_, int M_)
      : K(K_), M(M_), coeffs(Eigen::MatrixXcd::Zero(K_ + 1, M_)) {}

  /// Squared weighted norm: w_0 |row 0|^2 + sum_{k>=1} 2 w_k |row k|^2.
  double norm_squared(bool sobolev) const {
    double total = 0.0;
    for (int k = 0; k <= K; ++k) {
      const double wk =
          sobolev ? 1.0 + std::pow(2.0 * std::numbers::pi * k, 2) : 1.0;
      total += (k == 0 ? 1.0 : 2.0) * wk * coeffs.row(k).squaredNorm();
    }
    return total;
  }

  double norm(bool sobolev = false) const {
    return std::sqrt(norm_squared(sobolev));
  }

  /// Modified (Lyapunov) quadratic form sum_k w_k <h_k, P_k h_k>.
  double lyapunov_energy(const std::vector<Eigen::MatrixXcd>& P,
                         bool sobolev) const {
    double total = 0.0;
    for (int k = 0; k <= K; ++k) {
      const double wk =
          sobolev ? 1.0 + std::pow(2.0 * std::numbers::pi * k, 2) : 1.0;
      const Eigen::VectorXcd h = coeffs.row(k);
      const double quad =
          k == 0 ? h.squaredNorm() : h.dot(P[k] * h).real();
      total += (k == 0 ? 1.0 : 2.0) * wk * quad;
    }
    return total;
  }
};

/// Per-mode exact integrator of the linearized equation: each mode advances
/// by exp((L - i kappa S) dt) on the truncated block; mode 0 relaxes at unit
/// rate on its zero-mass content.
class LinearFlow {
 public:
  LinearFlow(const SpectralBasis& basis, int K, double dt,
             FrequencyConvention conv = FrequencyConvention::angular)
      : K_(K), dt_(dt) {
    const Eigen::MatrixXd S = streaming_matrix(basis);
    const Eigen::MatrixXd L = collision_matrix(basis);
    const std::complex<double> i(0.0, 1.0);
    propagators_.resize(K + 1);
    lyapunov_.resize(K + 1);
    const RateCertificate rc = explicit_rate(basis.params);
    for (int k = 1; k <= K; ++k) {
      const double kappa = mode_frequency(k, conv);
      const Eigen::MatrixXcd gen =
          (L.cast<std::complex<double>>() -
           i * kappa * S.cast<std::complex<double>>()) *
          dt;
      propagators_[k] = gen.exp();
      if (!rc.degenerate) {
        const ModeBlock mb = assemble_mode_block(k, basis, rc.c, conv);
        lyapunov_[k] = mb.P;
      } else {
        lyapunov_[k] = Eigen::MatrixXcd::Identity(basis.order, basis.order);
      }
    }
    lyapunov_[0] = Eigen::MatrixXcd::Identity(basis.order, basis.order);
  }

  double dt() const { return dt_; }
  const std::vector<Eigen::MatrixXcd>& lyapunov_matrices() const {
    return lyapunov_;
  }

  void step(CoefficientField& h) const {
    if (h.K != K_) throw shape_error("state truncation does not match flow");
    h.coeffs.row(0) *= std::exp(-dt_);
    for (int k = 1; k <= K_; ++k)
      h.coeffs.row(k) = (propagators_[k] * h.coeffs.row(k).transpose())
                            .transpose();
  }

 private:
  int K_ = 0;
  double dt_ = 0.0;
  std::vector<Eigen::MatrixXcd> propagators_;
  std::vector<Eigen::MatrixXcd> lyapunov_;
};

/// Expand a phase-space fluctuation in the basis (rows k = 0..K).
inline CoefficientField to_coefficients(const PhaseField& h,
                                        const SpectralBasis& basis, int M) {
  if (!h.grid().same_as(basis.grid))
    throw shape_error("field and basis use different grids");
  CoefficientField c(h.truncation(), M);
  for (int k = 0; k <= h.truncation(); ++k) {
    const Eigen::VectorXcd proj = basis.project(h.mode(k).transpose());
    c.coeffs.row(k) = proj.head(M).transpose();
  }
  return c;
}

/// Evaluate a coefficient field back on the grid.
inline PhaseField to_phase_field(const CoefficientField& c,
                                 const SpectralBasis& basis) {
  PhaseField h(c.K, basis.grid);
  for (int k = 0; k <= c.K; ++k) {
    Eigen::VectorXcd full = Eigen::VectorXcd::Zero(basis.order);
    full.head(c.M) = c.coeffs.row(k).transpose();
    const Eigen::VectorXcd vals = basis.synthesize(full);
    h.mode(k) = vals.transpose();
    if (k > 0) h.mode(-k) = vals.conjugate().transpose();
  }
  return h;
}

}  // namespace bgklab
