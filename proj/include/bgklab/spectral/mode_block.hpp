#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "bgklab/spectral/collision.hpp"

namespace bgklab {

/// Frequency attached to Fourier index k in the per-mode generator:
/// `angular` uses kappa = 2 pi k (the e^{2 pi i k x} basis on the unit
/// torus); `index` uses kappa = k.
enum class FrequencyConvention { angular, index };

inline double mode_frequency(int k, FrequencyConvention conv) {
  return conv == FrequencyConvention::angular
             ? 2.0 * std::numbers::pi * k
             : static_cast<double>(k);
}

/// Truncated per-mode matrices: streaming S (symmetric tridiagonal, zero
/// diagonal), collision L, generator C = -(L - i kappa S), and the Lyapunov
/// matrix P (identity with a 2x2 mixing block, entries -+ i c / kappa).
struct ModeBlock {
  int k = 0;
  double kappa = 0.0;
  double c = 0.0;
  FrequencyConvention convention = FrequencyConvention::angular;
  Eigen::MatrixXd S;
  Eigen::MatrixXd L;
  Eigen::MatrixXcd C;
  Eigen::MatrixXcd P;
};

inline Eigen::MatrixXd streaming_matrix(const SpectralBasis& b) {
  const int M = b.order;
  const double st = std::sqrt(b.params.t_inf());
  Eigen::MatrixXd S = Eigen::MatrixXd::Zero(M, M);
  for (int m = 1; m < M; ++m) {
    S(m - 1, m) = st * b.a[m];
    S(m, m - 1) = st * b.a[m];
  }
  return S;
}

inline ModeBlock assemble_mode_block(
    int k, const SpectralBasis& basis, double c,
    FrequencyConvention conv = FrequencyConvention::angular) {
  if (k == 0)
    throw parameter_error(
        "mode 0 decays by pure relaxation and has no mixing block");
  if (!(c > 0.0 && c < 1.0))
    throw parameter_error("mixing parameter c must lie in (0,1), got " +
                          std::to_string(c));
  ModeBlock mb;
  mb.k = k;
  mb.kappa = mode_frequency(k, conv);
  mb.c = c;
  mb.convention = conv;
  mb.S = streaming_matrix(basis);
  mb.L = collision_matrix(basis);
  const std::complex<double> i(0.0, 1.0);
  mb.C = -(mb.L.cast<std::complex<double>>() -
           i * mb.kappa * mb.S.cast<std::complex<double>>());
  const int M = basis.order;
  mb.P = Eigen::MatrixXcd::Identity(M, M);
  const double q = c / mb.kappa;
  mb.P(0, 1) = -i * q;
  mb.P(1, 0) = i * q;
  return mb;
}

/// Mixing remainder R = C*P + PC - (2I - N - N^T), N = L + Id being the gain
/// part of the collision matrix.
inline Eigen::MatrixXcd lyapunov_residual_block(const ModeBlock& mb) {
  const int M = static_cast<int>(mb.L.rows());
  const Eigen::MatrixXd N = mb.L + Eigen::MatrixXd::Identity(M, M);
  const Eigen::MatrixXcd base =
      (2.0 * Eigen::MatrixXd::Identity(M, M) - N - N.transpose())
          .cast<std::complex<double>>();
  return mb.C.adjoint() * mb.P + mb.P * mb.C - base;
}

/// Smallest eigenvalue of the Hermitian certificate matrix
/// C*P + PC - 2 lambda P; nonnegative iff the modified norm decays at rate
/// lambda on this mode.
inline double certificate_min_eigenvalue(const ModeBlock& mb, double lambda) {
  Eigen::MatrixXcd A =
      mb.C.adjoint() * mb.P + mb.P * mb.C - 2.0 * lambda * mb.P;
  A = 0.5 * (A + A.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(A);
  return es.eigenvalues().minCoeff();
}

/// Explicit decay certificate: c = min{1/2, c_alpha^2 (1-alpha) /
/// (2 sqrt(T_inf))}; prefactor 4 and rate (1-alpha)/8 or sqrt(T_inf)/8
/// depending on which branch sets c.
struct RateCertificate {
  double prefactor = 4.0;
  double lambda = 0.0;
  double c = 0.0;
  int case_id = 1;
  bool degenerate = false;  // alpha = 1: no rate
};

inline RateCertificate explicit_rate(const ModelParams& p) {
  RateCertificate rc;
  const double ca = c_alpha_closed_form(p);
  const double ti = p.t_inf();
  const double test = ca * ca * (1.0 - p.alpha) / (2.0 * std::sqrt(ti));
  if (test < 0.5) {
    rc.case_id = 1;
    rc.c = test;
    rc.lambda = (1.0 - p.alpha) / 8.0;
  } else {
    rc.case_id = 2;
    rc.c = 0.5;
    rc.lambda = std::sqrt(ti) / 8.0;
  }
  if (p.alpha >= 1.0) {
    rc.degenerate = true;
    rc.lambda = 0.0;
    rc.c = 0.0;
  }
  return rc;
}

/// Numerical spectral gap of the truncated per-mode generator, with a
/// truncation-stability probe at order M+8 and the Lyapunov certificate
/// evaluated at the explicit rate.
struct GapResult {
  int k = 0;
  int order = 0;
  double gap = 0.0;
  double gap_refined = 0.0;
  bool stable = false;
  double lambda_bound = 0.0;
  double certificate_min_eig = 0.0;
};

inline double spectral_gap(const Eigen::MatrixXcd& C) {
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(C, false);
  return es.eigenvalues().real().minCoeff();
}

inline GapResult numeric_gap(
    int k, const ModelParams& p, int M,
    FrequencyConvention conv = FrequencyConvention::angular,
    double stability_tol = 1e-6) {
  GapResult out;
  out.k = k;
  out.order = M;
  const RateCertificate rc = explicit_rate(p);
  out.lambda_bound = rc.lambda;
  if (k == 0) {
    // zero-mean-in-v content of mode 0 relaxes at unit rate
    out.gap = 1.0;
    out.gap_refined = 1.0;
    out.stable = true;
    out.certificate_min_eig = 0.0;
    return out;
  }
  const SpectralBasis basis = build_basis(p, basis_grid(p, M + 8), M);
  const SpectralBasis refined = build_basis(p, basis_grid(p, M + 8), M + 8);
  if (rc.degenerate) {
    const Eigen::MatrixXd S = streaming_matrix(basis);
    const Eigen::MatrixXd L = collision_matrix(basis);
    const std::complex<double> i(0.0, 1.0);
    const Eigen::MatrixXcd C =
        -(L.cast<std::complex<double>>() -
          i * mode_frequency(k, conv) * S.cast<std::complex<double>>());
    out.gap = spectral_gap(C);
    out.certificate_min_eig = 0.0;
    out.stable = true;
    return out;
  }
  const ModeBlock mb = assemble_mode_block(k, basis, rc.c, conv);
  const ModeBlock mb8 = assemble_mode_block(k, refined, rc.c, conv);
  out.gap = spectral_gap(mb.C);
  out.gap_refined = spectral_gap(mb8.C);
  out.stable = std::abs(out.gap - out.gap_refined) < stability_tol;
  out.certificate_min_eig = certificate_min_eigenvalue(mb, rc.lambda);
  return out;
}

}  // namespace bgklab
