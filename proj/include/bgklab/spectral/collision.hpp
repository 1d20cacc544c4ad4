#pragma once

#include <Eigen/Dense>
#include <cmath>

#include "bgklab/spectral/basis.hpp"

namespace bgklab {

/// Coefficients b_m = (alpha / 2 c_alpha^2) int H_2 H_m M_{T_inf} dv of the
/// energy-exchange column; b_0 = b_1 = 0 and b_2 = alpha.
inline Eigen::VectorXd collision_b_coefficients(const SpectralBasis& b) {
  const int M = b.order;
  const ModelParams& p = b.params;
  Eigen::VectorXd out(M);
  const Eigen::ArrayXd mw =
      maxwellian(p.t_inf(), b.grid).array() * b.grid.weights.array();
  const double scale = p.alpha / (2.0 * b.c_alpha * b.c_alpha);
  for (int m = 0; m < M; ++m)
    out[m] = scale *
             (mw * b.h.row(2).transpose().array() *
              b.h.row(m).transpose().array())
                 .sum();
  return out;
}

/// Collision matrix in the orthonormal basis. L + Id has first column e_0,
/// third column the b vector, all other columns zero.
inline Eigen::MatrixXd collision_matrix(const SpectralBasis& b) {
  const int M = b.order;
  Eigen::MatrixXd L = -Eigen::MatrixXd::Identity(M, M);
  L(0, 0) += 1.0;
  L.col(2) += collision_b_coefficients(b);
  return L;
}

inline Eigen::VectorXcd collision_apply(const Eigen::MatrixXd& L,
                                        const Eigen::VectorXcd& coeffs) {
  if (coeffs.size() != L.rows())
    throw shape_error("coefficient vector does not match the collision matrix");
  return L * coeffs;
}

/// Both sides of the microscopic coercivity inequality for one coefficient
/// vector: lhs = Re<h, L h>, rhs = -((1-alpha)/2) |(I - Pi_0) h|^2.
struct CoercivityPair {
  double lhs = 0.0;
  double rhs = 0.0;
};

inline CoercivityPair coercivity_check(const Eigen::VectorXcd& h, double alpha,
                                       const Eigen::MatrixXd& L) {
  CoercivityPair out;
  out.lhs = h.dot(L * h).real();  // Eigen's dot conjugates the left factor
  const double off = h.squaredNorm() - std::norm(h[0]);
  out.rhs = -0.5 * (1.0 - alpha) * off;
  return out;
}

/// Greatest eigenvalue of the 2x2 form (alpha-1)V1^2 - V2^2
/// + sqrt(1-alpha^2) V1 V2, by eigen-solve; equals (alpha-1)/2.
inline double quadratic_form_gap(double alpha) {
  Eigen::Matrix2d Q;
  const double cross = 0.5 * std::sqrt(std::max(0.0, 1.0 - alpha * alpha));
  Q << alpha - 1.0, cross, cross, -1.0;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(Q);
  return es.eigenvalues().maxCoeff();
}

/// Measured operator norm of the collision matrix (largest singular value).
inline double collision_operator_norm(const Eigen::MatrixXd& L) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(L);
  return svd.singularValues()[0];
}

}  // namespace bgklab
