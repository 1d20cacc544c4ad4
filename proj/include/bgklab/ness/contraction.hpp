#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <numbers>

#include "bgklab/collocation.hpp"
#include "bgklab/green_kernel.hpp"
#include "bgklab/maxwellian.hpp"
#include "bgklab/ness/fixed_point.hpp"

namespace bgklab {

/// Fourier multiplier of the reservoir part of the linearized density map:
/// gamma_k = int G(v) / (1 + (2 pi v k)^2) dv.
inline double g_multiplier(const ModelParams& p, const VelocityGrid& grid,
                           int k) {
  const Eigen::VectorXd g = reservoir_mix(p, grid);
  double s = 0.0;
  for (int i = 0; i < grid.size(); ++i)
    s += grid.weights[i] * g[i] * GreenKernel::symbol(grid.nodes[i], k);
  return s;
}

/// Multiplier of the self-collision part at the uniform profile:
/// d_k = int ((3/2) - v^2/(2 T_inf)) M_{T_inf}(v) / (1 + (2 pi v k)^2) dv.
inline double maxwellian_multiplier(const ModelParams& p,
                                    const VelocityGrid& grid, int k) {
  const Eigen::VectorXd m = maxwellian(p.t_inf(), grid);
  const double ti = p.t_inf();
  double s = 0.0;
  for (int i = 0; i < grid.size(); ++i) {
    const double v = grid.nodes[i];
    s += grid.weights[i] * (1.5 - v * v / (2.0 * ti)) * m[i] *
         GreenKernel::symbol(v, k);
  }
  return s;
}

/// Matrix of the functional derivative of the steady-state density map at
/// rho_bar, restricted to zero-mean perturbations, in the orthonormal real
/// basis {sqrt(2) cos(2 pi j x), sqrt(2) sin(2 pi j x)}_{j=1..K}.
/// Column order: cos_1..cos_K, sin_1..sin_K.
inline Eigen::MatrixXd frechet_derivative_matrix(const DensityProfile& rho_bar,
                                                 const ModelParams& p,
                                                 const VelocityGrid& grid) {
  const int K = rho_bar.truncation();
  const Collocation col = Collocation::dealiased(K);
  const int nx = col.points();
  const int nv = grid.size();
  const double pinf = p.p_inf();

  const Eigen::VectorXd rx = col.values(rho_bar);
  if (rx.minCoeff() <= 0.0)
    throw positivity_error("profile is outside the admissible cone",
                           rx.minCoeff());

  // derivative weight of the local Maxwellian, fixed by rho_bar
  Eigen::MatrixXd W(nx, nv);
  for (int j = 0; j < nx; ++j) {
    const double r = rx[j];
    const double pref = std::sqrt(r / (2.0 * std::numbers::pi * pinf));
    for (int i = 0; i < nv; ++i) {
      const double v = grid.nodes[i];
      W(j, i) = (1.5 - r * v * v / (2.0 * pinf)) * pref *
                std::exp(-v * v * r / (2.0 * pinf));
    }
  }
  // resolvent symbol folded with the v-quadrature: U(k,j) = sum_i w_i s(v_i,k) W(j,i)
  Eigen::MatrixXd U(K + 1, nx);
  for (int k = 0; k <= K; ++k) {
    Eigen::VectorXd sw(nv);
    for (int i = 0; i < nv; ++i)
      sw[i] = grid.weights[i] * GreenKernel::symbol(grid.nodes[i], k);
    U.row(k) = (W * sw).transpose();
  }
  Eigen::VectorXd gamma(K + 1);
  for (int k = 1; k <= K; ++k) gamma[k] = g_multiplier(p, grid, k);

  Eigen::MatrixXd J(2 * K, 2 * K);
  Eigen::VectorXd sigma_x(nx);
  for (int type = 0; type < 2; ++type) {
    for (int j0 = 1; j0 <= K; ++j0) {
      for (int j = 0; j < nx; ++j) {
        const double arg = 2.0 * std::numbers::pi * j0 * col.point(j);
        sigma_x[j] = std::numbers::sqrt2 *
                     (type == 0 ? std::cos(arg) : std::sin(arg));
      }
      // alpha part collocation -> modes, with the resolvent and v-integral
      // already folded into U; reservoir part is diagonal per mode.
      Eigen::VectorXcd out = Eigen::VectorXcd::Zero(K + 1);
      for (int k = 1; k <= K; ++k) {
        std::complex<double> acc = 0.0;
        for (int j = 0; j < nx; ++j)
          acc += std::polar(1.0, -2.0 * std::numbers::pi * k * col.point(j)) *
                 (sigma_x[j] * U(k, j));
        out[k] = p.alpha * acc / double(nx);
      }
      const std::complex<double> basis_mode =
          type == 0 ? std::complex<double>(1.0 / std::numbers::sqrt2, 0.0)
                    : std::complex<double>(0.0, -1.0 / std::numbers::sqrt2);
      out[j0] += (1.0 - p.alpha) * gamma[j0] * basis_mode;

      const int colidx = type * K + (j0 - 1);
      for (int k = 1; k <= K; ++k) {
        J(k - 1, colidx) = std::numbers::sqrt2 * out[k].real();
        J(K + k - 1, colidx) = -std::numbers::sqrt2 * out[k].imag();
      }
    }
  }
  return J;
}

struct ContractionEstimate {
  double norm = 0.0;
  int iterations = 0;
  bool converged = false;
  double uncertainty = 0.0;
};

/// L2 -> L2 operator norm of the functional derivative at rho_bar on the
/// zero-mean subspace, by block power iteration on J^T J. The block absorbs
/// the near-degenerate cosine/sine pairs that a single power vector cannot
/// separate.
inline ContractionEstimate contraction_norm_estimate(
    const DensityProfile& rho_bar, const ModelParams& p,
    const VelocityGrid& grid, int max_iter = 500, double tol = 1e-10) {
  const Eigen::MatrixXd J = frechet_derivative_matrix(rho_bar, p, grid);
  const Eigen::MatrixXd JtJ = J.transpose() * J;
  const int n = static_cast<int>(JtJ.rows());
  const int block = std::min(4, n);
  Eigen::MatrixXd Q(n, block);
  for (int i = 0; i < n; ++i)
    for (int b = 0; b < block; ++b)
      Q(i, b) = std::cos(0.7 * (i + 1) * (b + 1)) + 1e-3 * (i + b);
  Q = Eigen::HouseholderQR<Eigen::MatrixXd>(Q).householderQ() *
      Eigen::MatrixXd::Identity(n, block);
  ContractionEstimate est;
  double prev = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    const Eigen::MatrixXd Y = JtJ * Q;
    // Rayleigh estimate of the top eigenvalue within the block
    const Eigen::MatrixXd G = Q.transpose() * Y;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (G + G.transpose()));
    const double lambda = es.eigenvalues().maxCoeff();
    Q = Eigen::HouseholderQR<Eigen::MatrixXd>(Y).householderQ() *
        Eigen::MatrixXd::Identity(n, block);
    est.iterations = it + 1;
    est.uncertainty =
        std::abs(lambda - prev) / std::max(std::abs(lambda), 1e-300);
    if (it > 0 && est.uncertainty < tol) {
      est.norm = std::sqrt(std::max(0.0, lambda));
      est.converged = true;
      return est;
    }
    prev = lambda;
  }
  est.norm = std::sqrt(std::max(0.0, prev));
  est.converged = false;
  return est;
}

}  // namespace bgklab
