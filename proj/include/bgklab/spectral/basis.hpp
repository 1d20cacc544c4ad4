#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <string>

#include "bgklab/errors.hpp"
#include "bgklab/maxwellian.hpp"
#include "bgklab/params.hpp"
#include "bgklab/velocity_grid.hpp"

namespace bgklab {

/// Normalizing constant of the quadratic basis function, in closed form:
/// c_alpha^{-2} = 3(alpha + (1-alpha)(2 - t1 t2 / t_inf^2)) - 1.
inline double c_alpha_closed_form(const ModelParams& p) {
  const double ti = p.t_inf();
  const double c2inv =
      3.0 * (p.alpha + (1.0 - p.alpha) * (2.0 - p.t1 * p.t2 / (ti * ti))) -
      1.0;
  return 1.0 / std::sqrt(c2inv);
}

/// Orthonormal velocity basis g_m = H_m f_inf obtained by orthonormalizing
/// {v^m f_inf} in L2(1/f_inf dv); H_m are polynomials. Multiplication by v is
/// tridiagonal in this basis:
///   v g_m = sqrt(T_inf) (a_{m+1} g_{m+1} + a_m g_{m-1}).
struct SpectralBasis {
  ModelParams params{0.0, 1.0, 1.0};
  VelocityGrid grid;
  int order = 0;              // number of basis functions M
  Eigen::VectorXd a;          // a[m] for m = 1..M-1 (a[0] unused)
  Eigen::MatrixXd g;          // M x Nv, values of g_m
  Eigen::MatrixXd h;          // M x Nv, polynomial values H_m = g_m / f_inf
  Eigen::VectorXd f_inf;      // uniform steady state on the grid
  double c_alpha = 0.0;       // closed form

  /// Quadrature inner product in L2(1/f_inf dv) of two nodal functions given
  /// as polynomial factors p, q (i.e. of p f_inf and q f_inf).
  double poly_ip(const Eigen::VectorXd& p, const Eigen::VectorXd& q) const {
    return (grid.weights.array() * p.array() * q.array() * f_inf.array())
        .sum();
  }

  /// Expansion coefficients of a velocity profile in the basis.
  Eigen::VectorXcd project(const Eigen::VectorXcd& values) const {
    Eigen::VectorXcd out(order);
    const Eigen::ArrayXd w = grid.weights.array();
    for (int m = 0; m < order; ++m)
      out[m] = (w * h.row(m).transpose().array() * values.array()).sum();
    return out;
  }

  /// Nodal values of a coefficient vector.
  Eigen::VectorXcd synthesize(const Eigen::VectorXcd& coeffs) const {
    if (coeffs.size() != order)
      throw shape_error("coefficient vector does not match basis order");
    return (g.transpose() * coeffs);
  }
};

/// Default grid for basis work at order M: it must resolve moments up to
/// order 2M+2 against the model Maxwellians.
inline VelocityGrid basis_grid(const ModelParams& p, int M) {
  return VelocityGrid::for_moment_order(p, 2 * M + 2);
}

/// Stieltjes construction of the recurrence. The two leading functions are
/// pinned analytically (H_0 = 1, H_1 = v/sqrt(T_inf)); higher orders follow
/// from the three-term recurrence with quadrature inner products.
inline SpectralBasis build_basis(const ModelParams& p, const VelocityGrid& grid,
                                 int M) {
  if (M < 3) throw parameter_error("basis order must be at least 3");
  SpectralBasis b;
  b.params = p;
  b.grid = grid;
  b.order = M;
  b.f_inf = uniform_ness(p, grid);
  b.c_alpha = c_alpha_closed_form(p);
  const int nv = grid.size();
  const double ti = p.t_inf();
  b.h.resize(M, nv);
  b.a = Eigen::VectorXd::Zero(M);

  const Eigen::ArrayXd v = grid.nodes.array();
  b.h.row(0).setOnes();
  b.h.row(1) = (v / std::sqrt(ti)).matrix().transpose();
  b.a[1] = 1.0;

  for (int m = 1; m + 1 < M; ++m) {
    // t = v H_m - sqrt(T_inf) a_m H_{m-1}; by parity t is orthogonal to H_m
    const Eigen::VectorXd vh = (v * b.h.row(m).transpose().array()).matrix();
    Eigen::VectorXd t = vh - std::sqrt(ti) * b.a[m] * b.h.row(m - 1).transpose();
    // remove residual projections picked up by quadrature error
    t -= b.poly_ip(t, b.h.row(m).transpose()) * b.h.row(m).transpose();
    const double nrm2 = b.poly_ip(t, t);
    const double scale = b.poly_ip(vh, vh);
    if (!(nrm2 > 1e-24 * scale) || !std::isfinite(nrm2))
      throw conditioning_error(
          "moment matrix lost positive definiteness at order " +
              std::to_string(m + 1) + "; reduce the basis order or refine "
              "the grid",
          m);
    const double beta = std::sqrt(nrm2);
    b.a[m + 1] = beta / std::sqrt(ti);
    b.h.row(m + 1) = (t / beta).transpose();
    // orthogonality drift against the previous same-parity function signals
    // a discrete measure that cannot support this order
    if (m >= 2) {
      const double drift = std::abs(b.poly_ip(b.h.row(m + 1).transpose(),
                                              b.h.row(m - 1).transpose()));
      if (drift > 1e-6)
        throw conditioning_error(
            "orthogonality lost at order " + std::to_string(m + 1) +
                " (drift " + std::to_string(drift) +
                "); reduce the basis order or refine the grid",
            m);
    }
  }
  b.g = b.h.array().rowwise() * b.f_inf.transpose().array();
  return b;
}

inline SpectralBasis build_basis(const ModelParams& p, int M) {
  return build_basis(p, basis_grid(p, M), M);
}

}  // namespace bgklab
