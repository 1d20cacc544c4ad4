#pragma once

#include <Eigen/Dense>
#include <complex>
#include <numbers>

#include "bgklab/density_profile.hpp"

namespace bgklab {

/// Uniform collocation grid on the torus paired with direct transforms to and
/// from a {-K..K} Fourier mode vector. The analysis direction truncates: with
/// n >= 4K points, products of degree up to 3 stay alias-free in the kept
/// band.
class Collocation {
 public:
  Collocation(int K, int n) : K_(K), n_(n) {
    synth_.resize(n, 2 * K + 1);
    for (int j = 0; j < n; ++j) {
      const double x = -0.5 + double(j) / n;
      for (int k = -K; k <= K; ++k)
        synth_(j, k + K) = std::polar(1.0, 2.0 * std::numbers::pi * k * x);
    }
    anal_ = synth_.adjoint() / double(n);
  }

  static Collocation dealiased(int K) { return Collocation(K, 4 * K); }

  int points() const { return n_; }
  int truncation() const { return K_; }

  double point(int j) const { return -0.5 + double(j) / n_; }

  Eigen::VectorXd values(const DensityProfile& p) const {
    return (synth_ * p.raw()).real();
  }

  Eigen::VectorXcd values_complex(const Eigen::VectorXcd& modes) const {
    return synth_ * modes;
  }

  DensityProfile project(const Eigen::VectorXd& values) const {
    DensityProfile out(K_);
    out.raw() = anal_ * values.cast<std::complex<double>>();
    out.symmetrize();
    return out;
  }

  Eigen::VectorXcd project_complex(const Eigen::VectorXcd& values) const {
    return anal_ * values;
  }

 private:
  int K_;
  int n_;
  Eigen::MatrixXcd synth_;  // n x (2K+1)
  Eigen::MatrixXcd anal_;   // (2K+1) x n
};

}  // namespace bgklab
