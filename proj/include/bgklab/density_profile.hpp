#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <numbers>

#include "bgklab/errors.hpp"

namespace bgklab {

/// Truncated Fourier series of a real function on the unit torus
/// [-1/2, 1/2], basis e^{2 pi i k x}, coefficients stored for k in {-K..K}.
/// A probability density has coefficient 1 at k=0 and a nonnegative
/// reconstruction.
class DensityProfile {
 public:
  DensityProfile() = default;
  explicit DensityProfile(int K)
      : K_(K), modes_(Eigen::VectorXcd::Zero(2 * K + 1)) {
    if (K < 0) throw parameter_error("truncation order must be nonnegative");
  }

  static DensityProfile uniform(int K) {
    DensityProfile r(K);
    r.c(0) = 1.0;
    return r;
  }

  int truncation() const { return K_; }
  int coeff_count() const { return 2 * K_ + 1; }

  std::complex<double>& c(int k) { return modes_[k + K_]; }
  const std::complex<double>& c(int k) const { return modes_[k + K_]; }

  Eigen::VectorXcd& raw() { return modes_; }
  const Eigen::VectorXcd& raw() const { return modes_; }

  double mean() const { return c(0).real(); }

  /// Enforce the conjugate symmetry of a real function (averages k and -k).
  void symmetrize() {
    for (int k = 1; k <= K_; ++k) {
      const auto avg = 0.5 * (c(k) + std::conj(c(-k)));
      c(k) = avg;
      c(-k) = std::conj(avg);
    }
    c(0) = std::complex<double>(c(0).real(), 0.0);
  }

  double symmetry_defect() const {
    double d = std::abs(c(0).imag());
    for (int k = 1; k <= K_; ++k)
      d = std::max(d, std::abs(c(k) - std::conj(c(-k))));
    return d;
  }

  double evaluate(double x) const {
    std::complex<double> s = c(0);
    for (int k = 1; k <= K_; ++k) {
      const auto phase = std::polar(1.0, 2.0 * std::numbers::pi * k * x);
      s += c(k) * phase + c(-k) * std::conj(phase);
    }
    return s.real();
  }

  /// Values on the uniform collocation grid x_j = -1/2 + j/n.
  Eigen::VectorXd values_on_grid(int n) const {
    Eigen::VectorXd out(n);
    for (int j = 0; j < n; ++j) out[j] = evaluate(-0.5 + double(j) / n);
    return out;
  }

  double min_on_grid(int n) const { return values_on_grid(n).minCoeff(); }
  double max_on_grid(int n) const { return values_on_grid(n).maxCoeff(); }

  /// L2(torus) norm via Parseval.
  double l2_norm() const { return modes_.norm(); }

  double l2_distance(const DensityProfile& other) const {
    if (other.K_ != K_)
      throw shape_error("profiles have different truncation orders");
    return (modes_ - other.modes_).norm();
  }

  DensityProfile& operator+=(const DensityProfile& o) {
    if (o.K_ != K_) throw shape_error("profile truncation mismatch");
    modes_ += o.modes_;
    return *this;
  }
  DensityProfile& operator-=(const DensityProfile& o) {
    if (o.K_ != K_) throw shape_error("profile truncation mismatch");
    modes_ -= o.modes_;
    return *this;
  }
  DensityProfile& operator*=(double s) {
    modes_ *= s;
    return *this;
  }
  friend DensityProfile operator+(DensityProfile a, const DensityProfile& b) {
    return a += b;
  }
  friend DensityProfile operator-(DensityProfile a, const DensityProfile& b) {
    return a -= b;
  }
  friend DensityProfile operator*(double s, DensityProfile a) {
    return a *= s;
  }

 private:
  int K_ = 0;
  Eigen::VectorXcd modes_;
};

}  // namespace bgklab
