#pragma once

#include <Eigen/Dense>
#include <complex>

#include "bgklab/density_profile.hpp"
#include "bgklab/errors.hpp"
#include "bgklab/velocity_grid.hpp"

namespace bgklab {

/// Distribution f(x,v) stored as Fourier modes in x over a velocity grid:
/// row k+K holds the complex velocity profile of mode k. Real fields obey
/// mode(-k) = conj(mode(k)) entrywise.
class PhaseField {
 public:
  PhaseField() = default;
  PhaseField(int K, VelocityGrid grid)
      : K_(K),
        grid_(std::move(grid)),
        modes_(Eigen::MatrixXcd::Zero(2 * K + 1, grid_.size())) {
    if (K < 0) throw parameter_error("truncation order must be nonnegative");
  }

  int truncation() const { return K_; }
  const VelocityGrid& grid() const { return grid_; }

  Eigen::MatrixXcd& raw() { return modes_; }
  const Eigen::MatrixXcd& raw() const { return modes_; }

  auto mode(int k) { return modes_.row(k + K_); }
  auto mode(int k) const { return modes_.row(k + K_); }

  std::complex<double>& at(int k, int j) { return modes_(k + K_, j); }
  const std::complex<double>& at(int k, int j) const {
    return modes_(k + K_, j);
  }

  /// Velocity integral of every mode: the Fourier modes of the density.
  DensityProfile density() const {
    DensityProfile rho(K_);
    rho.raw() = modes_ * grid_.weights.cast<std::complex<double>>();
    return rho;
  }

  /// Weighted velocity integral (weight given nodewise).
  DensityProfile velocity_moment(const Eigen::VectorXd& weight) const {
    DensityProfile out(K_);
    out.raw() = modes_ * (grid_.weights.array() * weight.array())
                            .matrix()
                            .cast<std::complex<double>>();
    return out;
  }

  double total_mass() const {
    return grid_.integrate(Eigen::VectorXcd(mode(0))).real();
  }

  double reality_defect() const {
    double d = 0.0;
    for (int k = 0; k <= K_; ++k)
      d = std::max(d,
                   (mode(k) - mode(-k).conjugate()).cwiseAbs().maxCoeff());
    return d;
  }

  /// Pointwise reconstruction over x for one velocity node.
  double evaluate(double x, int node) const {
    std::complex<double> s = at(0, node);
    for (int k = 1; k <= K_; ++k) {
      const auto phase = std::polar(1.0, 2.0 * std::numbers::pi * k * x);
      s += at(k, node) * phase + at(-k, node) * std::conj(phase);
    }
    return s.real();
  }

  void check_compatible(const PhaseField& other) const {
    if (other.K_ != K_ || !grid_.same_as(other.grid_))
      throw shape_error("phase fields have different discretizations");
  }

  PhaseField& operator+=(const PhaseField& o) {
    check_compatible(o);
    modes_ += o.modes_;
    return *this;
  }
  PhaseField& operator-=(const PhaseField& o) {
    check_compatible(o);
    modes_ -= o.modes_;
    return *this;
  }
  PhaseField& operator*=(double s) {
    modes_ *= s;
    return *this;
  }
  friend PhaseField operator+(PhaseField a, const PhaseField& b) {
    return a += b;
  }
  friend PhaseField operator-(PhaseField a, const PhaseField& b) {
    return a -= b;
  }
  friend PhaseField operator*(double s, PhaseField a) { return a *= s; }

 private:
  int K_ = 0;
  VelocityGrid grid_;
  Eigen::MatrixXcd modes_;
};

}  // namespace bgklab
