#pragma once

#include <cmath>
#include <numbers>

#include "bgklab/density_profile.hpp"

namespace bgklab {

/// Zero-mean kernel inverting -d_xx on the torus: Fourier coefficients
/// 1/(4 pi^2 k^2) for k != 0. Closed form x^2/2 - |x|/2 + 1/12 on [-1/2,1/2].
inline double psi_value(double x) {
  double r = x - std::round(x);
  r = std::abs(r);
  return 0.5 * r * r - 0.5 * r + 1.0 / 12.0;
}

/// Truncated Fourier synthesis of psi, for convergence checks.
inline double psi_fourier_partial(double x, int modes) {
  double s = 0.0;
  const double c = 1.0 / (4.0 * std::numbers::pi * std::numbers::pi);
  for (int k = 1; k <= modes; ++k)
    s += 2.0 * std::cos(2.0 * std::numbers::pi * k * x) * c / (double(k) * k);
  return s;
}

/// Convolution psi * (src - mean): multiplies mode k != 0 by 1/(4 pi^2 k^2)
/// and zeroes the mean.
inline DensityProfile psi_convolve(const DensityProfile& src) {
  DensityProfile out(src.truncation());
  const double c = 1.0 / (4.0 * std::numbers::pi * std::numbers::pi);
  for (int k = 1; k <= src.truncation(); ++k) {
    out.c(k) = src.c(k) * c / (double(k) * k);
    out.c(-k) = src.c(-k) * c / (double(k) * k);
  }
  out.c(0) = 0.0;
  return out;
}

}  // namespace bgklab
