#pragma once

#include "bgklab/green_kernel.hpp"
#include "bgklab/phase_field.hpp"

namespace bgklab {

/// Apply (1 - v^2 d_xx)^{-1} as a Fourier multiplier: entry (k, v) scaled by
/// 1/(1 + (2 pi v k)^2). The k=0 slice is untouched, so mass is preserved
/// exactly; the kernel is a positive convolution, so nonnegative
/// reconstructions stay nonnegative.
inline PhaseField apply_resolvent(const PhaseField& src) {
  PhaseField out = src;
  const int K = src.truncation();
  const auto& v = src.grid().nodes;
  for (int k = 1; k <= K; ++k) {
    for (int j = 0; j < v.size(); ++j) {
      const double s = GreenKernel::symbol(v[j], k);
      out.at(k, j) *= s;
      out.at(-k, j) *= s;
    }
  }
  return out;
}

}  // namespace bgklab
