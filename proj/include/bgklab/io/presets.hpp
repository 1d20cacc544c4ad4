#pragma once

#include <random>

#include "bgklab/density_profile.hpp"
#include "bgklab/evolution/linear_flow.hpp"

namespace bgklab::io {

/// Band-limited random density 1 + sum a_k cos + b_k sin, rescaled so the
/// reconstruction stays above 1 - amplitude.
inline DensityProfile random_positive_density(int K, int kmax,
                                              double amplitude,
                                              std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  DensityProfile rho = DensityProfile::uniform(K);
  double budget = 0.0;
  std::vector<std::complex<double>> coef(kmax + 1);
  for (int k = 1; k <= kmax && k <= K; ++k) {
    coef[k] = std::complex<double>(gauss(rng), gauss(rng));
    budget += 2.0 * std::abs(coef[k]);
  }
  const double scale = budget > 0.0 ? amplitude / budget : 0.0;
  for (int k = 1; k <= kmax && k <= K; ++k) {
    rho.c(k) = scale * coef[k];
    rho.c(-k) = std::conj(rho.c(k));
  }
  return rho;
}

inline DensityProfile cosine_density(int K, int k, double amplitude) {
  DensityProfile rho = DensityProfile::uniform(K);
  if (k >= 1 && k <= K) {
    rho.c(k) = 0.5 * amplitude;
    rho.c(-k) = 0.5 * amplitude;
  }
  return rho;
}

/// Linearized perturbation menu: one basis mode at one Fourier mode, a
/// density-only perturbation, or a random band-limited field. All carry zero
/// global mass.
inline CoefficientField mode_perturbation(int K, int M, int k, int m,
                                          double amplitude) {
  CoefficientField h(K, M);
  if (k == 0 && m == 0)
    throw parameter_error("mode (0,0) carries global mass; not admissible");
  h.coeffs(k, m) = (k == 0) ? amplitude : 0.5 * amplitude;
  return h;
}

inline CoefficientField density_perturbation(int K, int M, int k,
                                             double amplitude) {
  return mode_perturbation(K, M, k, 0, amplitude);
}

inline CoefficientField random_perturbation(int K, int M, double amplitude,
                                            std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  CoefficientField h(K, M);
  for (int k = 0; k <= K; ++k)
    for (int m = 0; m < M; ++m)
      h.coeffs(k, m) = std::complex<double>(gauss(rng), gauss(rng)) /
                       double((1 + k) * (1 + m));
  h.coeffs(0, 0) = 0.0;  // zero global mass
  // k=0 content of a real field is real
  h.coeffs.row(0) = h.coeffs.row(0).real().cast<std::complex<double>>();
  const double n = h.norm(false);
  if (n > 0.0) h.coeffs *= amplitude / n;
  return h;
}

}  // namespace bgklab::io
