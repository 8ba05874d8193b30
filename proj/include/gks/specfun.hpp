#pragma once

#include <cmath>
#include <stdexcept>

namespace gks::specfun {

namespace detail {

// Stirling series for ln Gamma, valid for z >= 12.
inline double log_gamma_stirling(double z) {
  constexpr double half_log_two_pi = 0.91893853320467274178;
  const double zi = 1.0 / z;
  const double zi2 = zi * zi;
  // Bernoulli-number coefficients B_{2k} / (2k (2k-1)).
  double series = zi * (1.0 / 12.0
                        + zi2 * (-1.0 / 360.0
                                 + zi2 * (1.0 / 1260.0
                                          + zi2 * (-1.0 / 1680.0
                                                   + zi2 * (1.0 / 1188.0)))));
  return (z - 0.5) * std::log(z) - z + half_log_two_pi + series;
}

}  // namespace detail

/// ln Gamma(z) for z > 0.
inline double log_gamma(double z) {
  if (!(z > 0.0)) {
    throw std::domain_error("log_gamma: argument must be positive");
  }
  if (z >= 12.0) {
    return detail::log_gamma_stirling(z);
  }
  // Shift into the Stirling regime via ln Gamma(z) = ln Gamma(z+k) - sum ln(z+i).
  double shift = 0.0;
  double w = z;
  while (w < 12.0) {
    shift += std::log(w);
    w += 1.0;
  }
  return detail::log_gamma_stirling(w) - shift;
}

/// Digamma function Psi(z) = d/dz ln Gamma(z), z > 0.
inline double digamma(double z) {
  if (!(z > 0.0)) {
    throw std::domain_error("digamma: argument must be positive");
  }
  double acc = 0.0;
  double w = z;
  while (w < 10.0) {
    acc -= 1.0 / w;
    w += 1.0;
  }
  const double wi = 1.0 / w;
  const double wi2 = wi * wi;
  double series = wi2 * (1.0 / 12.0
                         + wi2 * (-1.0 / 120.0
                                  + wi2 * (1.0 / 252.0
                                           + wi2 * (-1.0 / 240.0))));
  return acc + std::log(w) - 0.5 * wi - series;
}

/// Stirling ratio S(z) = sqrt(2 pi) e^{-z} z^{z+1/2} / Gamma(z+1), with S(0) = 0.
inline double stirling_ratio(double z) {
  if (z < 0.0) {
    throw std::domain_error("stirling_ratio: argument must be non-negative");
  }
  if (z == 0.0) {
    return 0.0;
  }
  // S(z) = exp(-mu(z)) where mu is the Binet function
  // mu(z) = ln Gamma(z+1) - (z + 1/2) ln z + z - ln sqrt(2 pi).
  // Computing mu by differencing the log terms cancels catastrophically for
  // large z, so use its asymptotic series after shifting z upward via
  // mu(z) = mu(z+1) + (z + 1/2) ln(1 + 1/z) - 1.
  double shift = 0.0;
  double w = z;
  while (w < 12.0) {
    shift += (w + 0.5) * std::log1p(1.0 / w) - 1.0;
    w += 1.0;
  }
  const double w2 = w * w;
  const double mu_w =
      (1.0 / 12.0 - (1.0 / 360.0 - (1.0 / 1260.0 - (1.0 / 1680.0 - 1.0 / (1188.0 * w2)) / w2) / w2) / w2) / w;
  return std::exp(-(shift + mu_w));
}

}  // namespace gks::specfun
