#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace gks::rng {

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline std::uint64_t rotl(std::uint64_t v, int k) {
  return (v << k) | (v >> (64 - k));
}

}  // namespace detail

/// Deterministic splittable generator: xoshiro256++ seeded from (seed, stream)
/// via splitmix64. Identical (seed, stream) yields an identical sequence on
/// every platform. Distribution methods use fixed algorithms (no
/// implementation-defined std:: distributions).
class SeededRng {
 public:
  SeededRng(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t sm = seed ^ (0xD2B74407B1CE6E93ULL * (stream + 1));
    for (auto& word : state_) {
      word = detail::splitmix64(sm);
    }
    if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0) {
      state_[0] = 1;
    }
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = detail::rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = detail::rotl(state_[3], 45);
    return result;
  }

  /// Uniform on [0, 1).
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform on (0, 1].
  double uniform_open() {
    return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
  }

  bool bernoulli(double p) { return uniform() < p; }

  /// Exponential with rate lambda (mean 1/lambda).
  double exponential(double rate) {
    if (!(rate > 0.0)) {
      throw std::invalid_argument("exponential: rate must be positive");
    }
    return -std::log(uniform_open()) / rate;
  }

  /// Standard normal via Box-Muller (no cached spare, keeps streams simple).
  double normal() {
    const double u1 = uniform_open();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }

  /// Gamma(shape, scale) via Marsaglia-Tsang rejection; exact in distribution.
  double gamma(double shape, double scale) {
    if (!(shape > 0.0) || !(scale > 0.0)) {
      throw std::invalid_argument("gamma: shape and scale must be positive");
    }
    if (shape < 1.0) {
      // Boost: Gamma(a) = Gamma(a + 1) * U^{1/a}.
      const double g = gamma(shape + 1.0, 1.0);
      return g * std::pow(uniform_open(), 1.0 / shape) * scale;
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      double x, v;
      do {
        x = normal();
        v = 1.0 + c * x;
      } while (v <= 0.0);
      v = v * v * v;
      const double u = uniform_open();
      if (u < 1.0 - 0.0331 * x * x * x * x) {
        return d * v * scale;
      }
      if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) {
        return d * v * scale;
      }
    }
  }

 private:
  std::uint64_t state_[4];
};

}  // namespace gks::rng
