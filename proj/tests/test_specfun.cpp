#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "gks/specfun.hpp"

using namespace gks::specfun;

TEST_CASE("log_gamma at integer and half-integer points") {
  CHECK(std::abs(log_gamma(1.0)) < 1e-14);
  CHECK(std::abs(log_gamma(2.0)) < 1e-14);
  // ln Gamma(1/2) = ln sqrt(pi)
  CHECK(std::abs(log_gamma(0.5) - 0.57236494292470009) < 1e-12);
}

TEST_CASE("log_gamma rejects non-positive arguments") {
  CHECK_THROWS_AS(log_gamma(0.0), std::domain_error);
  CHECK_THROWS_AS(log_gamma(-1.5), std::domain_error);
}

TEST_CASE("log_gamma recurrence ln Gamma(z+1) = ln Gamma(z) + ln z") {
  // log-spaced grid over [1e-3, 1e9]
  for (double expo = -3.0; expo <= 9.0; expo += 0.25) {
    const double z = std::pow(10.0, expo);
    const double lhs = log_gamma(z + 1.0);
    const double rhs = log_gamma(z) + std::log(z);
    const double scale = std::max(1.0, std::abs(lhs));
    CHECK(std::abs(lhs - rhs) / scale < 1e-11);
  }
}

TEST_CASE("digamma reference values") {
  CHECK(std::abs(digamma(1.0) - (-0.57721566490153286)) < 1e-10);
  CHECK(std::abs(digamma(2.0) - 0.42278433509846714) < 1e-10);
  const double z = 1e6;
  CHECK(std::abs(digamma(z) - (std::log(z) - 0.5 / z)) < 1e-9);
  CHECK_THROWS_AS(digamma(0.0), std::domain_error);
  CHECK_THROWS_AS(digamma(-2.0), std::domain_error);
}

TEST_CASE("digamma matches central difference of log_gamma") {
  for (double expo = -1.0; expo <= 4.0; expo += 0.2) {
    const double z = std::pow(10.0, expo);
    const double step = 1e-5 * std::max(1.0, z);
    const double fd = (log_gamma(z + step) - log_gamma(z - step)) / (2.0 * step);
    CHECK(std::abs(digamma(z) - fd) < 1e-6 * std::max(1.0, std::abs(fd)));
  }
}

TEST_CASE("stirling_ratio limits and bounds") {
  CHECK(stirling_ratio(0.0) == 0.0);
  CHECK(std::abs(stirling_ratio(1000.0) - (1.0 - 1.0 / 12000.0)) < 1e-6);
  CHECK(stirling_ratio(1.0) < stirling_ratio(10.0));
  CHECK(stirling_ratio(10.0) < stirling_ratio(100.0));
  for (double z : {0.01, 0.1, 0.5, 1.0, 5.0, 10.0, 100.0, 1e4, 1e8}) {
    const double s = stirling_ratio(z);
    CHECK(s >= 0.0);
    CHECK(s < 1.0);
    if (z >= 10.0) {
      CHECK(std::abs(s - 1.0) <= 1.0 / (10.0 * z));
    }
  }
  CHECK_THROWS_AS(stirling_ratio(-0.1), std::domain_error);
}
