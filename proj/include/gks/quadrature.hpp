#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

namespace gks::quadrature {

/// Raised when the adaptive scheme exhausts its interval budget. Carries the
/// best available estimate and its residual error bound.
class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(double estimate, double residual)
      : std::runtime_error("quadrature failed to converge; residual = " +
                           std::to_string(residual)),
        estimate_(estimate),
        residual_(residual) {}

  double estimate() const { return estimate_; }
  double residual() const { return residual_; }

 private:
  double estimate_;
  double residual_;
};

namespace detail {

// 15-point Kronrod nodes/weights with embedded 7-point Gauss rule (QUADPACK).
inline constexpr double kKronrodNodes[8] = {
    0.99145537112081263921, 0.94910791234275852453, 0.86486442335976907279,
    0.74153118559939443986, 0.58608723546769113029, 0.40584515137739716691,
    0.20778495500789846760, 0.0};
inline constexpr double kKronrodWeights[8] = {
    0.02293532201052922496, 0.06309209262997855329, 0.10479001032225018384,
    0.14065325971552591875, 0.16900472663926790283, 0.19035057806478540991,
    0.20443294007529889241, 0.20948214108472782801};
inline constexpr double kGaussWeights[4] = {
    0.12948496616886969327, 0.27970539148927666790, 0.38183005050511894495,
    0.41795918367346938776};

struct Segment {
  double lo, hi, value, error;
  bool operator<(const Segment& other) const { return error < other.error; }
};

template <class F>
Segment gauss_kronrod(F& f, double lo, double hi) {
  const double center = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  double kronrod = 0.0;
  double gauss = 0.0;
  for (int i = 0; i < 8; ++i) {
    const double offset = half * kKronrodNodes[i];
    const double f1 = f(center - offset);
    const double f2 = (i == 7) ? f1 : f(center + offset);
    const double pair = (i == 7) ? f1 : f1 + f2;
    kronrod += kKronrodWeights[i] * pair;
    if (i % 2 == 1) {
      gauss += kGaussWeights[i / 2] * pair;
    }
  }
  kronrod *= half;
  gauss *= half;
  return Segment{lo, hi, kronrod, std::abs(kronrod - gauss)};
}

}  // namespace detail

/// Adaptive Gauss-Kronrod integration over the union of [b_i, b_{i+1}]
/// segments given by sorted breakpoints. Refines the worst segment until the
/// summed error estimate meets rel_tol (with a small absolute floor so that
/// zero integrands terminate).
template <class F>
double integrate(F&& f, const std::vector<double>& breakpoints,
                 double rel_tol = 1e-8, int max_intervals = 4000) {
  if (breakpoints.size() < 2) {
    throw std::invalid_argument("integrate: need at least two breakpoints");
  }
  std::priority_queue<detail::Segment> segments;
  double total = 0.0;
  double error = 0.0;
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    if (!(breakpoints[i] < breakpoints[i + 1])) {
      continue;  // degenerate or out-of-order breakpoint
    }
    auto seg = detail::gauss_kronrod(f, breakpoints[i], breakpoints[i + 1]);
    total += seg.value;
    error += seg.error;
    segments.push(seg);
  }
  int used = static_cast<int>(segments.size());
  const double abs_floor = 1e-14;
  while (error > rel_tol * std::abs(total) + abs_floor) {
    if (used >= max_intervals || segments.empty()) {
      throw QuadratureError(total, error);
    }
    auto worst = segments.top();
    segments.pop();
    total -= worst.value;
    error -= worst.error;
    const double mid = 0.5 * (worst.lo + worst.hi);
    auto left = detail::gauss_kronrod(f, worst.lo, mid);
    auto right = detail::gauss_kronrod(f, mid, worst.hi);
    total += left.value + right.value;
    error += left.error + right.error;
    segments.push(left);
    segments.push(right);
    ++used;
  }
  return total;
}

template <class F>
double integrate(F&& f, double lo, double hi, double rel_tol = 1e-8,
                 int max_intervals = 4000) {
  return integrate(std::forward<F>(f), std::vector<double>{lo, hi}, rel_tol,
                   max_intervals);
}

}  // namespace gks::quadrature
