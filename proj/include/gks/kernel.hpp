#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

#include "gks/quadrature.hpp"
#include "gks/specfun.hpp"

namespace gks::kernel {

/// Target point and bandwidth inducing the gamma kernel with shape x/h + 1
/// and scale h.
struct KernelParams {
  double x;
  double h;

  KernelParams(double x_, double h_) : x(x_), h(h_) {
    if (!(h > 0.0)) {
      throw std::invalid_argument("KernelParams: bandwidth must be positive");
    }
    if (x < 0.0) {
      throw std::invalid_argument("KernelParams: target point must be non-negative");
    }
  }

  double shape() const { return x / h + 1.0; }
  double scale() const { return h; }
};

/// Precomputed gamma kernel for repeated evaluation at a fixed (x, h).
class GammaKernel {
 public:
  explicit GammaKernel(const KernelParams& params)
      : alpha_(params.shape()),
        beta_(params.scale()),
        log_norm_(specfun::log_gamma(alpha_) + alpha_ * std::log(beta_)) {}

  GammaKernel(double x, double h) : GammaKernel(KernelParams(x, h)) {}

  double alpha() const { return alpha_; }
  double beta() const { return beta_; }

  double operator()(double y) const {
    if (y < 0.0) {
      return 0.0;
    }
    if (y == 0.0) {
      // alpha == 1 is the exponential case whose right-limit at 0 is 1/h.
      return alpha_ == 1.0 ? 1.0 / beta_ : 0.0;
    }
    return std::exp((alpha_ - 1.0) * std::log(y) - y / beta_ - log_norm_);
  }

  /// log density; -inf where the density vanishes.
  double log_density(double y) const {
    if (y < 0.0 || (y == 0.0 && alpha_ != 1.0)) {
      return -std::numeric_limits<double>::infinity();
    }
    if (y == 0.0) {
      return -std::log(beta_);
    }
    return (alpha_ - 1.0) * std::log(y) - y / beta_ - log_norm_;
  }

 private:
  double alpha_;
  double beta_;
  double log_norm_;
};

inline double kernel_eval(const KernelParams& params, double y) {
  return GammaKernel(params)(y);
}

/// Exact supremum of the kernel density: the mode value x for x > 0
/// (shape > 1), and 1/h for x = 0 (exponential branch).
inline double kernel_sup_bound(const KernelParams& params) {
  if (params.x == 0.0) {
    return 1.0 / params.h;
  }
  GammaKernel k(params);
  return k(params.x);
}

/// Auxiliary gamma law G_{(p,n,x)} with shape p x / h + 1 and scale h / p.
struct GammaRef {
  double p;
  double x;
  double h;

  GammaRef(double p_, double x_, double h_) : p(p_), x(x_), h(h_) {
    if (!(p > 0.0) || !(h > 0.0) || x < 0.0) {
      throw std::invalid_argument("GammaRef: require p > 0, h > 0, x >= 0");
    }
  }

  double shape() const { return p * x / h + 1.0; }
  double scale() const { return h / p; }
};

/// B(p,n,x) = Gamma(px/h + 1) / (Gamma^p(x/h + 1) p^{px/h+1} h^{p-1}),
/// evaluated entirely in log-space.
inline double b_constant(double p, double x, double h) {
  if (!(p >= 1.0)) {
    throw std::domain_error("b_constant: require p >= 1");
  }
  if (!(h > 0.0) || x < 0.0) {
    throw std::invalid_argument("b_constant: require h > 0, x >= 0");
  }
  const double r = x / h;
  const double log_b = specfun::log_gamma(p * r + 1.0) -
                       p * specfun::log_gamma(r + 1.0) -
                       (p * r + 1.0) * std::log(p) - (p - 1.0) * std::log(h);
  return std::exp(log_b);
}

namespace detail {

// Breakpoints bracketing a gamma density's mass: mode plus a ladder of
// standard-deviation offsets so the adaptive rule always samples the peak.
inline std::vector<double> gamma_breakpoints(double shape, double scale) {
  const double mode = shape > 1.0 ? (shape - 1.0) * scale : 0.0;
  const double sd = std::sqrt(shape) * scale;
  std::vector<double> pts{0.0};
  for (double k : {-40.0, -10.0, -3.0, -1.0, 0.0, 1.0, 3.0, 10.0, 40.0}) {
    pts.push_back(std::max(0.0, mode + k * sd));
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

}  // namespace detail

/// E[fn(G)] for G ~ Gamma(shape, scale) of gref, by adaptive quadrature.
template <class F>
double gamma_expectation(const GammaRef& gref, F&& fn, double rel_tol = 1e-8) {
  const double shape = gref.shape();
  const double scale = gref.scale();
  const double log_norm = specfun::log_gamma(shape) + shape * std::log(scale);
  auto integrand = [&](double y) {
    if (y <= 0.0) {
      return shape == 1.0 ? fn(0.0) / scale : 0.0;
    }
    const double log_pdf = (shape - 1.0) * std::log(y) - y / scale - log_norm;
    return fn(y) * std::exp(log_pdf);
  };
  return quadrature::integrate(integrand, detail::gamma_breakpoints(shape, scale),
                               rel_tol);
}

/// Both sides of the moment identity
///   E(phi(T) K^p(T)) = B(p,n,x) E(phi(G_p) g(G_p)),  T ~ g.
/// Returns (lhs, rhs), each computed by independent quadrature.
inline std::pair<double, double> moment_identity_check(
    double p, double x, double h, const std::function<double(double)>& phi,
    const std::function<double(double)>& g) {
  GammaKernel k(x, h);
  auto lhs_integrand = [&](double y) {
    const double log_k = k.log_density(y);
    if (!std::isfinite(log_k)) {
      return 0.0;
    }
    return phi(y) * std::exp(p * log_k) * g(y);
  };
  const double lhs = quadrature::integrate(
      lhs_integrand, detail::gamma_breakpoints(k.alpha(), k.beta()), 1e-9);
  GammaRef gref(p, x, h);
  const double rhs =
      b_constant(p, x, h) *
      gamma_expectation(gref, [&](double y) { return phi(y) * g(y); }, 1e-9);
  return {lhs, rhs};
}

/// max over y_grid of |K_{x,h} - K_{u,h}|.
inline double lipschitz_modulus(double x, double u, double h,
                                const std::vector<double>& y_grid) {
  if (y_grid.empty()) {
    throw std::invalid_argument("lipschitz_modulus: empty evaluation grid");
  }
  GammaKernel kx(x, h);
  GammaKernel ku(u, h);
  double best = 0.0;
  for (double y : y_grid) {
    best = std::max(best, std::abs(kx(y) - ku(y)));
  }
  return best;
}

}  // namespace gks::kernel
