#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

namespace gks::asymptotics {

/// h(n) = c * n^{-alpha_exp}.
struct BandwidthSchedule {
  double c;
  double alpha_exp;

  BandwidthSchedule(double c_, double alpha_) : c(c_), alpha_exp(alpha_) {
    if (!(c > 0.0) || !(alpha_exp > 0.0) || !(alpha_exp < 1.0)) {
      throw std::invalid_argument(
          "BandwidthSchedule: require c > 0 and alpha_exp in (0, 1)");
    }
  }
};

inline double bandwidth(const BandwidthSchedule& schedule, std::size_t n) {
  if (n < 1) {
    throw std::invalid_argument("bandwidth: n must be >= 1");
  }
  return schedule.c * std::pow(static_cast<double>(n), -schedule.alpha_exp);
}

using RealFn = std::function<double(double)>;

/// Ground-truth curves with caller-supplied analytic derivatives. Derivative
/// fields are cross-checked against central finite differences on a probe
/// grid at registration.
struct CurveModel {
  RealFn f;
  RealFn f1;
  RealFn f2;
  std::optional<RealFn> R;
  std::optional<RealFn> R1;
  std::optional<RealFn> R2;
  std::optional<RealFn> sigma2;
};

namespace detail {

inline void check_derivative(const RealFn& fn, const RealFn& deriv,
                             const std::vector<double>& probe, double tol,
                             const char* what) {
  const double step = 1e-4;
  for (double x : probe) {
    const double fd = (fn(x + step) - fn(x - step)) / (2.0 * step);
    if (std::abs(fd - deriv(x)) > tol) {
      throw std::invalid_argument(std::string("CurveModel: inconsistent ") + what);
    }
  }
}

}  // namespace detail

/// Validates derivative consistency and returns the model.
inline CurveModel make_curve_model(
    CurveModel model, const std::vector<double>& probe = {0.25, 0.5, 1.0, 2.0, 4.0},
    double tol = 1e-5) {
  if (!model.f || !model.f1 || !model.f2) {
    throw std::invalid_argument("CurveModel: f, f1, f2 are required");
  }
  detail::check_derivative(model.f, model.f1, probe, tol, "f1");
  detail::check_derivative(model.f1, model.f2, probe, tol, "f2");
  if (model.R) {
    if (!model.R1 || !model.R2) {
      throw std::invalid_argument("CurveModel: R requires R1 and R2");
    }
    detail::check_derivative(*model.R, *model.R1, probe, tol, "R1");
    detail::check_derivative(*model.R1, *model.R2, probe, tol, "R2");
  }
  return model;
}

/// Leading density bias (2 f'(x) + x f''(x)) / 2 * h.
inline double density_bias(const CurveModel& model, double x, double h) {
  if (!model.f1 || !model.f2) {
    throw std::logic_error("density_bias: derivatives absent");
  }
  return 0.5 * (2.0 * model.f1(x) + x * model.f2(x)) * h;
}

/// Leading regression bias: b(x) h / f(x) for x > 0 with
/// b(x) = R'(x) f(x) + (x/2) R''(x) f(x) + x R'(x) f'(x); R'(0) h at x = 0.
inline double regression_bias(const CurveModel& model, double x, double h) {
  if (!model.R1 || !model.R2 || !model.f || !model.f1) {
    throw std::logic_error("regression_bias: required fields absent");
  }
  if (x == 0.0) {
    return (*model.R1)(0.0) * h;
  }
  const double fx = model.f(x);
  if (!(fx > 0.0)) {
    throw std::domain_error("regression_bias: f(x) must be positive");
  }
  const double b = (*model.R1)(x) * fx + 0.5 * x * (*model.R2)(x) * fx +
                   x * (*model.R1)(x) * model.f1(x);
  return b * h / fx;
}

/// Limiting variance of the density CLT: f(x)/(2 sqrt(pi x)) interior,
/// f(0)/2 at the boundary.
inline double density_clt_variance(const CurveModel& model, double x) {
  const double fx = model.f(x);
  if (!(fx > 0.0)) {
    throw std::domain_error("density_clt_variance: f(x) must be positive");
  }
  if (x == 0.0) {
    return 0.5 * fx;
  }
  return fx / (2.0 * std::sqrt(M_PI * x));
}

/// Limiting variance of the regression CLT: sigma^2(x)/(2 sqrt(pi x) f(x))
/// interior, sigma^2(0)/(2 f(0)) at the boundary.
inline double regression_clt_variance(const CurveModel& model, double x) {
  if (!model.sigma2) {
    throw std::logic_error("regression_clt_variance: sigma2 absent");
  }
  const double fx = model.f(x);
  if (!(fx > 0.0)) {
    throw std::domain_error("regression_clt_variance: f(x) must be positive");
  }
  const double s2 = (*model.sigma2)(x);
  if (x == 0.0) {
    return s2 / (2.0 * fx);
  }
  return s2 / (2.0 * std::sqrt(M_PI * x) * fx);
}

/// sqrt(n sqrt(h)) (estimate - truth)/sqrt(variance) interior;
/// sqrt(n h) scaling at the boundary.
inline double standardize(double estimate, double truth, double variance,
                          std::size_t n, double h, bool boundary) {
  if (!(variance > 0.0)) {
    throw std::domain_error("standardize: variance must be positive");
  }
  const double nn = static_cast<double>(n);
  const double rate = boundary ? std::sqrt(nn * h) : std::sqrt(nn * std::sqrt(h));
  return rate * (estimate - truth) / std::sqrt(variance);
}

}  // namespace gks::asymptotics
