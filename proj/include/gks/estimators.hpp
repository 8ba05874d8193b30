#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "gks/kernel.hpp"

namespace gks::estimators {

/// Ordered (x[, y]) observations with non-negative x. A canonical summation
/// order (indices sorted by (x, y)) is fixed at construction so estimates are
/// invariant under row shuffles.
class Sample {
 public:
  explicit Sample(std::vector<double> xs) : xs_(std::move(xs)) { init(); }

  Sample(std::vector<double> xs, std::vector<double> ys)
      : xs_(std::move(xs)), ys_(std::move(ys)) {
    if (ys_->size() != xs_.size()) {
      throw std::invalid_argument("Sample: xs and ys lengths differ");
    }
    init();
  }

  std::size_t size() const { return xs_.size(); }
  const std::vector<double>& xs() const { return xs_; }
  bool has_ys() const { return ys_.has_value(); }
  const std::vector<double>& ys() const {
    if (!ys_) {
      throw std::logic_error("Sample: ys requested but absent");
    }
    return *ys_;
  }
  const std::vector<std::size_t>& canonical_order() const { return order_; }

 private:
  void init() {
    if (xs_.empty()) {
      throw std::invalid_argument("Sample: empty sample");
    }
    for (double v : xs_) {
      if (!(v >= 0.0)) {
        throw std::invalid_argument("Sample: negative or non-finite x value");
      }
    }
    order_.resize(xs_.size());
    std::iota(order_.begin(), order_.end(), std::size_t{0});
    std::sort(order_.begin(), order_.end(), [&](std::size_t a, std::size_t b) {
      if (xs_[a] != xs_[b]) return xs_[a] < xs_[b];
      if (ys_) return (*ys_)[a] < (*ys_)[b];
      return false;
    });
  }

  std::vector<double> xs_;
  std::optional<std::vector<double>> ys_;
  std::vector<std::size_t> order_;
};

namespace detail {

// Pairwise (tree) reduction; sequential accumulation below the leaf size.
template <class Term>
double pairwise_sum(std::size_t lo, std::size_t hi, const Term& term) {
  if (hi - lo <= 32) {
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) {
      s += term(i);
    }
    return s;
  }
  const std::size_t mid = lo + (hi - lo) / 2;
  return pairwise_sum(lo, mid, term) + pairwise_sum(mid, hi, term);
}

}  // namespace detail

/// D_n(x) = (1/n) sum_t K_{x,h}(X_t).
inline double density_estimate(const Sample& sample, double x, double h) {
  kernel::GammaKernel k(x, h);
  const auto& xs = sample.xs();
  const auto& order = sample.canonical_order();
  const double sum = detail::pairwise_sum(
      0, sample.size(), [&](std::size_t i) { return k(xs[order[i]]); });
  return sum / static_cast<double>(sample.size());
}

/// N_n(x) = (1/n) sum_t Phi(Y_t) K_{x,h}(X_t).
inline double numerator_estimate(const Sample& sample, double x, double h) {
  const auto& ys = sample.ys();  // throws when absent
  kernel::GammaKernel k(x, h);
  const auto& xs = sample.xs();
  const auto& order = sample.canonical_order();
  const double sum = detail::pairwise_sum(0, sample.size(), [&](std::size_t i) {
    return ys[order[i]] * k(xs[order[i]]);
  });
  return sum / static_cast<double>(sample.size());
}

struct RegressionValue {
  double value;
  bool starved;  // D_n(x) == 0: the y/0 = 0 convention was applied
};

/// R_n(x) = N_n(x) / D_n(x), with R_n = 0 flagged as starved when D_n = 0.
inline RegressionValue regression_estimate(const Sample& sample, double x,
                                           double h) {
  const double d = density_estimate(sample, x, h);
  if (d == 0.0) {
    return {0.0, true};
  }
  return {numerator_estimate(sample, x, h) / d, false};
}

/// Compact evaluation window Delta = [a, b] with a strictly increasing grid.
struct EvaluationGrid {
  std::vector<double> points;
  double a;
  double b;

  EvaluationGrid(std::vector<double> pts, double a_, double b_)
      : points(std::move(pts)), a(a_), b(b_) {
    if (points.empty()) {
      throw std::invalid_argument("EvaluationGrid: empty grid");
    }
    if (!(a <= b)) {
      throw std::invalid_argument("EvaluationGrid: require a <= b");
    }
    for (std::size_t i = 0; i < points.size(); ++i) {
      if (points[i] < a || points[i] > b) {
        throw std::invalid_argument("EvaluationGrid: point outside [a, b]");
      }
      if (i > 0 && !(points[i] > points[i - 1])) {
        throw std::invalid_argument("EvaluationGrid: points must strictly increase");
      }
    }
  }

  static EvaluationGrid linspace(double a, double b, std::size_t count) {
    if (count < 1) {
      throw std::invalid_argument("EvaluationGrid: count must be >= 1");
    }
    std::vector<double> pts(count);
    if (count == 1) {
      pts[0] = a;
    } else {
      const double step = (b - a) / static_cast<double>(count - 1);
      for (std::size_t i = 0; i < count; ++i) {
        pts[i] = a + step * static_cast<double>(i);
      }
      pts.back() = b;
    }
    return EvaluationGrid(std::move(pts), a, b);
  }
};

struct EstimateSeries {
  EvaluationGrid grid;
  std::vector<double> density;
  std::optional<std::vector<double>> numerator;
  std::optional<std::vector<double>> regression;
  std::optional<std::vector<bool>> starved;
  double h;
  std::size_t n;
};

inline EstimateSeries estimate_on_grid(const Sample& sample,
                                       const EvaluationGrid& grid, double h,
                                       bool with_regression) {
  if (with_regression && !sample.has_ys()) {
    throw std::logic_error("estimate_on_grid: regression requested without ys");
  }
  EstimateSeries series{grid, {}, std::nullopt, std::nullopt, std::nullopt,
                        h,    sample.size()};
  series.density.reserve(grid.points.size());
  if (with_regression) {
    series.numerator.emplace();
    series.regression.emplace();
    series.starved.emplace();
  }
  for (double x : grid.points) {
    const double d = density_estimate(sample, x, h);
    series.density.push_back(d);
    if (with_regression) {
      const double num = numerator_estimate(sample, x, h);
      series.numerator->push_back(num);
      if (d == 0.0) {
        series.regression->push_back(0.0);
        series.starved->push_back(true);
      } else {
        series.regression->push_back(num / d);
        series.starved->push_back(false);
      }
    }
  }
  return series;
}

enum class Curve { density, regression };

/// max over grid points of |estimate - reference(point)|.
inline double sup_error(const EstimateSeries& series,
                        const std::function<double(double)>& reference,
                        Curve which) {
  const std::vector<double>* values = nullptr;
  if (which == Curve::density) {
    values = &series.density;
  } else {
    if (!series.regression) {
      throw std::logic_error("sup_error: regression curve absent");
    }
    values = &*series.regression;
  }
  double best = 0.0;
  for (std::size_t i = 0; i < series.grid.points.size(); ++i) {
    best = std::max(best, std::abs((*values)[i] - reference(series.grid.points[i])));
  }
  return best;
}

}  // namespace gks::estimators
