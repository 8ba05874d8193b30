#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "gks/asymptotics.hpp"
#include "gks/estimators.hpp"
#include "gks/processes.hpp"
#include "gks/rng.hpp"

namespace gks::harness {

enum class Experiment {
  consistency_density,
  consistency_regression,
  clt_density,
  clt_regression,
  bias_density,
  bias_regression
};

inline std::string experiment_name(Experiment e) {
  switch (e) {
    case Experiment::consistency_density: return "consistency_density";
    case Experiment::consistency_regression: return "consistency_regression";
    case Experiment::clt_density: return "clt_density";
    case Experiment::clt_regression: return "clt_regression";
    case Experiment::bias_density: return "bias_density";
    case Experiment::bias_regression: return "bias_regression";
  }
  return "?";
}

/// Pass/fail thresholds. Config-overridable; defaults match the shipped
/// verification presets.
struct Thresholds {
  double ks_max = 0.07;
  double boundary_ks_max = 0.08;
  double mean_max = 0.1;
  double var_lo = 0.85;
  double var_hi = 1.15;
  double bias_se_mult = 3.0;
  double final_median_max = 0.05;
};

struct ExperimentConfig {
  Experiment experiment = Experiment::consistency_density;
  processes::ProcessSpec process;
  asymptotics::BandwidthSchedule schedule{1.0, 0.45};
  double fixed_h = 0.0;  // > 0 overrides the schedule
  double grid_a = 0.2;
  double grid_b = 3.0;
  std::size_t grid_count = 57;
  std::vector<std::size_t> sizes = {500, 2000, 8000};
  std::size_t replications = 50;
  std::uint64_t seed = 42;
  std::vector<double> target_points = {1.0};
  Thresholds thresholds;
  std::size_t workers = 1;

  void validate() const {
    process.validate();
    if (replications < 2) {
      throw std::invalid_argument("ExperimentConfig: replications must be >= 2");
    }
    if (sizes.empty()) {
      throw std::invalid_argument("ExperimentConfig: sizes must be non-empty");
    }
    for (std::size_t i = 1; i < sizes.size(); ++i) {
      if (sizes[i] <= sizes[i - 1]) {
        throw std::invalid_argument(
            "ExperimentConfig: sizes must strictly increase");
      }
    }
    for (double t : target_points) {
      if (t < 0.0) {
        throw std::invalid_argument("ExperimentConfig: target point < 0");
      }
    }
    if (!(grid_a < grid_b) || grid_count < 2) {
      throw std::invalid_argument("ExperimentConfig: invalid grid");
    }
  }

  double bandwidth_for(std::size_t n) const {
    return fixed_h > 0.0 ? fixed_h : asymptotics::bandwidth(schedule, n);
  }
};

struct SizeSummary {
  std::size_t n = 0;
  double h = 0.0;
  double median_sup_error = 0.0;
  double q90_sup_error = 0.0;
};

struct PointSummary {
  double x = 0.0;
  bool boundary = false;
  double h = 0.0;
  std::size_t n = 0;
  // CLT fields
  double residual_mean = 0.0;
  double residual_variance = 0.0;
  double ks_distance = 0.0;
  // bias fields
  double empirical_bias = 0.0;
  double theoretical_bias = 0.0;
  double mc_standard_error = 0.0;
};

struct Check {
  std::string name;
  bool passed;
};

struct ExperimentReport {
  ExperimentConfig config;
  std::vector<SizeSummary> sizes;
  std::vector<PointSummary> points;
  std::vector<Check> checks;
  double runtime_seconds = 0.0;

  bool passed() const {
    for (const auto& c : checks) {
      if (!c.passed) return false;
    }
    return true;
  }

  std::string serialize(bool include_runtime = false) const;
};

namespace detail {

inline std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline double standard_normal_cdf(double v) {
  return 0.5 * std::erfc(-v / std::sqrt(2.0));
}

template <class F>
void parallel_for(std::size_t count, std::size_t workers, F&& fn) {
  if (workers <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      fn(i);
    }
  };
  std::vector<std::thread> pool;
  const std::size_t k = std::min(workers, count);
  pool.reserve(k);
  for (std::size_t w = 0; w < k; ++w) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
}

// Nearest-rank quantile on a sorted copy; deterministic.
inline double quantile(std::vector<double> values, double q) {
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  if (q <= 0.0) return values.front();
  std::size_t rank = static_cast<std::size_t>(std::ceil(q * static_cast<double>(n)));
  if (rank < 1) rank = 1;
  if (rank > n) rank = n;
  return values[rank - 1];
}

inline double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

inline double variance_of(const std::vector<double>& v) {
  const double m = mean_of(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return s / static_cast<double>(v.size() - 1);
}

}  // namespace detail

/// Exact sup-distance between the empirical CDF of values and the standard
/// normal CDF (two-sided sorted-sample formula).
inline double ks_distance(std::vector<double> values) {
  if (values.empty()) {
    throw std::invalid_argument("ks_distance: empty sample");
  }
  std::sort(values.begin(), values.end());
  const double n = static_cast<double>(values.size());
  double d = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double cdf = detail::standard_normal_cdf(values[i]);
    const double lo = static_cast<double>(i) / n;
    const double hi = static_cast<double>(i + 1) / n;
    d = std::max(d, std::max(hi - cdf, cdf - lo));
  }
  return d;
}

inline ExperimentReport run_consistency(const ExperimentConfig& config) {
  config.validate();
  const auto t0 = std::chrono::steady_clock::now();
  const bool regression = config.experiment == Experiment::consistency_regression;
  const auto model = processes::process_truth(config.process);
  const asymptotics::RealFn truth = regression ? *model.R : model.f;
  const auto grid = estimators::EvaluationGrid::linspace(
      config.grid_a, config.grid_b, config.grid_count);

  ExperimentReport report;
  report.config = config;
  for (std::size_t si = 0; si < config.sizes.size(); ++si) {
    const std::size_t n = config.sizes[si];
    const double h = config.bandwidth_for(n);
    std::vector<double> sup_errors(config.replications);
    detail::parallel_for(config.replications, config.workers, [&](std::size_t r) {
      rng::SeededRng rng(config.seed, si * config.replications + r);
      auto sample = processes::generate(rng, config.process, n);
      auto series = estimators::estimate_on_grid(sample, grid, h, regression);
      sup_errors[r] = estimators::sup_error(
          series, truth,
          regression ? estimators::Curve::regression : estimators::Curve::density);
    });
    SizeSummary s;
    s.n = n;
    s.h = h;
    s.median_sup_error = detail::quantile(sup_errors, 0.5);
    s.q90_sup_error = detail::quantile(sup_errors, 0.9);
    report.sizes.push_back(s);
  }
  for (std::size_t i = 1; i < report.sizes.size(); ++i) {
    report.checks.push_back(
        {"median_decreasing_" + std::to_string(report.sizes[i].n),
         report.sizes[i].median_sup_error < report.sizes[i - 1].median_sup_error});
  }
  report.checks.push_back(
      {"final_median",
       report.sizes.back().median_sup_error < config.thresholds.final_median_max});
  report.runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

inline ExperimentReport run_clt(const ExperimentConfig& config) {
  config.validate();
  const auto t0 = std::chrono::steady_clock::now();
  const bool regression = config.experiment == Experiment::clt_regression;
  const auto model = processes::process_truth(config.process);
  const std::size_t n = config.sizes.back();
  const double h = config.bandwidth_for(n);

  struct PointSetup {
    double x;
    bool boundary;
    double truth;
    double variance;
  };
  std::vector<PointSetup> setups;
  for (double x : config.target_points) {
    PointSetup p{x, x == 0.0, 0.0, 0.0};
    if (regression) {
      p.truth = (*model.R)(x);
      p.variance = asymptotics::regression_clt_variance(model, x);
    } else {
      p.truth = model.f(x);
      p.variance = asymptotics::density_clt_variance(model, x);
    }
    if (!(p.variance > 0.0)) {
      throw std::domain_error("run_clt: degenerate limiting variance at x = " +
                              detail::fmt(x));
    }
    setups.push_back(p);
  }

  std::vector<std::vector<double>> residuals(
      setups.size(), std::vector<double>(config.replications));
  detail::parallel_for(config.replications, config.workers, [&](std::size_t r) {
    rng::SeededRng rng(config.seed, r);
    auto sample = processes::generate(rng, config.process, n);
    for (std::size_t pi = 0; pi < setups.size(); ++pi) {
      const auto& p = setups[pi];
      double estimate;
      if (regression) {
        estimate = estimators::regression_estimate(sample, p.x, h).value;
      } else {
        estimate = estimators::density_estimate(sample, p.x, h);
      }
      residuals[pi][r] = asymptotics::standardize(estimate, p.truth, p.variance,
                                                  n, h, p.boundary);
    }
  });

  ExperimentReport report;
  report.config = config;
  for (std::size_t pi = 0; pi < setups.size(); ++pi) {
    PointSummary s;
    s.x = setups[pi].x;
    s.boundary = setups[pi].boundary;
    s.h = h;
    s.n = n;
    s.residual_mean = detail::mean_of(residuals[pi]);
    s.residual_variance = detail::variance_of(residuals[pi]);
    s.ks_distance = ks_distance(residuals[pi]);
    report.points.push_back(s);
    const std::string tag = "point" + std::to_string(pi);
    const double ks_max = s.boundary ? config.thresholds.boundary_ks_max
                                     : config.thresholds.ks_max;
    report.checks.push_back({tag + "_ks", s.ks_distance < ks_max});
    report.checks.push_back(
        {tag + "_mean", std::abs(s.residual_mean) < config.thresholds.mean_max});
    report.checks.push_back({tag + "_variance",
                             s.residual_variance >= config.thresholds.var_lo &&
                                 s.residual_variance <= config.thresholds.var_hi});
  }
  report.runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

inline ExperimentReport run_bias(const ExperimentConfig& config) {
  config.validate();
  const auto t0 = std::chrono::steady_clock::now();
  const bool regression = config.experiment == Experiment::bias_regression;
  const auto model = processes::process_truth(config.process);
  const std::size_t n = config.sizes.back();
  const double h = config.bandwidth_for(n);

  std::vector<std::vector<double>> estimates(
      config.target_points.size(), std::vector<double>(config.replications));
  detail::parallel_for(config.replications, config.workers, [&](std::size_t r) {
    rng::SeededRng rng(config.seed, r);
    auto sample = processes::generate(rng, config.process, n);
    for (std::size_t pi = 0; pi < config.target_points.size(); ++pi) {
      const double x = config.target_points[pi];
      estimates[pi][r] = regression
                             ? estimators::regression_estimate(sample, x, h).value
                             : estimators::density_estimate(sample, x, h);
    }
  });

  ExperimentReport report;
  report.config = config;
  for (std::size_t pi = 0; pi < config.target_points.size(); ++pi) {
    const double x = config.target_points[pi];
    const double truth = regression ? (*model.R)(x) : model.f(x);
    PointSummary s;
    s.x = x;
    s.boundary = x == 0.0;
    s.h = h;
    s.n = n;
    s.empirical_bias = detail::mean_of(estimates[pi]) - truth;
    s.theoretical_bias = regression ? asymptotics::regression_bias(model, x, h)
                                    : asymptotics::density_bias(model, x, h);
    s.mc_standard_error = std::sqrt(detail::variance_of(estimates[pi]) /
                                    static_cast<double>(config.replications));
    report.points.push_back(s);
    const bool ok = std::abs(s.empirical_bias - s.theoretical_bias) <=
                    config.thresholds.bias_se_mult * s.mc_standard_error;
    report.checks.push_back({"point" + std::to_string(pi) + "_bias", ok});
  }
  report.runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

inline ExperimentReport run(const ExperimentConfig& config) {
  switch (config.experiment) {
    case Experiment::consistency_density:
    case Experiment::consistency_regression:
      return run_consistency(config);
    case Experiment::clt_density:
    case Experiment::clt_regression:
      return run_clt(config);
    case Experiment::bias_density:
    case Experiment::bias_regression:
      return run_bias(config);
  }
  throw std::invalid_argument("run: unknown experiment");
}

inline std::string process_kind_name(processes::ProcessKind k) {
  switch (k) {
    case processes::ProcessKind::iid_exponential: return "iid_exponential";
    case processes::ProcessKind::iid_gamma: return "iid_gamma";
    case processes::ProcessKind::ear1: return "ear1";
    case processes::ProcessKind::regression_over: return "regression_over";
  }
  return "?";
}

inline std::string regfn_name(processes::RegFn f) {
  switch (f) {
    case processes::RegFn::rational: return "rational";
    case processes::RegFn::linear_sat: return "linear_sat";
    case processes::RegFn::constant: return "constant";
  }
  return "?";
}

/// Deterministic text serialization with stable key ordering. The runtime
/// line is opt-in so that reports from repeated runs stay byte-identical.
inline std::string ExperimentReport::serialize(bool include_runtime) const {
  using detail::fmt;
  std::ostringstream out;
  out << "experiment = " << experiment_name(config.experiment) << "\n";
  out << "process = " << process_kind_name(config.process.kind) << "\n";
  out << "lambda = " << fmt(config.process.lambda) << "\n";
  if (config.process.kind == processes::ProcessKind::iid_gamma) {
    out << "shape = " << fmt(config.process.shape) << "\n";
    out << "scale = " << fmt(config.process.scale) << "\n";
  }
  if (config.process.kind == processes::ProcessKind::ear1 ||
      (config.process.kind == processes::ProcessKind::regression_over &&
       config.process.base_kind == processes::ProcessKind::ear1)) {
    out << "rho = " << fmt(config.process.rho) << "\n";
  }
  if (config.process.kind == processes::ProcessKind::regression_over) {
    out << "base = " << process_kind_name(config.process.base_kind) << "\n";
    out << "regfn = " << regfn_name(config.process.regfn) << "\n";
    out << "noise_var = " << fmt(config.process.noise_var) << "\n";
  }
  out << "seed = " << config.seed << "\n";
  out << "replications = " << config.replications << "\n";
  if (config.fixed_h > 0.0) {
    out << "h = " << fmt(config.fixed_h) << "\n";
  } else {
    out << "schedule.c = " << fmt(config.schedule.c) << "\n";
    out << "schedule.alpha = " << fmt(config.schedule.alpha_exp) << "\n";
  }
  out << "sizes =";
  for (auto n : config.sizes) out << " " << n;
  out << "\n";
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    const auto& s = sizes[i];
    const std::string p = "size." + std::to_string(s.n) + ".";
    out << p << "h = " << fmt(s.h) << "\n";
    out << p << "median_sup_error = " << fmt(s.median_sup_error) << "\n";
    out << p << "q90_sup_error = " << fmt(s.q90_sup_error) << "\n";
  }
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& s = points[i];
    const std::string p = "point." + std::to_string(i) + ".";
    out << p << "x = " << fmt(s.x) << "\n";
    out << p << "boundary = " << (s.boundary ? "true" : "false") << "\n";
    out << p << "n = " << s.n << "\n";
    out << p << "h = " << fmt(s.h) << "\n";
    if (config.experiment == Experiment::clt_density ||
        config.experiment == Experiment::clt_regression) {
      out << p << "residual_mean = " << fmt(s.residual_mean) << "\n";
      out << p << "residual_variance = " << fmt(s.residual_variance) << "\n";
      out << p << "ks_distance = " << fmt(s.ks_distance) << "\n";
    } else {
      out << p << "empirical_bias = " << fmt(s.empirical_bias) << "\n";
      out << p << "theoretical_bias = " << fmt(s.theoretical_bias) << "\n";
      out << p << "mc_standard_error = " << fmt(s.mc_standard_error) << "\n";
    }
  }
  for (const auto& c : checks) {
    out << "check." << c.name << " = " << (c.passed ? "PASS" : "FAIL") << "\n";
  }
  out << "overall = " << (passed() ? "PASS" : "FAIL") << "\n";
  if (include_runtime) {
    out << "runtime_seconds = " << fmt(runtime_seconds) << "\n";
  }
  return out.str();
}

}  // namespace gks::harness
