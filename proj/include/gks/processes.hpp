#pragma once

#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "gks/asymptotics.hpp"
#include "gks/estimators.hpp"
#include "gks/rng.hpp"

namespace gks::processes {

enum class ProcessKind { iid_exponential, iid_gamma, ear1, regression_over };

enum class RegFn { rational, linear_sat, constant };

/// Kind-specific parameters for the shipped generators.
struct ProcessSpec {
  ProcessKind kind = ProcessKind::iid_exponential;
  double lambda = 1.0;       // exponential rate
  double shape = 1.0;        // iid_gamma
  double scale = 1.0;        // iid_gamma
  double rho = 0.0;          // ear1 dependence, in [0, 1)
  std::size_t burn_in = 1000;
  // regression_over
  ProcessKind base_kind = ProcessKind::iid_exponential;
  RegFn regfn = RegFn::rational;
  double reg_const = 1.0;
  double noise_var = 0.0;

  void validate() const {
    if (!(lambda > 0.0) || !(shape > 0.0) || !(scale > 0.0)) {
      throw std::invalid_argument("ProcessSpec: rates/shapes/scales must be positive");
    }
    if (rho < 0.0 || rho >= 1.0) {
      throw std::invalid_argument("ProcessSpec: rho must be in [0, 1)");
    }
    if (noise_var < 0.0) {
      throw std::invalid_argument("ProcessSpec: noise_var must be non-negative");
    }
  }
};

inline double sample_gamma(rng::SeededRng& rng, double shape, double scale) {
  return rng.gamma(shape, scale);
}

inline estimators::Sample generate_iid(rng::SeededRng& rng,
                                       const ProcessSpec& spec, std::size_t n) {
  spec.validate();
  if (n == 0) {
    throw std::invalid_argument("generate_iid: n must be positive");
  }
  std::vector<double> xs(n);
  switch (spec.kind) {
    case ProcessKind::iid_exponential:
      for (auto& x : xs) x = rng.exponential(spec.lambda);
      break;
    case ProcessKind::iid_gamma:
      for (auto& x : xs) x = rng.gamma(spec.shape, spec.scale);
      break;
    default:
      throw std::invalid_argument("generate_iid: spec kind is not iid_*");
  }
  return estimators::Sample(std::move(xs));
}

/// EAR(1): X_t = rho X_{t-1} + I_t E_t, I_t ~ Bernoulli(1 - rho),
/// E_t ~ Exp(lambda). Stationary marginal is exactly Exp(lambda).
inline estimators::Sample generate_ear1(rng::SeededRng& rng, double rho,
                                        double lambda, std::size_t n,
                                        std::size_t burn_in = 1000) {
  if (rho < 0.0 || rho >= 1.0 || !(lambda > 0.0)) {
    throw std::invalid_argument("generate_ear1: require rho in [0,1), lambda > 0");
  }
  if (n == 0) {
    throw std::invalid_argument("generate_ear1: n must be positive");
  }
  if (rho == 0.0) {
    ProcessSpec spec;
    spec.kind = ProcessKind::iid_exponential;
    spec.lambda = lambda;
    return generate_iid(rng, spec, n);
  }
  double state = rng.exponential(lambda);  // start at the stationary marginal
  std::vector<double> xs;
  xs.reserve(n);
  for (std::size_t t = 0; t < burn_in + n; ++t) {
    state *= rho;
    if (rng.bernoulli(1.0 - rho)) {
      state += rng.exponential(lambda);
    }
    if (t >= burn_in) {
      xs.push_back(state);
    }
  }
  return estimators::Sample(std::move(xs));
}

struct RegressionCurve {
  asymptotics::RealFn R;
  asymptotics::RealFn R1;
  asymptotics::RealFn R2;
};

inline RegressionCurve regression_function(RegFn fn, double c = 1.0) {
  switch (fn) {
    case RegFn::rational:
      return {[](double x) { return x / (1.0 + x); },
              [](double x) { double d = 1.0 + x; return 1.0 / (d * d); },
              [](double x) { double d = 1.0 + x; return -2.0 / (d * d * d); }};
    case RegFn::linear_sat:
      return {[](double x) { return 1.0 - std::exp(-x); },
              [](double x) { return std::exp(-x); },
              [](double x) { return -std::exp(-x); }};
    case RegFn::constant:
      return {[c](double) { return c; }, [](double) { return 0.0; },
              [](double) { return 0.0; }};
  }
  throw std::invalid_argument("regression_function: unknown kind");
}

/// (X_t, Phi(Y_t)) pairs with Phi(Y_t) = R(X_t) eta_t, eta_t ~ Gamma(1/v, v)
/// (mean 1, variance v), so sigma^2(x) = R^2(x) v.
inline estimators::Sample generate_regression(rng::SeededRng& rng,
                                              const ProcessSpec& base, RegFn regfn,
                                              double noise_var, std::size_t n,
                                              double reg_const = 1.0) {
  if (noise_var < 0.0) {
    throw std::invalid_argument("generate_regression: noise_var must be >= 0");
  }
  estimators::Sample xs_sample =
      base.kind == ProcessKind::ear1
          ? generate_ear1(rng, base.rho, base.lambda, n, base.burn_in)
          : generate_iid(rng, base, n);
  const auto curve = regression_function(regfn, reg_const);
  std::vector<double> xs = xs_sample.xs();
  std::vector<double> ys(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double eta =
        noise_var == 0.0 ? 1.0 : rng.gamma(1.0 / noise_var, noise_var);
    ys[i] = curve.R(xs[i]) * eta;
  }
  return estimators::Sample(std::move(xs), std::move(ys));
}

inline estimators::Sample generate(rng::SeededRng& rng, const ProcessSpec& spec,
                                   std::size_t n) {
  spec.validate();
  switch (spec.kind) {
    case ProcessKind::iid_exponential:
    case ProcessKind::iid_gamma:
      return generate_iid(rng, spec, n);
    case ProcessKind::ear1:
      return generate_ear1(rng, spec.rho, spec.lambda, n, spec.burn_in);
    case ProcessKind::regression_over: {
      ProcessSpec base = spec;
      base.kind = spec.base_kind;
      return generate_regression(rng, base, spec.regfn, spec.noise_var, n,
                                 spec.reg_const);
    }
  }
  throw std::invalid_argument("generate: unknown process kind");
}

/// True curves (f, derivatives, R, sigma^2) implied by a generator spec.
/// EAR(1) shares the Exp(lambda) marginal with the i.i.d. exponential.
inline asymptotics::CurveModel process_truth(const ProcessSpec& spec) {
  spec.validate();
  const ProcessKind marginal_kind =
      spec.kind == ProcessKind::regression_over ? spec.base_kind : spec.kind;
  asymptotics::CurveModel model;
  if (marginal_kind == ProcessKind::iid_exponential ||
      marginal_kind == ProcessKind::ear1) {
    const double lam = spec.lambda;
    model.f = [lam](double x) { return lam * std::exp(-lam * x); };
    model.f1 = [lam](double x) { return -lam * lam * std::exp(-lam * x); };
    model.f2 = [lam](double x) { return lam * lam * lam * std::exp(-lam * x); };
  } else {
    throw std::invalid_argument(
        "process_truth: closed-form truth available for exponential marginals only");
  }
  if (spec.kind == ProcessKind::regression_over) {
    auto curve = regression_function(spec.regfn, spec.reg_const);
    model.R = curve.R;
    model.R1 = curve.R1;
    model.R2 = curve.R2;
    const double v = spec.noise_var;
    auto R = curve.R;
    model.sigma2 = [R, v](double x) { const double r = R(x); return r * r * v; };
  }
  return model;
}

/// CSV ingestion: comma-separated, first row headers, '.' decimals. Rows are
/// reported by 1-based physical line number (the header is line 1).
inline estimators::Sample ingest_csv(const std::string& path,
                                     const std::string& x_column,
                                     const std::optional<std::string>& y_column) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("ingest_csv: cannot open file: " + path);
  }
  auto split = [](const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ',')) {
      fields.push_back(field);
    }
    if (!line.empty() && line.back() == ',') {
      fields.emplace_back();
    }
    return fields;
  };
  std::string line;
  std::size_t line_no = 0;
  // skip comment lines before the header
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    header = split(line);
    break;
  }
  if (header.empty()) {
    throw std::runtime_error("ingest_csv: empty sample");
  }
  auto column_index = [&](const std::string& name) {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (header[i] == name) return i;
    }
    throw std::runtime_error("ingest_csv: column not found: " + name);
  };
  const std::size_t xi = column_index(x_column);
  std::optional<std::size_t> yi;
  if (y_column) {
    yi = column_index(*y_column);
  }
  auto parse = [](const std::string& s, std::size_t row) {
    std::size_t pos = 0;
    double v;
    try {
      v = std::stod(s, &pos);
    } catch (const std::exception&) {
      throw std::runtime_error("ingest_csv: malformed number at row " +
                               std::to_string(row));
    }
    while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t')) ++pos;
    if (pos != s.size()) {
      throw std::runtime_error("ingest_csv: malformed number at row " +
                               std::to_string(row));
    }
    return v;
  };
  std::vector<double> xs;
  std::vector<double> ys;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    auto fields = split(line);
    if (fields.size() != header.size()) {
      throw std::runtime_error("ingest_csv: wrong field count at row " +
                               std::to_string(line_no));
    }
    const double x = parse(fields[xi], line_no);
    if (x < 0.0) {
      throw std::runtime_error("ingest_csv: negative x at row " +
                               std::to_string(line_no));
    }
    xs.push_back(x);
    if (yi) {
      ys.push_back(parse(fields[*yi], line_no));
    }
  }
  if (xs.empty()) {
    throw std::runtime_error("ingest_csv: empty sample");
  }
  if (yi) {
    return estimators::Sample(std::move(xs), std::move(ys));
  }
  return estimators::Sample(std::move(xs));
}

}  // namespace gks::processes
