#pragma once

#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "gks/harness.hpp"

namespace gks::config {

/// Error in an experiment config file (unknown key, bad value, missing file).
class ConfigError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

inline std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t");
  return s.substr(begin, end - begin + 1);
}

inline double to_double(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config: bad numeric value for '" + key + "': " + value);
  }
}

inline std::uint64_t to_u64(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const unsigned long long v = std::stoull(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config: bad integer value for '" + key + "': " + value);
  }
}

inline std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> items;
  std::istringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) items.push_back(item);
  }
  return items;
}

}  // namespace detail

inline harness::Experiment parse_experiment(const std::string& name) {
  using harness::Experiment;
  if (name == "consistency_density") return Experiment::consistency_density;
  if (name == "consistency_regression") return Experiment::consistency_regression;
  if (name == "clt_density") return Experiment::clt_density;
  if (name == "clt_regression") return Experiment::clt_regression;
  if (name == "bias_density") return Experiment::bias_density;
  if (name == "bias_regression") return Experiment::bias_regression;
  throw ConfigError("config: unknown experiment '" + name + "'");
}

inline processes::ProcessKind parse_process_kind(const std::string& name) {
  using processes::ProcessKind;
  if (name == "iid_exponential") return ProcessKind::iid_exponential;
  if (name == "iid_gamma") return ProcessKind::iid_gamma;
  if (name == "ear1") return ProcessKind::ear1;
  if (name == "regression_over") return ProcessKind::regression_over;
  throw ConfigError("config: unknown process '" + name + "'");
}

inline processes::RegFn parse_regfn(const std::string& name) {
  using processes::RegFn;
  if (name == "rational") return RegFn::rational;
  if (name == "linear_sat") return RegFn::linear_sat;
  if (name == "constant") return RegFn::constant;
  throw ConfigError("config: unknown regfn '" + name + "'");
}

/// Parses 'key = value' lines ('#' comments, blank lines allowed) into an
/// ExperimentConfig. Unknown keys are errors.
inline harness::ExperimentConfig parse_experiment_config(std::istream& in) {
  using detail::to_double;
  using detail::to_u64;
  harness::ExperimentConfig cfg;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::string stripped = detail::trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config: missing '=' at line " + std::to_string(line_no));
    }
    const std::string key = detail::trim(stripped.substr(0, eq));
    const std::string value = detail::trim(stripped.substr(eq + 1));
    if (key == "experiment") {
      cfg.experiment = parse_experiment(value);
    } else if (key == "process") {
      cfg.process.kind = parse_process_kind(value);
    } else if (key == "base") {
      cfg.process.base_kind = parse_process_kind(value);
    } else if (key == "lambda") {
      cfg.process.lambda = to_double(key, value);
    } else if (key == "shape") {
      cfg.process.shape = to_double(key, value);
    } else if (key == "scale") {
      cfg.process.scale = to_double(key, value);
    } else if (key == "rho") {
      cfg.process.rho = to_double(key, value);
    } else if (key == "burn_in") {
      cfg.process.burn_in = static_cast<std::size_t>(to_u64(key, value));
    } else if (key == "regfn") {
      cfg.process.regfn = parse_regfn(value);
    } else if (key == "reg_const") {
      cfg.process.reg_const = to_double(key, value);
    } else if (key == "noise_var") {
      cfg.process.noise_var = to_double(key, value);
    } else if (key == "schedule.c") {
      cfg.schedule = asymptotics::BandwidthSchedule(to_double(key, value),
                                                    cfg.schedule.alpha_exp);
    } else if (key == "schedule.alpha") {
      cfg.schedule =
          asymptotics::BandwidthSchedule(cfg.schedule.c, to_double(key, value));
    } else if (key == "h") {
      cfg.fixed_h = to_double(key, value);
    } else if (key == "grid.a") {
      cfg.grid_a = to_double(key, value);
    } else if (key == "grid.b") {
      cfg.grid_b = to_double(key, value);
    } else if (key == "grid.count") {
      cfg.grid_count = static_cast<std::size_t>(to_u64(key, value));
    } else if (key == "sizes") {
      cfg.sizes.clear();
      for (const auto& item : detail::split_list(value)) {
        cfg.sizes.push_back(static_cast<std::size_t>(to_u64(key, item)));
      }
    } else if (key == "targets") {
      cfg.target_points.clear();
      for (const auto& item : detail::split_list(value)) {
        cfg.target_points.push_back(to_double(key, item));
      }
    } else if (key == "replications") {
      cfg.replications = static_cast<std::size_t>(to_u64(key, value));
    } else if (key == "seed") {
      cfg.seed = to_u64(key, value);
    } else if (key == "workers") {
      cfg.workers = static_cast<std::size_t>(to_u64(key, value));
    } else if (key == "ks_max") {
      cfg.thresholds.ks_max = to_double(key, value);
    } else if (key == "boundary_ks_max") {
      cfg.thresholds.boundary_ks_max = to_double(key, value);
    } else if (key == "mean_max") {
      cfg.thresholds.mean_max = to_double(key, value);
    } else if (key == "var_lo") {
      cfg.thresholds.var_lo = to_double(key, value);
    } else if (key == "var_hi") {
      cfg.thresholds.var_hi = to_double(key, value);
    } else if (key == "bias_se_mult") {
      cfg.thresholds.bias_se_mult = to_double(key, value);
    } else if (key == "final_median_max") {
      cfg.thresholds.final_median_max = to_double(key, value);
    } else {
      throw ConfigError("config: unknown key '" + key + "' at line " +
                        std::to_string(line_no));
    }
  }
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return cfg;
}

inline harness::ExperimentConfig load_experiment_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("config: cannot open file: " + path);
  }
  return parse_experiment_config(in);
}

}  // namespace gks::config
