// gks: gamma-kernel density/regression estimation and Monte Carlo
// verification from the command line.
//
// Exit codes: 0 success, 1 verification failure, 2 usage/config error,
// 3 I/O error.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "gks/config.hpp"
#include "gks/estimators.hpp"
#include "gks/harness.hpp"
#include "gks/processes.hpp"
#include "gks/rng.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;

class IoError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// Write-to-temp plus atomic rename; no partially written output on failure.
void atomic_write(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw IoError("cannot open output file: " + tmp);
    }
    out << content;
    if (!out) {
      throw IoError("write failed: " + tmp);
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    throw IoError("rename failed: " + path + ": " + ec.message());
  }
}

struct KeyValueSpec {
  std::map<std::string, std::string> entries;
};

KeyValueSpec parse_kv(const std::string& text, const std::string& what) {
  KeyValueSpec spec;
  std::istringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) {
      throw gks::config::ConfigError("bad " + what + " spec: " + text);
    }
    spec.entries[item.substr(0, eq)] = item.substr(eq + 1);
  }
  return spec;
}

double kv_double(const KeyValueSpec& spec, const std::string& key,
                 const std::string& what) {
  auto it = spec.entries.find(key);
  if (it == spec.entries.end()) {
    throw gks::config::ConfigError(what + " spec missing '" + key + "'");
  }
  return gks::config::detail::to_double(key, it->second);
}

int run_estimate(const std::string& input, const std::string& x_col,
                 const std::optional<std::string>& y_col, double fixed_h,
                 const std::string& schedule_spec, const std::string& grid_spec,
                 const std::string& out_path) {
  const auto t0 = std::chrono::steady_clock::now();
  if (!std::filesystem::exists(input)) {
    throw IoError("input file does not exist: " + input);
  }
  auto sample = gks::processes::ingest_csv(input, x_col, y_col);

  double h = fixed_h;
  if (h <= 0.0) {
    if (schedule_spec.empty()) {
      throw gks::config::ConfigError("estimate: need --h or --schedule");
    }
    auto kv = parse_kv(schedule_spec, "schedule");
    gks::asymptotics::BandwidthSchedule schedule(
        kv_double(kv, "c", "schedule"), kv_double(kv, "alpha", "schedule"));
    h = gks::asymptotics::bandwidth(schedule, sample.size());
  }

  auto gkv = parse_kv(grid_spec, "grid");
  const double a = kv_double(gkv, "a", "grid");
  const double b = kv_double(gkv, "b", "grid");
  const auto count = static_cast<std::size_t>(kv_double(gkv, "count", "grid"));
  if (count < 2 || !(a < b)) {
    throw gks::config::ConfigError("estimate: grid requires a < b, count >= 2");
  }
  auto grid = gks::estimators::EvaluationGrid::linspace(a, b, count);

  const bool with_regression = sample.has_ys();
  auto series = gks::estimators::estimate_on_grid(sample, grid, h, with_regression);

  std::ostringstream csv;
  csv << "grid_x,density";
  if (with_regression) csv << ",numerator,regression,starved";
  csv << "\n";
  for (std::size_t i = 0; i < grid.points.size(); ++i) {
    csv << fmt(grid.points[i]) << "," << fmt(series.density[i]);
    if (with_regression) {
      csv << "," << fmt((*series.numerator)[i]) << ","
          << fmt((*series.regression)[i]) << ","
          << ((*series.starved)[i] ? "1" : "0");
    }
    csv << "\n";
  }
  atomic_write(out_path, csv.str());

  std::ostringstream summary;
  summary << "input = " << input << "\n";
  summary << "n = " << sample.size() << "\n";
  summary << "h = " << fmt(h) << "\n";
  summary << "grid.a = " << fmt(a) << "\n";
  summary << "grid.b = " << fmt(b) << "\n";
  summary << "grid.count = " << count << "\n";
  summary << "regression = " << (with_regression ? "true" : "false") << "\n";
  atomic_write(out_path + ".summary", summary.str());

  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::cerr << "estimate: wrote " << out_path << " (" << grid.points.size()
            << " rows, " << elapsed << " s)\n";
  return kExitOk;
}

int run_simulate(const std::string& process, double rho, double lambda,
                 double shape, double scale, const std::string& regfn,
                 double noise_var, std::size_t n, std::uint64_t seed,
                 std::uint64_t stream, const std::string& out_path) {
  gks::processes::ProcessSpec spec;
  spec.kind = gks::config::parse_process_kind(process);
  spec.lambda = lambda;
  spec.shape = shape;
  spec.scale = scale;
  spec.rho = rho;
  spec.regfn = gks::config::parse_regfn(regfn);
  spec.noise_var = noise_var;
  if (n == 0) {
    throw gks::config::ConfigError("simulate: n must be positive");
  }
  gks::rng::SeededRng rng(seed, stream);
  auto sample = gks::processes::generate(rng, spec, n);

  std::ostringstream csv;
  csv << "# seed = " << seed << ", stream = " << stream << "\n";
  csv << (sample.has_ys() ? "x,y\n" : "x\n");
  for (std::size_t i = 0; i < sample.size(); ++i) {
    csv << fmt(sample.xs()[i]);
    if (sample.has_ys()) csv << "," << fmt(sample.ys()[i]);
    csv << "\n";
  }
  atomic_write(out_path, csv.str());
  std::cerr << "simulate: wrote " << out_path << " (" << n << " rows)\n";
  return kExitOk;
}

int run_verify(const std::string& config_path, std::size_t workers,
               const std::string& out_path) {
  auto cfg = gks::config::load_experiment_config(config_path);
  if (workers > 0) {
    cfg.workers = workers;
  }
  auto report = gks::harness::run(cfg);
  atomic_write(out_path, report.serialize());
  std::cerr << "verify: " << (report.passed() ? "PASS" : "FAIL") << " in "
            << report.runtime_seconds << " s; report at " << out_path << "\n";
  return report.passed() ? kExitOk : kExitVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gamma-kernel estimation and verification"};
  app.require_subcommand(1);

  // estimate
  auto* estimate = app.add_subcommand("estimate", "estimate curves from CSV data");
  estimate->set_help_flag("--help", "print help");  // frees -h for the bandwidth
  std::string input, x_col, out_path;
  std::string y_col_raw, schedule_spec;
  std::string grid_spec = "a=0.2,b=3,count=201";
  double fixed_h = 0.0;
  estimate->add_option("--input", input, "input CSV path")->required();
  estimate->add_option("--x-col", x_col, "x column name")->required();
  estimate->add_option("--y-col", y_col_raw, "y column name (enables regression)");
  estimate->add_option("--h", fixed_h, "fixed bandwidth");
  estimate->add_option("--schedule", schedule_spec, "bandwidth schedule c=..,alpha=..");
  estimate->add_option("--grid", grid_spec, "grid spec a=..,b=..,count=..");
  estimate->add_option("--out", out_path, "output CSV path")->required();

  // simulate
  auto* simulate = app.add_subcommand("simulate", "generate a sample as CSV");
  std::string process = "iid_exponential";
  std::string regfn = "rational";
  double rho = 0.0, lambda = 1.0, shape = 1.0, scale = 1.0, noise_var = 0.0;
  std::size_t n = 0;
  std::uint64_t seed = 0, stream = 0;
  std::string sim_out;
  simulate->add_option("--process", process,
                       "iid_exponential|iid_gamma|ear1|regression_over");
  simulate->add_option("--rho", rho, "EAR(1) dependence in [0,1)");
  simulate->add_option("--lambda", lambda, "exponential rate");
  simulate->add_option("--shape", shape, "gamma shape");
  simulate->add_option("--scale", scale, "gamma scale");
  simulate->add_option("--regfn", regfn, "rational|linear_sat|constant");
  simulate->add_option("--noise-var", noise_var, "regression noise variance");
  simulate->add_option("--n", n, "sample size")->required();
  simulate->add_option("--seed", seed, "RNG seed");
  simulate->add_option("--stream", stream, "RNG stream");
  simulate->add_option("--out", sim_out, "output CSV path")->required();

  // verify
  auto* verify = app.add_subcommand("verify", "run a verification experiment");
  std::string config_path, report_path;
  std::size_t workers = 0;
  verify->add_option("--config", config_path, "experiment config file")->required();
  verify->add_option("--workers", workers, "parallel workers (0 = config value)");
  verify->add_option("--out", report_path, "report output path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (estimate->parsed()) {
      std::optional<std::string> y_col;
      if (!y_col_raw.empty()) y_col = y_col_raw;
      return run_estimate(input, x_col, y_col, fixed_h, schedule_spec, grid_spec,
                          out_path);
    }
    if (simulate->parsed()) {
      return run_simulate(process, rho, lambda, shape, scale, regfn, noise_var, n,
                          seed, stream, sim_out);
    }
    return run_verify(config_path, workers, report_path);
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}
