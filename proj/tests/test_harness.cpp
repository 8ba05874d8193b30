#include <doctest.h>

#include <cmath>
#include <vector>

#include "gks/config.hpp"
#include "gks/harness.hpp"
#include "gks/rng.hpp"

using namespace gks::harness;

namespace {

ExperimentConfig small_consistency_config() {
  ExperimentConfig cfg;
  cfg.experiment = Experiment::consistency_density;
  cfg.process.kind = gks::processes::ProcessKind::iid_exponential;
  cfg.sizes = {200, 800};
  cfg.replications = 8;
  cfg.grid_count = 15;
  cfg.seed = 42;
  cfg.thresholds.final_median_max = 0.2;
  return cfg;
}

}  // namespace

TEST_CASE("ks_distance reference values") {
  CHECK(ks_distance({0.0}) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(ks_distance({10.0}) == doctest::Approx(1.0).epsilon(1e-7));
  // all-zero ensemble (degenerate point mass at the normal median)
  CHECK(ks_distance(std::vector<double>(1000, 0.0)) ==
        doctest::Approx(0.5).epsilon(1e-9));
  gks::rng::SeededRng rng(42, 0);
  std::vector<double> draws(100000);
  for (auto& d : draws) d = rng.normal();
  CHECK(ks_distance(draws) < 0.006);
  CHECK_THROWS_AS(ks_distance({}), std::invalid_argument);
}

TEST_CASE("noiseless constant regression has zero sup-error") {
  ExperimentConfig cfg;
  cfg.experiment = Experiment::consistency_regression;
  cfg.process.kind = gks::processes::ProcessKind::regression_over;
  cfg.process.base_kind = gks::processes::ProcessKind::iid_exponential;
  cfg.process.regfn = gks::processes::RegFn::constant;
  cfg.process.reg_const = 1.0;
  cfg.process.noise_var = 0.0;
  cfg.sizes = {100};
  cfg.replications = 2;
  cfg.grid_count = 11;
  auto report = run(cfg);
  REQUIRE(report.sizes.size() == 1);
  CHECK(report.sizes[0].median_sup_error == 0.0);
}

TEST_CASE("consistency run: determinism and worker independence") {
  auto cfg = small_consistency_config();
  auto r1 = run(cfg);
  auto r2 = run(cfg);
  CHECK(r1.serialize() == r2.serialize());
  cfg.workers = 4;
  auto r4 = run(cfg);
  CHECK(r1.serialize() == r4.serialize());
}

TEST_CASE("consistency quantile curves are non-increasing in n") {
  auto cfg = small_consistency_config();
  cfg.sizes = {200, 1000, 5000};
  cfg.replications = 10;
  auto report = run(cfg);
  for (std::size_t i = 1; i < report.sizes.size(); ++i) {
    CHECK(report.sizes[i].median_sup_error <= report.sizes[i - 1].median_sup_error);
    CHECK(report.sizes[i].q90_sup_error <= report.sizes[i - 1].q90_sup_error);
  }
}

TEST_CASE("clt run reports residual statistics per point") {
  ExperimentConfig cfg;
  cfg.experiment = Experiment::clt_density;
  cfg.sizes = {2000};
  cfg.replications = 64;
  cfg.target_points = {1.0, 0.0};
  cfg.workers = 2;
  auto report = run(cfg);
  REQUIRE(report.points.size() == 2);
  CHECK_FALSE(report.points[0].boundary);
  CHECK(report.points[1].boundary);
  for (const auto& p : report.points) {
    CHECK(std::isfinite(p.residual_mean));
    CHECK(p.residual_variance > 0.0);
    CHECK(p.ks_distance >= 0.0);
    CHECK(p.ks_distance <= 1.0);
  }
  auto again = run(cfg);
  CHECK(report.serialize() == again.serialize());
}

TEST_CASE("clt run rejects degenerate limiting variance") {
  ExperimentConfig cfg;
  cfg.experiment = Experiment::clt_regression;
  cfg.process.kind = gks::processes::ProcessKind::regression_over;
  cfg.process.regfn = gks::processes::RegFn::rational;
  cfg.process.noise_var = 0.25;
  cfg.sizes = {500};
  cfg.replications = 8;
  cfg.target_points = {0.0};  // sigma^2(0) = R(0)^2 v = 0
  CHECK_THROWS_AS(run(cfg), std::domain_error);
}

TEST_CASE("clt scaling cross-check: residual variance stable under h change") {
  // Certifies the sqrt(n sqrt(h)) scaling: halving h must not move the
  // standardized residual variance by more than 15% of itself.
  ExperimentConfig cfg;
  cfg.experiment = Experiment::clt_density;
  cfg.sizes = {4000};
  cfg.replications = 400;
  cfg.target_points = {1.0};
  cfg.workers = 4;
  cfg.fixed_h = 0.05;
  const double v1 = run(cfg).points[0].residual_variance;
  cfg.fixed_h = 0.025;
  const double v2 = run(cfg).points[0].residual_variance;
  CHECK(std::abs(v1 - v2) < 0.15 * v1);
}

TEST_CASE("bias run: constant regression bias within 3 MC standard errors of 0") {
  ExperimentConfig cfg;
  cfg.experiment = Experiment::bias_regression;
  cfg.process.kind = gks::processes::ProcessKind::regression_over;
  cfg.process.base_kind = gks::processes::ProcessKind::iid_exponential;
  cfg.process.regfn = gks::processes::RegFn::constant;
  cfg.process.reg_const = 2.0;
  cfg.process.noise_var = 0.1;
  cfg.sizes = {2000};
  cfg.replications = 50;
  cfg.target_points = {0.5, 1.0};
  cfg.fixed_h = 0.1;
  cfg.workers = 2;
  auto report = run(cfg);
  for (const auto& p : report.points) {
    CHECK(p.theoretical_bias == 0.0);
    CHECK(std::abs(p.empirical_bias) <= 3.0 * p.mc_standard_error);
  }
  CHECK(report.passed());
}

TEST_CASE("config parsing") {
  std::istringstream in(
      "# preset\n"
      "experiment = clt_density\n"
      "process = ear1\n"
      "rho = 0.5\n"
      "lambda = 1\n"
      "sizes = 500, 2000\n"
      "targets = 0, 1\n"
      "replications = 16\n"
      "seed = 7\n"
      "schedule.alpha = 0.4\n"
      "ks_max = 0.2\n");
  auto cfg = gks::config::parse_experiment_config(in);
  CHECK(cfg.experiment == Experiment::clt_density);
  CHECK(cfg.process.kind == gks::processes::ProcessKind::ear1);
  CHECK(cfg.process.rho == 0.5);
  CHECK(cfg.sizes == std::vector<std::size_t>{500, 2000});
  CHECK(cfg.target_points == std::vector<double>{0.0, 1.0});
  CHECK(cfg.seed == 7);
  CHECK(cfg.schedule.alpha_exp == 0.4);
  CHECK(cfg.thresholds.ks_max == 0.2);

  std::istringstream bad("experiment = clt_density\nbogus_key = 1\n");
  CHECK_THROWS_AS(gks::config::parse_experiment_config(bad),
                  gks::config::ConfigError);
  std::istringstream bad2("sizes = 2000, 500\n");
  CHECK_THROWS_AS(gks::config::parse_experiment_config(bad2),
                  gks::config::ConfigError);
}
