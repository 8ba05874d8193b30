// Acceptance suite: one pass/fail line per criterion. Exit code is the
// number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <thread>
#include <vector>

#include "gks/estimators.hpp"
#include "gks/harness.hpp"
#include "gks/kernel.hpp"
#include "gks/processes.hpp"
#include "gks/quadrature.hpp"
#include "gks/rng.hpp"

namespace {

std::size_t hw_workers() {
  const unsigned n = std::thread::hardware_concurrency();
  return n == 0 ? 4 : n;
}

int g_failures = 0;

void criterion(int id, const std::string& name, const std::function<bool(std::string&)>& body) {
  std::string detail;
  bool ok = false;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    ok = body(detail);
  } catch (const std::exception& e) {
    detail = std::string("exception: ") + e.what();
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::printf("[%s] %2d: %s (%.1f s)%s%s\n", ok ? "PASS" : "FAIL", id, name.c_str(),
              secs, detail.empty() ? "" : " -- ", detail.c_str());
  std::fflush(stdout);
  if (!ok) ++g_failures;
}

std::vector<double> linspace(double a, double b, std::size_t count) {
  std::vector<double> v(count);
  for (std::size_t i = 0; i < count; ++i) {
    v[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(count - 1);
  }
  return v;
}

double exp1_density(double y) { return y >= 0.0 ? std::exp(-y) : 0.0; }

gks::harness::ExperimentConfig base_config(gks::harness::Experiment experiment) {
  gks::harness::ExperimentConfig cfg;
  cfg.experiment = experiment;
  cfg.seed = 42;
  cfg.workers = hw_workers();
  return cfg;
}

std::string summarize_point(const gks::harness::PointSummary& p) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), "x=%g: ks=%.4f mean=%.4f var=%.4f", p.x,
                p.ks_distance, p.residual_mean, p.residual_variance);
  return buf;
}

}  // namespace

int main() {
  using namespace gks;

  criterion(1, "kernel normalization over (x, h) grid", [](std::string& detail) {
    double worst = 0.0;
    for (double x : {0.0, 2.5, 5.0, 7.5, 10.0}) {
      for (double h : {1e-4, 1e-3, 1e-2, 1e-1, 0.5}) {
        kernel::GammaKernel k(x, h);
        const double integral = quadrature::integrate(
            [&](double y) { return k(y); },
            kernel::detail::gamma_breakpoints(k.alpha(), k.beta()), 1e-10);
        worst = std::max(worst, std::abs(integral - 1.0));
      }
    }
    detail = "max |integral - 1| = " + std::to_string(worst);
    return worst < 1e-8;
  });

  criterion(2, "moment identity over the 48-case grid", [](std::string& detail) {
    auto one = [](double) { return 1.0; };
    auto ident = [](double y) { return y; };
    double worst = 0.0;
    for (double p : {1.0, 2.0, 3.0}) {
      for (double x : {0.0, 0.5, 1.0, 5.0}) {
        for (double h : {0.1, 0.01}) {
          for (int phi_id = 0; phi_id < 2; ++phi_id) {
            auto [lhs, rhs] = kernel::moment_identity_check(
                p, x, h,
                phi_id == 0 ? std::function<double(double)>(one)
                            : std::function<double(double)>(ident),
                exp1_density);
            worst = std::max(worst, std::abs(lhs - rhs) / (1.0 + std::abs(lhs)));
          }
        }
      }
    }
    detail = "max scaled |lhs - rhs| = " + std::to_string(worst);
    return worst < 1e-6;
  });

  criterion(3, "B(p,n,x) limit and boundary identity", [](std::string& detail) {
    bool ok = true;
    for (double x : {0.5, 1.0, 4.0}) {
      const double limit = 1.0 / (2.0 * std::sqrt(M_PI * x));
      double prev = 1e300;
      double final_gap = 0.0;
      for (double h : {1e-2, 1e-4, 1e-6}) {
        const double gap =
            std::abs(std::sqrt(h) * kernel::b_constant(2.0, x, h) - limit) / limit;
        ok = ok && gap < prev;
        prev = gap;
        final_gap = gap;
      }
      ok = ok && final_gap < 1e-3;
    }
    for (double h : {0.1, 0.01, 1e-6}) {
      ok = ok && std::abs(kernel::b_constant(2.0, 0.0, h) * 2.0 * h - 1.0) < 1e-12;
    }
    return ok;
  });

  criterion(4, "E l(G_p) -> l(x) for l = cos at x = 1", [](std::string& detail) {
    double prev = 1e300;
    for (double h : {0.1, 0.01, 0.001}) {
      kernel::GammaRef g(2.0, 1.0, h);
      const double gap = std::abs(
          kernel::gamma_expectation(g, [](double y) { return std::cos(y); }) -
          std::cos(1.0));
      if (!(gap < prev)) return false;
      prev = gap;
    }
    detail = "final gap = " + std::to_string(prev);
    return prev < 2e-3;
  });

  criterion(5, "density bias at x = 1 and x = 2 (n = 20000, h = 0.05)",
            [](std::string& detail) {
    auto cfg = base_config(harness::Experiment::bias_density);
    cfg.sizes = {20000};
    cfg.fixed_h = 0.05;
    cfg.replications = 500;
    cfg.target_points = {1.0, 2.0};
    auto report = harness::run(cfg);
    const double expected = -std::exp(-1.0) / 2.0 * 0.05;
    if (std::abs(report.points[0].theoretical_bias - expected) > 1e-12) return false;
    if (std::abs(report.points[1].theoretical_bias) > 1e-15) return false;
    char buf[160];
    std::snprintf(buf, sizeof(buf), "x=1: emp=%.6f theo=%.6f se=%.6f; x=2: emp=%.6f se=%.6f",
                  report.points[0].empirical_bias, report.points[0].theoretical_bias,
                  report.points[0].mc_standard_error, report.points[1].empirical_bias,
                  report.points[1].mc_standard_error);
    detail = buf;
    return report.passed();
  });

  criterion(6, "kernel Lipschitz constant bounded as h shrinks",
            [](std::string& detail) {
    const auto grid = linspace(0.001, 10.0, 4000);
    double prev = 1e300;
    std::string consts;
    for (double h : {0.2, 0.1, 0.05}) {
      double worst = 0.0;
      for (double x : linspace(0.5, 2.99, 10)) {
        const double u = x + 0.01;
        worst = std::max(worst, kernel::lipschitz_modulus(x, u, h, grid) *
                                    std::pow(h, 1.5) / (u - x));
      }
      consts += std::to_string(worst) + " ";
      if (worst > 1.0 || worst > prev * 1.05) return false;
      prev = worst;
    }
    detail = "constants (h = 0.2, 0.1, 0.05): " + consts;
    return true;
  });

  criterion(7, "density consistency, i.i.d. Exp(1) and EAR(1) rho = 0.5",
            [](std::string& detail) {
    for (bool ergodic : {false, true}) {
      auto cfg = base_config(harness::Experiment::consistency_density);
      if (ergodic) {
        cfg.process.kind = processes::ProcessKind::ear1;
        cfg.process.rho = 0.5;
      }
      auto report = harness::run(cfg);  // defaults: sizes {500,2000,8000}, 50 reps
      detail += (ergodic ? "ear1" : "iid");
      detail += " medians:";
      for (const auto& s : report.sizes) {
        detail += " " + std::to_string(s.median_sup_error);
      }
      detail += "; ";
      if (!report.passed()) return false;
    }
    return true;
  });

  criterion(8, "regression consistency, R(x) = x/(1+x)", [](std::string& detail) {
    auto cfg = base_config(harness::Experiment::consistency_regression);
    cfg.process.kind = processes::ProcessKind::regression_over;
    cfg.process.base_kind = processes::ProcessKind::iid_exponential;
    cfg.process.regfn = processes::RegFn::rational;
    cfg.process.noise_var = 0.25;
    cfg.thresholds.final_median_max = 0.08;
    auto report = harness::run(cfg);
    detail = "medians:";
    for (const auto& s : report.sizes) {
      detail += " " + std::to_string(s.median_sup_error);
    }
    return report.passed();
  });

  criterion(9, "density CLT, interior x = 1 and boundary x = 0",
            [](std::string& detail) {
    auto interior = base_config(harness::Experiment::clt_density);
    interior.sizes = {5000};
    interior.replications = 1000;
    interior.target_points = {1.0};
    auto ri = harness::run(interior);
    auto boundary = interior;
    boundary.schedule = asymptotics::BandwidthSchedule(1.0, 0.40);
    boundary.target_points = {0.0};
    auto rb = harness::run(boundary);
    detail = summarize_point(ri.points[0]) + "; " + summarize_point(rb.points[0]);
    return ri.passed() && rb.passed();
  });

  criterion(10, "regression CLT, interior x = 1 and boundary x = 0",
            [](std::string& detail) {
    auto interior = base_config(harness::Experiment::clt_regression);
    interior.process.kind = processes::ProcessKind::regression_over;
    interior.process.base_kind = processes::ProcessKind::iid_exponential;
    interior.process.regfn = processes::RegFn::rational;
    interior.process.noise_var = 0.25;
    interior.sizes = {5000};
    interior.replications = 1000;
    interior.target_points = {1.0};
    auto ri = harness::run(interior);
    detail = summarize_point(ri.points[0]);
    bool boundary_ok = false;
    try {
      auto boundary = interior;
      boundary.schedule = asymptotics::BandwidthSchedule(1.0, 0.40);
      boundary.target_points = {0.0};
      auto rb = harness::run(boundary);
      detail += "; " + summarize_point(rb.points[0]);
      boundary_ok = rb.passed();
    } catch (const std::exception& e) {
      detail += std::string("; boundary: ") + e.what();
    }
    return ri.passed() && boundary_ok;
  });

  criterion(11, "density CLT under EAR(1) rho = 0.5, interior x = 1",
            [](std::string& detail) {
    auto cfg = base_config(harness::Experiment::clt_density);
    cfg.process.kind = processes::ProcessKind::ear1;
    cfg.process.rho = 0.5;
    cfg.sizes = {5000};
    cfg.replications = 1000;
    cfg.target_points = {1.0};
    auto report = harness::run(cfg);
    detail = summarize_point(report.points[0]);
    return report.passed();
  });

  criterion(12, "brute-force equivalence on 100 tiny instances",
            [](std::string& detail) {
    rng::SeededRng rng(2024, 0);
    for (int trial = 0; trial < 100; ++trial) {
      const std::size_t n = 1 + rng.next_u64() % 10;
      std::vector<double> xs, ys;
      for (std::size_t i = 0; i < n; ++i) {
        xs.push_back(rng.exponential(1.0));
        ys.push_back(rng.uniform() * 3.0);
      }
      estimators::Sample sample(xs, ys);
      const double x = rng.uniform() * 4.0;
      const double h = 0.05 + rng.uniform() * 0.3;
      kernel::GammaKernel k(x, h);
      double d = 0.0, num = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        d += k(xs[i]);
        num += ys[i] * k(xs[i]);
      }
      d /= static_cast<double>(n);
      num /= static_cast<double>(n);
      const double r = d == 0.0 ? 0.0 : num / d;
      auto rel = [](double a, double b) {
        return std::abs(a - b) / std::max(1.0, std::abs(b));
      };
      if (rel(estimators::density_estimate(sample, x, h), d) > 1e-14) return false;
      if (rel(estimators::numerator_estimate(sample, x, h), num) > 1e-14) return false;
      if (rel(estimators::regression_estimate(sample, x, h).value, r) > 1e-14) {
        return false;
      }
    }
    return true;
  });

  criterion(13, "determinism across runs and worker counts",
            [](std::string& detail) {
    auto cfg = base_config(harness::Experiment::consistency_density);
    cfg.sizes = {500, 2000};
    cfg.replications = 10;
    cfg.workers = 1;
    const auto r1 = harness::run(cfg).serialize();
    const auto r2 = harness::run(cfg).serialize();
    cfg.workers = 8;
    const auto r8 = harness::run(cfg).serialize();
    return r1 == r2 && r1 == r8;
  });

  std::printf("acceptance: %d criteria failed\n", g_failures);
  return g_failures;
}
