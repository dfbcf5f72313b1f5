#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "landscape/landscape.hpp"

using namespace landscape;
using Catch::Approx;

TEST_CASE("objective and gradient have the documented closed forms") {
  LimitsConfig cfg;
  cfg.k1 = 2;
  cfg.k2 = 3;
  CHECK(cfg.dimension() == 5);

  Eigen::VectorXd origin = Eigen::VectorXd::Zero(5);
  CHECK(limits_objective(cfg, origin) == Approx(-3.0 * 4.0));  // k2 * (0-2)^2

  Eigen::VectorXd at_optimum(5);
  at_optimum << 0.0, 0.0, 2.0, 2.0, 2.0;
  CHECK(limits_objective(cfg, at_optimum) == 0.0);

  Eigen::VectorXd g = limits_gradient_at_origin(cfg);
  CHECK(g.head(2).norm() == 0.0);
  for (int i = 2; i < 5; ++i) CHECK(g[i] == 4.0);
  CHECK(g.norm() == Approx(4.0 * std::sqrt(3.0)));

  // Finite-difference check of the analytic gradient at the origin.
  const double h = 1e-6;
  for (int i = 0; i < 5; ++i) {
    Eigen::VectorXd p = origin, m = origin;
    p[i] += h;
    m[i] -= h;
    double fd = (limits_objective(cfg, p) - limits_objective(cfg, m)) / (2.0 * h);
    CHECK(g[i] == Approx(fd).margin(1e-6));
  }
}

TEST_CASE("balanced coordinates with a small radius detect every draw") {
  LimitsConfig cfg;
  cfg.k1 = 50;
  cfg.k2 = 50;
  cfg.alpha = 1e-4;
  cfg.num_draws = 500;
  auto report = run_limits_experiment(cfg);
  CHECK(report.frac_random == 1.0);
  CHECK(report.frac_sgd == 1.0);
}

TEST_CASE("detection degrades as locally-optimal coordinates dominate") {
  double prev = 1.1;
  for (int k1 : {50, 500, 5000}) {
    LimitsConfig cfg;
    cfg.k1 = k1;
    cfg.k2 = 1;
    cfg.num_draws = 500;
    double frac = run_limits_experiment(cfg).frac_random;
    CHECK(frac <= prev);
    prev = frac;
  }
  CHECK(prev < 0.5);
}

TEST_CASE("noisy gradient directions detect at low noise and fail at high noise") {
  LimitsConfig cfg;
  cfg.k1 = 9999;
  cfg.k2 = 1;
  cfg.num_draws = 500;
  double grad_norm = limits_gradient_at_origin(cfg).norm();

  cfg.epsilon = 0.1 * grad_norm;
  CHECK(run_limits_experiment(cfg).frac_sgd > 0.9);

  cfg.epsilon = 10.0 * grad_norm;
  CHECK(run_limits_experiment(cfg).frac_sgd < 0.5);
}

TEST_CASE("runs are deterministic per seed") {
  LimitsConfig cfg;
  cfg.k1 = 100;
  cfg.k2 = 1;
  cfg.num_draws = 200;
  cfg.epsilon = 1.0;
  auto a = run_limits_experiment(cfg);
  auto b = run_limits_experiment(cfg);
  REQUIRE(a.draws.size() == b.draws.size());
  for (std::size_t i = 0; i < a.draws.size(); ++i) {
    CHECK(a.draws[i].delta_plus_random == b.draws[i].delta_plus_random);
    CHECK(a.draws[i].delta_plus_sgd == b.draws[i].delta_plus_sgd);
  }
  cfg.seed = 1;
  auto c = run_limits_experiment(cfg);
  CHECK(c.draws[0].delta_plus_random != a.draws[0].delta_plus_random);
}

TEST_CASE("config validation") {
  LimitsConfig cfg;
  cfg.k1 = 0;
  cfg.k2 = 0;
  CHECK_THROWS_AS(run_limits_experiment(cfg), std::invalid_argument);
  cfg = {};
  cfg.epsilon = -1.0;
  CHECK_THROWS_AS(run_limits_experiment(cfg), std::invalid_argument);
  cfg = {};
  cfg.alpha = 0.0;
  CHECK_THROWS_AS(run_limits_experiment(cfg), std::invalid_argument);
}
