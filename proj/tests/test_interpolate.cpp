#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "landscape/landscape.hpp"

using namespace landscape;
using Catch::Approx;

namespace {

ObjectiveFamilyFn quadratic_family() {
  return [](const Eigen::VectorXd& theta, std::uint64_t) {
    return std::make_pair(-theta.squaredNorm(), 0.0);
  };
}

}  // namespace

TEST_CASE("interpolation endpoints evaluate the endpoint parameters") {
  Eigen::VectorXd a = Eigen::VectorXd::Constant(3, 1.0);
  Eigen::VectorXd b = Eigen::VectorXd::Constant(3, -2.0);
  InterpolationConfig cfg;
  cfg.num_points = 11;
  auto curve = interpolate(quadratic_family(), a, b, cfg);
  REQUIRE(curve.size() == 11);
  CHECK(curve.front().coefficient == 0.0);
  CHECK(curve.back().coefficient == 1.0);
  CHECK(curve.front().value == Approx(-3.0));
  CHECK(curve.back().value == Approx(-12.0));
}

TEST_CASE("slice through a quadratic valley dips at the midpoint") {
  Eigen::VectorXd a(1), b(1);
  a << 1.0;
  b << -1.0;
  ObjectiveFamilyFn family = [](const Eigen::VectorXd& t, std::uint64_t) {
    return std::make_pair(t.squaredNorm(), 0.0);  // minimized at 0
  };
  InterpolationConfig cfg;
  cfg.num_points = 101;
  auto curve = interpolate(family, a, b, cfg);
  double interior_min = curve[1].value;
  for (std::size_t i = 1; i + 1 < curve.size(); ++i)
    interior_min = std::min(interior_min, curve[i].value);
  CHECK(interior_min < curve.front().value);
  CHECK(interior_min < curve.back().value);
  CHECK(interior_min == Approx(0.0).margin(1e-12));
}

TEST_CASE("full mixture collapses the gridworld slice to a constant") {
  TabularMdp mdp = build_gridworld(GridworldSpec::two_corner_default());
  InterpolationConfig cfg;
  cfg.num_points = 9;
  cfg.mix = 1.0;  // uniform policy regardless of the interpolated logits
  auto family = gridworld_family(mdp, cfg);
  auto rng = make_stream({81, 1});
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::VectorXd a(mdp.num_states * mdp.num_actions), b(a.size());
  for (int i = 0; i < a.size(); ++i) {
    a[i] = gauss(rng);
    b[i] = gauss(rng);
  }
  auto curve = interpolate(family, a, b, cfg);
  for (const auto& p : curve) CHECK(p.value == Approx(curve.front().value).margin(1e-12));
}

TEST_CASE("deterministic gridworld slices report zero stderr") {
  TabularMdp mdp = build_gridworld(GridworldSpec::two_corner_default());
  InterpolationConfig cfg;
  cfg.num_points = 5;
  auto family = gridworld_family(mdp, cfg);
  Eigen::VectorXd z = Eigen::VectorXd::Zero(mdp.num_states * mdp.num_actions);
  auto curve = interpolate(family, z, Eigen::VectorXd::Ones(z.size()), cfg);
  for (const auto& p : curve) CHECK(p.value_stderr == 0.0);
}

TEST_CASE("pointmass family is deterministic per seed and has finite stderr") {
  PointMassEnv env;
  InterpolationConfig cfg;
  cfg.num_points = 3;
  cfg.sigma = 0.5;
  cfg.rollouts = 8;
  auto family = pointmass_family(env, 0.99, cfg);
  Eigen::VectorXd z = Eigen::VectorXd::Zero(8);
  Eigen::VectorXd o = Eigen::VectorXd::Constant(8, 0.2);
  auto c1 = interpolate(family, z, o, cfg);
  auto c2 = interpolate(family, z, o, cfg);
  REQUIRE(c1.size() == c2.size());
  for (std::size_t i = 0; i < c1.size(); ++i) {
    CHECK(c1[i].value == c2[i].value);
    CHECK(c1[i].value_stderr >= 0.0);
    CHECK(std::isfinite(c1[i].value_stderr));
  }
}

TEST_CASE("interpolation is identical across job counts") {
  PointMassEnv env;
  InterpolationConfig cfg;
  cfg.num_points = 9;
  cfg.sigma = 0.3;
  cfg.rollouts = 4;
  auto family = pointmass_family(env, 0.99, cfg);
  Eigen::VectorXd z = Eigen::VectorXd::Zero(8);
  Eigen::VectorXd o = Eigen::VectorXd::Constant(8, 0.3);
  cfg.jobs = 1;
  auto c1 = interpolate(family, z, o, cfg);
  cfg.jobs = 8;
  auto c8 = interpolate(family, z, o, cfg);
  for (std::size_t i = 0; i < c1.size(); ++i) CHECK(c1[i].value == c8[i].value);
}

TEST_CASE("monotone path check flags dips beyond the band") {
  std::vector<CurvePoint> rising{{0.0, 0.0, 0.0}, {0.5, 1.0, 0.0}, {1.0, 2.0, 0.0}};
  auto ok = monotone_path_check(rising);
  CHECK(ok.shape == PathShape::Monotone);
  CHECK(ok.max_dip == 0.0);

  std::vector<CurvePoint> valley{
      {0.0, 2.0, 0.0}, {0.25, 1.0, 0.0}, {0.5, 0.0, 0.0}, {0.75, 1.5, 0.0},
      {1.0, 3.0, 0.0}};
  auto bad = monotone_path_check(valley);
  CHECK(bad.shape == PathShape::NonMonotone);
  CHECK(bad.max_dip == Approx(2.0));

  // A small wiggle within the band is still monotone.
  std::vector<CurvePoint> wiggle{{0.0, 0.0, 0.0}, {0.5, -0.05, 0.0}, {1.0, 1.0, 0.0}};
  CHECK(monotone_path_check(wiggle, 0.1).shape == PathShape::Monotone);
}

TEST_CASE("config validation") {
  InterpolationConfig cfg;
  cfg.num_points = 1;
  CHECK_THROWS_AS(
      interpolate(quadratic_family(), Eigen::VectorXd::Zero(2),
                  Eigen::VectorXd::Ones(2), cfg),
      std::invalid_argument);
  cfg = {};
  CHECK_THROWS_AS(
      interpolate(quadratic_family(), Eigen::VectorXd::Zero(2),
                  Eigen::VectorXd::Ones(3), cfg),
      std::invalid_argument);
}
