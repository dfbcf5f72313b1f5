#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "landscape/landscape.hpp"

using namespace landscape;
using Catch::Approx;

namespace {

// Uniform-random policy table for an MDP.
Eigen::MatrixXd uniform_policy(const TabularMdp& mdp) {
  return Eigen::MatrixXd::Constant(mdp.num_states, mdp.num_actions,
                                   1.0 / mdp.num_actions);
}

Eigen::MatrixXd random_policy(const TabularMdp& mdp, std::uint64_t seed) {
  auto rng = make_stream({seed, 0x706f6cULL});
  std::uniform_real_distribution<double> u(0.1, 1.0);
  Eigen::MatrixXd probs(mdp.num_states, mdp.num_actions);
  for (int s = 0; s < mdp.num_states; ++s) {
    for (int a = 0; a < mdp.num_actions; ++a) probs(s, a) = u(rng);
    probs.row(s) /= probs.row(s).sum();
  }
  return probs;
}

}  // namespace

TEST_CASE("two-cell chain: value at start is gamma^1 * reward") {
  // 2x1 grid, start at top, reward 1.0 one step below, gamma = 0.5.
  GridworldSpec spec;
  spec.width = 1;
  spec.height = 2;
  spec.start = {0, 0};
  spec.terminal_rewards = {{{1, 0}, 1.0}};
  spec.gamma = 0.5;
  TabularMdp mdp = build_gridworld(spec);

  Eigen::MatrixXd probs = Eigen::MatrixXd::Zero(2, kNumGridActions);
  probs(0, kDown) = 1.0;
  probs(1, kDown) = 1.0;
  auto vt = solve_values(mdp, probs, 0.0);
  CHECK(vt.v[mdp.start_state] == Approx(0.5).epsilon(1e-12));
}

TEST_CASE("starting on a reward cell is worth exactly the reward value") {
  GridworldSpec spec;
  spec.width = 1;
  spec.height = 1;
  spec.start = {0, 0};
  spec.terminal_rewards = {{{0, 0}, 0.7}};
  spec.gamma = 0.9;
  TabularMdp mdp = build_gridworld(spec);
  auto vt = solve_values(mdp, uniform_policy(mdp), 0.0);
  CHECK(vt.v[0] == Approx(0.7).epsilon(1e-12));
}

TEST_CASE("shortest-path value is gamma^k times the reward") {
  GridworldSpec spec = GridworldSpec::two_corner_default();
  TabularMdp mdp = build_gridworld(spec);
  // Both reward corners are four steps from the start.
  for (const auto& tr : spec.terminal_rewards) {
    double v = exact_objective(mdp, deterministic_policy_to(spec, tr.cell), 0.0);
    CHECK(v == Approx(std::pow(spec.gamma, 4) * tr.value).epsilon(1e-12));
  }
}

TEST_CASE("default layout prefers the larger corner") {
  GridworldSpec spec = GridworldSpec::two_corner_default();
  TabularMdp mdp = build_gridworld(spec);
  TerminalReward sub = suboptimal_reward(spec, mdp);
  CHECK(sub.value == Approx(0.7));
  CHECK(sub.cell.row == 4);
  CHECK(sub.cell.col == 0);
}

TEST_CASE("policy transition matrix matches the triple-loop definition") {
  TabularMdp mdp = build_gridworld(GridworldSpec::two_corner_default());
  Eigen::MatrixXd probs = random_policy(mdp, 7);
  Eigen::MatrixXd P = policy_transition_matrix(mdp, probs);

  for (int s = 0; s < mdp.num_states; ++s) {
    for (int sp = 0; sp < mdp.num_states; ++sp) {
      double expected = 0.0;
      for (int a = 0; a < mdp.num_actions; ++a)
        expected += probs(s, a) * mdp.transition[a](s, sp);
      CHECK(P(s, sp) == Approx(expected).margin(1e-14));
    }
    CHECK(P.row(s).sum() == Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("linear solve agrees with the truncated power series") {
  TabularMdp mdp = build_gridworld(GridworldSpec::two_corner_default());
  Eigen::MatrixXd probs = random_policy(mdp, 11);
  double tau = 0.3;
  auto vt = solve_values(mdp, probs, tau);

  // v = sum_t gamma^t (P^pi)^t r^pi, truncated far past the precision floor.
  Eigen::VectorXd state_entropy(mdp.num_states);
  for (int s = 0; s < mdp.num_states; ++s)
    state_entropy[s] = categorical_entropy(probs.row(s));
  Eigen::VectorXd r_pi =
      (probs.array() * mdp.reward.array()).rowwise().sum().matrix() +
      tau * state_entropy;
  Eigen::MatrixXd P = policy_transition_matrix(mdp, probs);

  Eigen::VectorXd v = Eigen::VectorXd::Zero(mdp.num_states);
  Eigen::VectorXd term = r_pi;
  for (int t = 0; t < 400; ++t) {
    v += term;
    term = mdp.discount * (P * term);
  }
  CHECK((vt.v - v).norm() == Approx(0.0).margin(1e-10));
}

TEST_CASE("occupancy matches the power-series definition and sums to 1/(1-gamma)") {
  TabularMdp mdp = build_gridworld(GridworldSpec::two_corner_default());
  Eigen::MatrixXd probs = random_policy(mdp, 13);
  auto vt = solve_values(mdp, probs, 0.0);

  Eigen::MatrixXd P = policy_transition_matrix(mdp, probs);
  Eigen::RowVectorXd d = Eigen::RowVectorXd::Zero(mdp.num_states);
  Eigen::RowVectorXd term = Eigen::RowVectorXd::Zero(mdp.num_states);
  term[mdp.start_state] = 1.0;
  for (int t = 0; t < 400; ++t) {
    d += term;
    term = mdp.discount * (term * P);
  }
  CHECK((vt.occupancy.transpose() - d).norm() == Approx(0.0).margin(1e-10));
  CHECK(vt.occupancy.sum() == Approx(1.0 / (1.0 - mdp.discount)).epsilon(1e-10));
}

TEST_CASE("q is consistent with v under the policy") {
  TabularMdp mdp = build_gridworld(GridworldSpec::two_corner_default());
  Eigen::MatrixXd probs = random_policy(mdp, 17);
  double tau = 0.1;
  auto vt = solve_values(mdp, probs, tau);
  for (int s = 0; s < mdp.num_states; ++s) {
    double v_from_q = probs.row(s).dot(vt.q.row(s));
    CHECK(v_from_q == Approx(vt.v[s]).margin(1e-10));
  }
}

TEST_CASE("entropy weight raises the augmented value") {
  TabularMdp mdp = build_gridworld(GridworldSpec::two_corner_default());
  Eigen::MatrixXd probs = uniform_policy(mdp);
  double v0 = exact_objective(mdp, probs, 0.0);
  double v1 = exact_objective(mdp, probs, 0.5);
  // Uniform policy has maximal entropy log(4) per state.
  CHECK(v1 > v0);
  CHECK(v1 - v0 ==
        Approx(0.5 * std::log(4.0) / (1.0 - mdp.discount)).epsilon(1e-10));
}

TEST_CASE("categorical entropy basics") {
  Eigen::VectorXd u = Eigen::VectorXd::Constant(4, 0.25);
  CHECK(categorical_entropy(u) == Approx(std::log(4.0)).epsilon(1e-12));
  Eigen::VectorXd det = Eigen::VectorXd::Zero(4);
  det[2] = 1.0;
  CHECK(categorical_entropy(det) == 0.0);
}

TEST_CASE("off-grid moves clamp to the boundary") {
  GridworldSpec spec = GridworldSpec::two_corner_default();
  TabularMdp mdp = build_gridworld(spec);
  int corner = spec.state_index({0, 0});
  CHECK(mdp.transition[kUp](corner, corner) == 1.0);
  CHECK(mdp.transition[kLeft](corner, corner) == 1.0);
  CHECK(mdp.transition[kDown](corner, spec.state_index({1, 0})) == 1.0);
  CHECK(mdp.transition[kRight](corner, spec.state_index({0, 1})) == 1.0);
}

TEST_CASE("validation rejects malformed inputs") {
  GridworldSpec bad = GridworldSpec::two_corner_default();
  bad.start = {9, 0};
  CHECK_THROWS_AS(build_gridworld(bad), std::invalid_argument);

  bad = GridworldSpec::two_corner_default();
  bad.gamma = 1.0;
  CHECK_THROWS_AS(build_gridworld(bad), std::invalid_argument);

  TabularMdp mdp = build_gridworld(GridworldSpec::two_corner_default());
  Eigen::MatrixXd probs = uniform_policy(mdp);
  probs(0, 0) = 2.0;
  CHECK_THROWS_AS(solve_values(mdp, probs, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(solve_values(mdp, uniform_policy(mdp), -0.1), std::invalid_argument);
}

TEST_CASE("gridworld JSON round-trip") {
  GridworldSpec spec = GridworldSpec::two_corner_default();
  GridworldSpec back = gridworld_from_json(gridworld_to_json(spec));
  CHECK(back.width == spec.width);
  CHECK(back.height == spec.height);
  CHECK(back.start.row == spec.start.row);
  CHECK(back.gamma == spec.gamma);
  REQUIRE(back.terminal_rewards.size() == 2);
  CHECK(back.terminal_rewards[1].value == 1.0);
}
