#ifndef LANDSCAPE_OBJECTIVES_HPP
#define LANDSCAPE_OBJECTIVES_HPP

#include <stdexcept>
#include <string>

#include <Eigen/Core>

#include "landscape/env.hpp"
#include "landscape/exact_pg.hpp"
#include "landscape/mdp.hpp"
#include "landscape/policy.hpp"
#include "landscape/probe.hpp"
#include "landscape/reinforce.hpp"
#include "landscape/rng.hpp"

namespace landscape {

// O(theta) = a^T theta + 1/2 theta^T H theta
inline ObjectiveHandle quadratic_objective(const Eigen::VectorXd& a,
                                           const Eigen::MatrixXd& H) {
  if (H.rows() != a.size() || H.cols() != a.size())
    throw std::invalid_argument("quadratic objective: shape mismatch");
  ObjectiveHandle obj;
  obj.dimension = static_cast<int>(a.size());
  obj.evaluate = [a, H](const Eigen::VectorXd& theta, std::uint64_t) {
    return a.dot(theta) + 0.5 * theta.dot(H * theta);
  };
  return obj;
}

// Named 2-d demo objectives used by the probe command.
inline ObjectiveHandle analytic_objective(const std::string& name) {
  ObjectiveHandle obj;
  obj.dimension = 2;
  if (name == "goodfellow") {
    // -(1 - x y)^2: a saddle at the origin and a manifold of optima on xy = 1
    obj.evaluate = [](const Eigen::VectorXd& t, std::uint64_t) {
      double q = 1.0 - t[0] * t[1];
      return -q * q;
    };
  } else if (name == "quad_strict") {  // -x^2 - 2 y^2
    obj.evaluate = [](const Eigen::VectorXd& t, std::uint64_t) {
      return -t[0] * t[0] - 2.0 * t[1] * t[1];
    };
  } else if (name == "quad_flat") {  // -x^2 + 0 y^2
    obj.evaluate = [](const Eigen::VectorXd& t, std::uint64_t) {
      return -t[0] * t[0];
    };
  } else if (name == "quad_saddle") {  // -x^2 + y^2
    obj.evaluate = [](const Eigen::VectorXd& t, std::uint64_t) {
      return -t[0] * t[0] + t[1] * t[1];
    };
  } else if (name == "quad_bowl") {  // -x^2 - y^2
    obj.evaluate = [](const Eigen::VectorXd& t, std::uint64_t) {
      return -t[0] * t[0] - t[1] * t[1];
    };
  } else if (name == "linear") {  // -2x + 2y
    obj.evaluate = [](const Eigen::VectorXd& t, std::uint64_t) {
      return -2.0 * t[0] + 2.0 * t[1];
    };
  } else {
    throw std::invalid_argument("unknown analytic objective: " + name);
  }
  return obj;
}

// Exact gridworld objective over softmax parameters (deterministic).
inline ObjectiveHandle gridworld_objective(const TabularMdp& mdp, double tau,
                                           double mix = 0.0) {
  ObjectiveHandle obj;
  obj.dimension = mdp.num_states * mdp.num_actions;
  obj.evaluate = [&mdp, tau, mix](const Eigen::VectorXd& theta, std::uint64_t) {
    SoftmaxTabularPolicy base(mdp.num_states, mdp.num_actions, theta);
    if (mix == 0.0) return exact_objective(mdp, base, tau);
    return exact_objective(mdp, MixedPolicy(base, mix), tau);
  };
  return obj;
}

// Stochastic point-mass objective: mean return of `rollouts` seeded episodes
// under the given sigma. Deterministic per (theta, seed).
inline ObjectiveHandle pointmass_objective(const PointMassEnv& env, double sigma,
                                           double gamma, int rollouts) {
  ObjectiveHandle obj;
  obj.dimension = PointMassEnv::state_dim * PointMassEnv::action_dim;
  obj.stochastic = true;
  obj.evaluate = [&env, sigma, gamma, rollouts](const Eigen::VectorXd& theta,
                                                std::uint64_t seed) {
    GaussianLinearPolicy policy(PointMassEnv::state_dim, PointMassEnv::action_dim,
                                sigma);
    policy.clip_low = -env.config().action_bound;
    policy.clip_high = env.config().action_bound;
    policy.set_flat_params(theta);
    double sum = 0.0;
    for (int r = 0; r < rollouts; ++r)
      sum += episode_return(
          rollout_pointmass(env, policy, mix_seed({seed, static_cast<std::uint64_t>(r)})),
          gamma);
    return sum / rollouts;
  };
  return obj;
}

}  // namespace landscape

#endif
