#ifndef LANDSCAPE_INTERPOLATE_HPP
#define LANDSCAPE_INTERPOLATE_HPP

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include <Eigen/Core>

#include "landscape/env.hpp"
#include "landscape/exact_pg.hpp"
#include "landscape/mdp.hpp"
#include "landscape/parallel.hpp"
#include "landscape/policy.hpp"
#include "landscape/reinforce.hpp"
#include "landscape/rng.hpp"

namespace landscape {

struct InterpolationConfig {
  int num_points = 101;  // inclusive endpoints, evenly spaced in [0, 1]
  double tau = 0.0;      // tabular override: entropy weight
  double mix = 0.0;      // tabular override: minimum-probability mixture
  double sigma = 0.0;    // continuous override: evaluation stddev
  int rollouts = 512;    // per grid point, stochastic objectives only
  std::uint64_t seed = 0;
  int jobs = 1;

  void validate() const {
    if (num_points < 2)
      throw std::invalid_argument("interpolation: need at least two grid points");
    if (rollouts < 1) throw std::invalid_argument("interpolation: rollouts >= 1");
  }
};

struct CurvePoint {
  double coefficient = 0.0;
  double value = 0.0;
  double value_stderr = 0.0;
};

// A family maps an interpolated parameter vector and a grid-point seed to
// (value, standard error). Deterministic families report zero stderr.
using ObjectiveFamilyFn =
    std::function<std::pair<double, double>(const Eigen::VectorXd&, std::uint64_t seed)>;

inline std::vector<CurvePoint> interpolate(const ObjectiveFamilyFn& family,
                                           const Eigen::VectorXd& theta0,
                                           const Eigen::VectorXd& theta1,
                                           const InterpolationConfig& config) {
  config.validate();
  if (theta0.size() != theta1.size())
    throw std::invalid_argument("interpolate: endpoint dimension mismatch");

  std::vector<CurvePoint> curve(config.num_points);
  parallel_for(config.num_points, config.jobs, [&](int i) {
    double coeff = static_cast<double>(i) / (config.num_points - 1);
    Eigen::VectorXd theta = (1.0 - coeff) * theta0 + coeff * theta1;
    auto [value, stderr_] = family(
        theta, mix_seed({config.seed, 0x696e74ULL, static_cast<std::uint64_t>(i)}));
    curve[i] = {coeff, value, stderr_};
  });
  return curve;
}

// Gridworld slice objective: the Mix-wrapped softmax of the interpolated
// parameters evaluated exactly under entropy weight tau.
inline ObjectiveFamilyFn gridworld_family(const TabularMdp& mdp,
                                          const InterpolationConfig& config) {
  double tau = config.tau;
  double mix = config.mix;
  return [&mdp, tau, mix](const Eigen::VectorXd& theta, std::uint64_t) {
    SoftmaxTabularPolicy base(mdp.num_states, mdp.num_actions, theta);
    MixedPolicy policy(base, mix);
    return std::make_pair(exact_objective(mdp, policy, tau), 0.0);
  };
}

// Continuous slice objective: mean return of seeded rollouts under the
// override sigma; stderr is the standard error of that mean.
inline ObjectiveFamilyFn pointmass_family(const PointMassEnv& env, double gamma,
                                          const InterpolationConfig& config) {
  double sigma = config.sigma;
  int rollouts = config.rollouts;
  return [&env, gamma, sigma, rollouts](const Eigen::VectorXd& theta,
                                        std::uint64_t seed) {
    GaussianLinearPolicy policy(PointMassEnv::state_dim, PointMassEnv::action_dim,
                                sigma);
    policy.clip_low = -env.config().action_bound;
    policy.clip_high = env.config().action_bound;
    policy.set_flat_params(theta);
    int n = sigma > 0.0 ? rollouts : 1;
    double sum = 0.0, sumsq = 0.0;
    for (int r = 0; r < n; ++r) {
      double ret = episode_return(
          rollout_pointmass(env, policy,
                            mix_seed({seed, static_cast<std::uint64_t>(r)})),
          gamma);
      sum += ret;
      sumsq += ret * ret;
    }
    double mean = sum / n;
    double var = n > 1 ? std::max(0.0, (sumsq - n * mean * mean) / (n - 1)) : 0.0;
    return std::make_pair(mean, std::sqrt(var / n));
  };
}

enum class PathShape { Monotone, NonMonotone };

struct MonotoneCheck {
  PathShape shape = PathShape::Monotone;
  double max_dip = 0.0;  // largest decrease beyond the band
};

// Monotone iff each successive value >= previous - band. max_dip is the
// deepest drop below the running maximum.
inline MonotoneCheck monotone_path_check(const std::vector<CurvePoint>& curve,
                                         double band = 0.0) {
  if (curve.empty()) throw std::invalid_argument("monotone_path_check: empty curve");
  MonotoneCheck out;
  double running_max = curve.front().value;
  for (std::size_t i = 1; i < curve.size(); ++i) {
    if (curve[i - 1].value - curve[i].value > band) out.shape = PathShape::NonMonotone;
    out.max_dip = std::max(out.max_dip, running_max - curve[i].value);
    running_max = std::max(running_max, curve[i].value);
  }
  if (out.shape == PathShape::Monotone) out.max_dip = 0.0;
  return out;
}

}  // namespace landscape

#endif
