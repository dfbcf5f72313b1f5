#ifndef LANDSCAPE_REINFORCE_HPP
#define LANDSCAPE_REINFORCE_HPP

#include <cmath>
#include <cstdio>
#include <functional>
#include <stdexcept>
#include <vector>

#include <Eigen/Core>

#include "landscape/env.hpp"
#include "landscape/mdp.hpp"
#include "landscape/policy.hpp"
#include "landscape/rng.hpp"
#include "landscape/trace.hpp"

namespace landscape {

struct Trajectory {
  std::vector<Eigen::VectorXd> states;
  std::vector<Eigen::VectorXd> actions;  // pre-clip sampled actions
  std::vector<double> rewards;

  int length() const { return static_cast<int>(rewards.size()); }

  // G_t = r_t + gamma G_{t+1}, zero beyond the final step.
  std::vector<double> returns_to_go(double gamma) const {
    std::vector<double> g(rewards.size());
    double acc = 0.0;
    for (int t = length() - 1; t >= 0; --t) {
      acc = rewards[t] + gamma * acc;
      g[t] = acc;
    }
    return g;
  }
};

enum class BaselineMode { PerTimestep, WholeBatch, None };

struct ReinforceOptions {
  double gamma = 0.99;
  BaselineMode baseline = BaselineMode::PerTimestep;
  // Weight step t by gamma^t so the estimator is unbiased for the discounted
  // objective's gradient.
  bool discount_time_weighting = true;
};

using GradLogProbFn =
    std::function<Eigen::VectorXd(const Eigen::VectorXd& state, const Eigen::VectorXd& action)>;

// (1/N) sum_n sum_t gamma^t grad log pi(a_t|s_t) (G_t - b_t), with b_t the
// across-batch mean of G_t among trajectories still running at step t.
inline Eigen::VectorXd reinforce_gradient(const std::vector<Trajectory>& batch,
                                          const GradLogProbFn& grad_log_prob,
                                          int num_params, const ReinforceOptions& opts) {
  if (batch.empty()) throw std::invalid_argument("reinforce_gradient: empty batch");
  const int N = static_cast<int>(batch.size());
  if (N == 1 && opts.baseline != BaselineMode::None)
    std::fprintf(stderr,
                 "warning: reinforce_gradient with N=1 and a batch baseline is "
                 "degenerate (gradient is identically zero)\n");

  std::vector<std::vector<double>> returns(N);
  int max_len = 0;
  for (int n = 0; n < N; ++n) {
    returns[n] = batch[n].returns_to_go(opts.gamma);
    max_len = std::max(max_len, batch[n].length());
  }

  std::vector<double> baseline_t(max_len, 0.0);
  double baseline_scalar = 0.0;
  if (opts.baseline == BaselineMode::PerTimestep) {
    for (int t = 0; t < max_len; ++t) {
      double sum = 0.0;
      int count = 0;
      for (int n = 0; n < N; ++n)
        if (t < batch[n].length()) {
          sum += returns[n][t];
          ++count;
        }
      baseline_t[t] = count > 0 ? sum / count : 0.0;
    }
  } else if (opts.baseline == BaselineMode::WholeBatch) {
    double sum = 0.0;
    int count = 0;
    for (int n = 0; n < N; ++n)
      for (double g : returns[n]) {
        sum += g;
        ++count;
      }
    baseline_scalar = count > 0 ? sum / count : 0.0;
  }

  // Ordered reduction over n, then t: schedule-independent by construction.
  Eigen::VectorXd grad = Eigen::VectorXd::Zero(num_params);
  for (int n = 0; n < N; ++n) {
    double w = 1.0;
    for (int t = 0; t < batch[n].length(); ++t) {
      double b = opts.baseline == BaselineMode::PerTimestep ? baseline_t[t]
                 : opts.baseline == BaselineMode::WholeBatch ? baseline_scalar
                                                             : 0.0;
      double advantage = returns[n][t] - b;
      if (advantage != 0.0)
        grad.noalias() +=
            w * advantage * grad_log_prob(batch[n].states[t], batch[n].actions[t]);
      if (opts.discount_time_weighting) w *= opts.gamma;
    }
  }
  return grad / static_cast<double>(N);
}

// --- Rollouts -------------------------------------------------------------

// One seeded episode of the point-mass environment under a Gaussian policy.
// Stored actions are pre-clip; the environment clips before integrating.
inline Trajectory rollout_pointmass(const PointMassEnv& env,
                                    const GaussianLinearPolicy& policy,
                                    std::uint64_t seed) {
  auto noise_rng = make_stream({seed, 0x6e6f697365ULL});
  Trajectory traj;
  PointMassState s = env.reset(seed);
  while (true) {
    Eigen::VectorXd obs = s.observation();
    Eigen::VectorXd a = policy.sample(obs, noise_rng);
    PointMassStep out = env.step(s, a.head<2>());
    traj.states.push_back(obs);
    traj.actions.push_back(a);
    traj.rewards.push_back(out.reward);
    s = out.state;
    if (out.done) break;
  }
  return traj;
}

// Seeded episode of a tabular MDP under a softmax policy; states and actions
// are stored as 1-d index vectors. Stops early in zero-reward absorbing
// states, where the remaining return is exactly zero.
inline Trajectory sample_tabular_episode(const TabularMdp& mdp,
                                         const SoftmaxTabularPolicy& policy, int horizon,
                                         std::uint64_t seed) {
  auto rng = make_stream({seed, 0x657069736f6465ULL});
  std::uniform_real_distribution<double> u(0.0, 1.0);

  auto absorbing_zero = [&](int s) {
    for (int a = 0; a < mdp.num_actions; ++a)
      if (mdp.transition[a](s, s) != 1.0 || mdp.reward(s, a) != 0.0) return false;
    return true;
  };

  Trajectory traj;
  int s = mdp.start_state;
  for (int t = 0; t < horizon && !absorbing_zero(s); ++t) {
    Eigen::VectorXd p = policy.action_probs(s);
    double x = u(rng);
    int a = 0;
    double acc = 0.0;
    for (; a < mdp.num_actions - 1; ++a) {
      acc += p[a];
      if (x < acc) break;
    }
    double y = u(rng);
    int s_next = 0;
    acc = 0.0;
    for (; s_next < mdp.num_states - 1; ++s_next) {
      acc += mdp.transition[a](s, s_next);
      if (y < acc) break;
    }
    traj.states.push_back(Eigen::VectorXd::Constant(1, static_cast<double>(s)));
    traj.actions.push_back(Eigen::VectorXd::Constant(1, static_cast<double>(a)));
    traj.rewards.push_back(mdp.reward(s, a));
    s = s_next;
  }
  return traj;
}

inline GradLogProbFn tabular_grad_log_prob(const SoftmaxTabularPolicy& policy) {
  return [&policy](const Eigen::VectorXd& state, const Eigen::VectorXd& action) {
    int s = static_cast<int>(state[0]);
    int a = static_cast<int>(action[0]);
    Eigen::VectorXd g = Eigen::VectorXd::Zero(policy.num_states * policy.num_actions);
    Eigen::VectorXd gs = policy.log_prob_grad_state(s, a);
    for (int ai = 0; ai < policy.num_actions; ++ai)
      g[policy.param_index(ai, s)] = gs[ai];
    return g;
  };
}

// --- Training -------------------------------------------------------------

struct ReinforceConfig {
  int batch_size = 128;
  double eta = 0.01;
  double sigma = 0.5;
  double gamma = 0.99;
  int iters = 200;
  int eval_stride = 10;
  int eval_episodes = 5;
  std::uint64_t seed = 0;
  BaselineMode baseline = BaselineMode::PerTimestep;
  int checkpoint_stride = 0;

  void validate() const {
    if (batch_size < 1) throw std::invalid_argument("reinforce config: batch_size >= 1");
    if (eta <= 0.0) throw std::invalid_argument("reinforce config: eta must be > 0");
    if (sigma <= 0.0)
      throw std::invalid_argument("reinforce config: training requires sigma > 0");
    if (!(gamma >= 0.0 && gamma <= 1.0))
      throw std::invalid_argument("reinforce config: gamma must be in [0, 1]");
    if (iters < 1) throw std::invalid_argument("reinforce config: iters >= 1");
    if (eval_stride < 1 || eval_episodes < 1)
      throw std::invalid_argument("reinforce config: eval settings must be positive");
  }
};

inline std::uint64_t rollout_seed(std::uint64_t base, int iter, int n) {
  return mix_seed({base, 0x726f6c6cULL, static_cast<std::uint64_t>(iter),
                   static_cast<std::uint64_t>(n)});
}

inline std::uint64_t eval_seed(std::uint64_t base, int episode) {
  // Distinct tag keeps evaluation rollouts disjoint from training rollouts.
  return mix_seed({base, 0x6576616cULL, static_cast<std::uint64_t>(episode)});
}

inline double episode_return(const Trajectory& traj, double gamma) {
  auto g = traj.returns_to_go(gamma);
  return g.empty() ? 0.0 : g[0];
}

struct EvalResult {
  double mean = 0.0;
  double stddev = 0.0;
};

inline EvalResult deterministic_eval(const PointMassEnv& env,
                                     const GaussianLinearPolicy& policy, double gamma,
                                     int eval_episodes, std::uint64_t base_seed) {
  GaussianLinearPolicy det = policy;
  det.sigma = 0.0;
  std::vector<double> returns(eval_episodes);
  for (int e = 0; e < eval_episodes; ++e)
    returns[e] = episode_return(rollout_pointmass(env, det, eval_seed(base_seed, e)), gamma);
  EvalResult out;
  for (double r : returns) out.mean += r;
  out.mean /= eval_episodes;
  for (double r : returns) out.stddev += (r - out.mean) * (r - out.mean);
  out.stddev = eval_episodes > 1 ? std::sqrt(out.stddev / (eval_episodes - 1)) : 0.0;
  return out;
}

inline TrainTrace train_reinforce(const PointMassEnv& env, const ReinforceConfig& config) {
  config.validate();
  GaussianLinearPolicy policy(PointMassEnv::state_dim, PointMassEnv::action_dim,
                              config.sigma);
  policy.clip_low = -env.config().action_bound;
  policy.clip_high = env.config().action_bound;

  ReinforceOptions opts;
  opts.gamma = config.gamma;
  opts.baseline = config.baseline;

  GradLogProbFn glp = [&policy](const Eigen::VectorXd& s, const Eigen::VectorXd& a) {
    return policy.log_prob_grad(s, a);
  };

  TrainTrace trace;
  for (int it = 0; it < config.iters; ++it) {
    std::vector<Trajectory> batch(config.batch_size);
    double batch_return = 0.0;
    for (int n = 0; n < config.batch_size; ++n) {
      batch[n] = rollout_pointmass(env, policy, rollout_seed(config.seed, it, n));
      batch_return += episode_return(batch[n], config.gamma);
    }
    batch_return /= config.batch_size;

    Eigen::VectorXd grad = reinforce_gradient(batch, glp, policy.num_params(), opts);

    TrainRecord rec;
    rec.iter = it;
    rec.objective_aug = batch_return;  // stochastic-policy objective estimate
    rec.tau = 0.0;
    rec.sigma = config.sigma;
    rec.grad_norm = grad.norm();
    if (it % config.eval_stride == 0 || it == config.iters - 1) {
      EvalResult ev =
          deterministic_eval(env, policy, config.gamma, config.eval_episodes, config.seed);
      rec.eval_return_mean = ev.mean;
      rec.eval_return_std = ev.stddev;
      rec.objective_true = ev.mean;
      rec.has_eval = true;
    }
    trace.records.push_back(rec);
    if (config.checkpoint_stride > 0 && it % config.checkpoint_stride == 0)
      trace.checkpoints.emplace_back(it, policy.flat_params());

    policy.set_flat_params(policy.flat_params() + config.eta * grad);
    if (!policy.flat_params().allFinite() || policy.flat_params().norm() > 1e6)
      throw std::runtime_error("train_reinforce: parameters diverged at iter " +
                               std::to_string(it));
  }
  trace.final_theta = policy.flat_params();
  return trace;
}

}  // namespace landscape

#endif
