#ifndef LANDSCAPE_EXACT_PG_HPP
#define LANDSCAPE_EXACT_PG_HPP

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include <Eigen/Dense>

#include "landscape/mdp.hpp"
#include "landscape/policy.hpp"
#include "landscape/rng.hpp"
#include "landscape/trace.hpp"

namespace landscape {

// V^{tau,pi}(s0) for an explicit action-probability table.
inline double exact_objective(const TabularMdp& mdp, const Eigen::MatrixXd& probs,
                              double tau) {
  return solve_values(mdp, probs, tau).v[mdp.start_state];
}

inline double exact_objective(const TabularMdp& mdp, const SoftmaxTabularPolicy& policy,
                              double tau) {
  return exact_objective(mdp, policy.prob_table(), tau);
}

inline double exact_objective(const TabularMdp& mdp, const MixedPolicy& policy,
                              double tau) {
  return exact_objective(mdp, policy.prob_table(), tau);
}

// Exact entropy-regularized policy gradient for a tabular softmax policy.
// The per-state cumulant sum_a pi(a|s)[Q^{tau,pi}(s,a) grad log pi(a|s)
// + tau grad H(pi(.|s))] is pushed through the discounted occupancy
// e_{s0}^T (I - gamma P^pi)^{-1}, both obtained from one linear solve each.
inline Eigen::VectorXd exact_gradient(const TabularMdp& mdp,
                                      const SoftmaxTabularPolicy& policy, double tau) {
  if (policy.num_states != mdp.num_states || policy.num_actions != mdp.num_actions)
    throw std::invalid_argument("exact_gradient: policy/mdp dimension mismatch");
  const int S = mdp.num_states;
  const int A = mdp.num_actions;

  Eigen::MatrixXd probs = policy.prob_table();
  ValueTables vt = solve_values(mdp, probs, tau);

  Eigen::VectorXd grad = Eigen::VectorXd::Zero(S * A);
  for (int s = 0; s < S; ++s) {
    double w = vt.occupancy[s];
    if (w == 0.0) continue;
    Eigen::VectorXd p = probs.row(s);
    Eigen::VectorXd ent_grad = categorical_entropy_grad_state(policy, s);
    // sum_a pi(a|s) Q(s,a) (e_a - pi(.|s)) collapses to Q-weighted probs
    // minus V times probs.
    double v_bar = p.dot(vt.q.row(s));
    for (int a = 0; a < A; ++a) {
      double cumulant = p[a] * (vt.q(s, a) - v_bar) + tau * ent_grad[a];
      grad[policy.param_index(a, s)] += w * cumulant;
    }
  }
  return grad;
}

enum class SolutionClass { Optimal, Suboptimal };

// Greedy deterministic policy walking to the target cell, rows first.
inline Eigen::MatrixXd deterministic_policy_to(const GridworldSpec& spec, GridCell target) {
  if (!spec.in_grid(target))
    throw std::invalid_argument("deterministic_policy_to: target outside grid");
  Eigen::MatrixXd probs =
      Eigen::MatrixXd::Zero(spec.width * spec.height, kNumGridActions);
  for (int r = 0; r < spec.height; ++r) {
    for (int c = 0; c < spec.width; ++c) {
      int action;
      if (r < target.row) action = kDown;
      else if (r > target.row) action = kUp;
      else if (c < target.col) action = kRight;
      else if (c > target.col) action = kLeft;
      else action = kUp;  // on target: absorbing, choice is irrelevant
      probs(spec.state_index({r, c}), action) = 1.0;
    }
  }
  return probs;
}

// The suboptimal anchor: the reward cell whose deterministic shortest-path
// return from the start is smallest.
inline TerminalReward suboptimal_reward(const GridworldSpec& spec, const TabularMdp& mdp) {
  if (spec.terminal_rewards.size() < 2)
    throw std::invalid_argument("classify_solution: need at least two reward cells");
  const TerminalReward* best = nullptr;
  double best_value = std::numeric_limits<double>::infinity();
  for (const auto& tr : spec.terminal_rewards) {
    double v = exact_objective(mdp, deterministic_policy_to(spec, tr.cell), 0.0);
    if (v < best_value) {
      best_value = v;
      best = &tr;
    }
  }
  return *best;
}

// Optimal iff the true (tau = 0) objective strictly exceeds the return of the
// deterministic shortest-path policy to R_sub.
inline SolutionClass classify_solution(const TabularMdp& mdp, const GridworldSpec& spec,
                                       const Eigen::MatrixXd& probs) {
  TerminalReward sub = suboptimal_reward(spec, mdp);
  double threshold = exact_objective(mdp, deterministic_policy_to(spec, sub.cell), 0.0);
  double value = exact_objective(mdp, probs, 0.0);
  return value > threshold ? SolutionClass::Optimal : SolutionClass::Suboptimal;
}

struct ExactTrainConfig {
  double eta = 0.1;
  double tau0 = 0.0;
  double tau_decay = 0.999;
  int iters = 20000;
  double init_scale = 1.0;
  std::uint64_t seed = 0;
  int checkpoint_stride = 0;  // 0: only the final parameters are kept
  int record_stride = 1;  // 0: only the final iteration is recorded

  void validate() const {
    if (eta <= 0.0) throw std::invalid_argument("train config: eta must be > 0");
    if (tau0 < 0.0) throw std::invalid_argument("train config: tau0 must be >= 0");
    if (tau_decay <= 0.0 || tau_decay > 1.0)
      throw std::invalid_argument("train config: tau_decay must be in (0, 1]");
    if (iters < 1) throw std::invalid_argument("train config: iters must be >= 1");
    if (init_scale < 0.0)
      throw std::invalid_argument("train config: init_scale must be >= 0");
  }
};

// Plain gradient ascent on the entropy-augmented exact objective with
// multiplicative tau decay. theta_0 ~ Normal(0, init_scale^2).
inline TrainTrace train_exact(const TabularMdp& mdp, const ExactTrainConfig& config) {
  config.validate();
  const int n = mdp.num_states * mdp.num_actions;

  auto rng = make_stream({config.seed, 0x7261696eULL});
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::VectorXd theta(n);
  for (int i = 0; i < n; ++i) theta[i] = config.init_scale * gauss(rng);

  const int S = mdp.num_states;
  const int A = mdp.num_actions;
  Eigen::VectorXd e0 = Eigen::VectorXd::Zero(S);
  e0[mdp.start_state] = 1.0;

  TrainTrace trace;
  double tau = config.tau0;
  for (int it = 0; it < config.iters; ++it) {
    SoftmaxTabularPolicy policy(mdp.num_states, mdp.num_actions, theta);
    Eigen::MatrixXd probs = policy.prob_table();

    // One factorization per iteration serves the true objective, the
    // augmented objective, the occupancy and the gradient cumulant.
    Eigen::VectorXd state_entropy(S);
    for (int s = 0; s < S; ++s) state_entropy[s] = categorical_entropy(probs.row(s));
    Eigen::VectorXd r0 = (probs.array() * mdp.reward.array()).rowwise().sum();
    Eigen::MatrixXd M = Eigen::MatrixXd::Identity(S, S) -
                        mdp.discount * policy_transition_matrix(mdp, probs);
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(M);

    Eigen::VectorXd v_true = lu.solve(r0);
    Eigen::VectorXd v_aug =
        tau == 0.0 ? v_true
                   : Eigen::VectorXd(lu.solve((r0 + tau * state_entropy).eval()));
    Eigen::VectorXd occupancy = lu.transpose().solve(e0);

    double objective_true = v_true[mdp.start_state];
    double objective_aug = v_aug[mdp.start_state];
    if (!std::isfinite(objective_aug) || !std::isfinite(objective_true))
      throw std::runtime_error("train_exact: objective became non-finite at iter " +
                               std::to_string(it));

    Eigen::MatrixXd q(S, A);
    for (int a = 0; a < A; ++a)
      q.col(a) = mdp.reward.col(a) + tau * state_entropy +
                 mdp.discount * (mdp.transition[a] * v_aug);

    Eigen::VectorXd grad = Eigen::VectorXd::Zero(S * A);
    for (int s = 0; s < S; ++s) {
      double w = occupancy[s];
      if (w == 0.0) continue;
      Eigen::VectorXd p = probs.row(s);
      double v_bar = p.dot(q.row(s));
      Eigen::VectorXd ent_grad =
          tau == 0.0 ? Eigen::VectorXd::Zero(A) : categorical_entropy_grad_state(policy, s);
      for (int a = 0; a < A; ++a)
        grad[policy.param_index(a, s)] =
            w * (p[a] * (q(s, a) - v_bar) + tau * ent_grad[a]);
    }

    if ((config.record_stride > 0 && it % config.record_stride == 0) ||
        it == config.iters - 1) {
      TrainRecord rec;
      rec.iter = it;
      rec.objective_true = objective_true;
      rec.objective_aug = objective_aug;
      rec.tau = tau;
      rec.grad_norm = grad.norm();
      trace.records.push_back(rec);
    }
    if (config.checkpoint_stride > 0 && it % config.checkpoint_stride == 0)
      trace.checkpoints.emplace_back(it, theta);

    theta += config.eta * grad;
    tau *= config.tau_decay;
  }
  trace.final_theta = theta;
  return trace;
}

struct SeedBatchSummary {
  int n_seeds = 0;
  int n_suboptimal = 0;
  double fraction = 0.0;
};

}  // namespace landscape

#endif
