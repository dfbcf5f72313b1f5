#ifndef LANDSCAPE_POLICY_HPP
#define LANDSCAPE_POLICY_HPP

#include <cmath>
#include <random>
#include <stdexcept>

#include <Eigen/Dense>

#include "landscape/mdp.hpp"

namespace landscape {

// Tabular softmax policy over a finite MDP. Parameters are a flat vector with
// A x S layout: theta[a * S + s] is the logit of action a in state s.
struct SoftmaxTabularPolicy {
  int num_states = 0;
  int num_actions = 0;
  Eigen::VectorXd theta;

  SoftmaxTabularPolicy() = default;
  SoftmaxTabularPolicy(int S, int A) : num_states(S), num_actions(A) {
    theta = Eigen::VectorXd::Zero(S * A);
  }
  SoftmaxTabularPolicy(int S, int A, Eigen::VectorXd params)
      : num_states(S), num_actions(A), theta(std::move(params)) {
    if (theta.size() != S * A)
      throw std::invalid_argument("softmax policy: parameter size mismatch");
  }

  int param_index(int a, int s) const { return a * num_states + s; }
  double logit(int a, int s) const { return theta[param_index(a, s)]; }

  // Max-subtracted softmax; each row sums to 1 even for large logits.
  Eigen::VectorXd action_probs(int s) const {
    Eigen::VectorXd z(num_actions);
    for (int a = 0; a < num_actions; ++a) z[a] = logit(a, s);
    z.array() -= z.maxCoeff();
    Eigen::VectorXd p = z.array().exp();
    return p / p.sum();
  }

  Eigen::MatrixXd prob_table() const {
    Eigen::MatrixXd probs(num_states, num_actions);
    for (int s = 0; s < num_states; ++s) probs.row(s) = action_probs(s);
    return probs;
  }

  // Gradient of log pi(a|s) with respect to the logits of state s only
  // (all other parameters have zero gradient).
  Eigen::VectorXd log_prob_grad_state(int s, int a) const {
    Eigen::VectorXd p = action_probs(s);
    Eigen::VectorXd g = -p;
    g[a] += 1.0;
    return g;
  }
};

// (1 - mix) * base + mix / A, guaranteeing every action probability >= mix / A.
struct MixedPolicy {
  SoftmaxTabularPolicy base;
  double mix = 0.0;

  MixedPolicy(SoftmaxTabularPolicy b, double m) : base(std::move(b)), mix(m) {
    if (mix < 0.0 || mix > 1.0)
      throw std::invalid_argument("mixed policy: mix must be in [0, 1]");
  }

  Eigen::VectorXd action_probs(int s) const {
    Eigen::VectorXd p = base.action_probs(s);
    return (1.0 - mix) * p +
           Eigen::VectorXd::Constant(base.num_actions, mix / base.num_actions);
  }

  Eigen::MatrixXd prob_table() const {
    Eigen::MatrixXd probs(base.num_states, base.num_actions);
    for (int s = 0; s < base.num_states; ++s) probs.row(s) = action_probs(s);
    return probs;
  }
};

// dH/dtheta[a, s] = -pi(a|s) (log pi(a|s) + H(pi(.|s))); returns the per-state
// block, zero elsewhere.
inline Eigen::VectorXd categorical_entropy_grad_state(const SoftmaxTabularPolicy& policy,
                                                      int s) {
  Eigen::VectorXd p = policy.action_probs(s);
  double h = categorical_entropy(p);
  Eigen::VectorXd g(policy.num_actions);
  for (int a = 0; a < policy.num_actions; ++a) {
    double logp = p[a] > 0.0 ? std::log(p[a]) : 0.0;
    g[a] = -p[a] * (logp + h);
  }
  return g;
}

// Gaussian policy with mean Theta * s, shared scalar standard deviation, and
// per-dimension clipping applied to sampled actions before execution.
struct GaussianLinearPolicy {
  int state_dim = 0;
  int action_dim = 0;
  Eigen::MatrixXd theta;  // action_dim x state_dim
  double sigma = 0.0;
  double clip_low = -1.0;
  double clip_high = 1.0;

  GaussianLinearPolicy(int sdim, int adim, double sig)
      : state_dim(sdim), action_dim(adim),
        theta(Eigen::MatrixXd::Zero(adim, sdim)), sigma(sig) {
    if (sigma < 0.0) throw std::invalid_argument("gaussian policy: sigma must be >= 0");
  }

  int num_params() const { return state_dim * action_dim; }

  Eigen::VectorXd flat_params() const {
    return Eigen::Map<const Eigen::VectorXd>(theta.data(), theta.size());
  }
  void set_flat_params(const Eigen::VectorXd& p) {
    if (p.size() != theta.size())
      throw std::invalid_argument("gaussian policy: parameter size mismatch");
    theta = Eigen::Map<const Eigen::MatrixXd>(p.data(), action_dim, state_dim);
  }

  Eigen::VectorXd mean(const Eigen::VectorXd& s) const { return theta * s; }

  // Pre-clip sample; the caller clips before executing in the environment.
  Eigen::VectorXd sample(const Eigen::VectorXd& s, std::mt19937_64& rng) const {
    Eigen::VectorXd a = mean(s);
    if (sigma > 0.0) {
      std::normal_distribution<double> gauss(0.0, 1.0);
      for (int i = 0; i < action_dim; ++i) a[i] += sigma * gauss(rng);
    }
    return a;
  }

  Eigen::VectorXd clip(const Eigen::VectorXd& a) const {
    return a.cwiseMax(clip_low).cwiseMin(clip_high);
  }

  // grad_Theta log N(a; Theta s, sigma^2 I) = ((a - Theta s) / sigma^2) s^T,
  // flattened column-major to match flat_params(). Uses the pre-clip action.
  Eigen::VectorXd log_prob_grad(const Eigen::VectorXd& s,
                                const Eigen::VectorXd& a_pre_clip) const {
    if (sigma <= 0.0)
      throw std::invalid_argument("gaussian policy: log-prob undefined for sigma = 0");
    Eigen::MatrixXd g = ((a_pre_clip - mean(s)) / (sigma * sigma)) * s.transpose();
    return Eigen::Map<const Eigen::VectorXd>(g.data(), g.size());
  }

  // Differential entropy per action dimension (reporting only).
  double entropy_per_dim() const {
    return 0.5 * std::log(2.0 * M_PI * M_E * sigma * sigma);
  }
};

}  // namespace landscape

#endif
