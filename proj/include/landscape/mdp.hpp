#ifndef LANDSCAPE_MDP_HPP
#define LANDSCAPE_MDP_HPP

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace landscape {

// Finite MDP with dense dynamics. transition[a](s, s') is P(s'|s,a).
struct TabularMdp {
  int num_states = 0;
  int num_actions = 0;
  std::vector<Eigen::MatrixXd> transition;  // one S x S matrix per action
  Eigen::MatrixXd reward;                   // S x A
  double discount = 0.9;
  int start_state = 0;

  void validate() const {
    if (num_states < 1 || num_actions < 1)
      throw std::invalid_argument("mdp: need at least one state and action");
    if (static_cast<int>(transition.size()) != num_actions)
      throw std::invalid_argument("mdp: transition tensor has wrong action count");
    if (reward.rows() != num_states || reward.cols() != num_actions)
      throw std::invalid_argument("mdp: reward table has wrong shape");
    if (!(discount >= 0.0 && discount < 1.0))
      throw std::invalid_argument("mdp: discount must be in [0, 1)");
    if (start_state < 0 || start_state >= num_states)
      throw std::invalid_argument("mdp: start state out of range");
    if (!reward.allFinite())
      throw std::invalid_argument("mdp: rewards must be finite");
    for (int a = 0; a < num_actions; ++a) {
      const auto& P = transition[a];
      if (P.rows() != num_states || P.cols() != num_states)
        throw std::invalid_argument("mdp: transition matrix has wrong shape");
      if ((P.array() < 0.0).any())
        throw std::invalid_argument("mdp: negative transition probability");
      for (int s = 0; s < num_states; ++s) {
        if (std::abs(P.row(s).sum() - 1.0) > 1e-12)
          throw std::invalid_argument("mdp: transition row does not sum to 1");
      }
    }
  }
};

struct GridCell {
  int row = 0;
  int col = 0;
};

struct TerminalReward {
  GridCell cell;
  double value = 0.0;
};

// Gridworld actions, in state-index order used throughout.
enum GridAction : int { kUp = 0, kDown = 1, kLeft = 2, kRight = 3 };
inline constexpr int kNumGridActions = 4;

struct GridworldSpec {
  int width = 5;
  int height = 5;
  GridCell start{0, 0};
  std::vector<TerminalReward> terminal_rewards;
  double step_reward = 0.0;
  double gamma = 0.9;

  int state_index(GridCell c) const { return c.row * width + c.col; }

  bool in_grid(GridCell c) const {
    return c.row >= 0 && c.row < height && c.col >= 0 && c.col < width;
  }

  void validate() const {
    if (width < 1 || height < 1)
      throw std::invalid_argument("gridworld: width and height must be positive");
    if (!in_grid(start)) throw std::invalid_argument("gridworld: start cell outside grid");
    if (!(gamma >= 0.0 && gamma < 1.0))
      throw std::invalid_argument("gridworld: gamma must be in [0, 1)");
    for (const auto& tr : terminal_rewards) {
      if (!in_grid(tr.cell))
        throw std::invalid_argument("gridworld: reward cell outside grid");
      if (!std::isfinite(tr.value))
        throw std::invalid_argument("gridworld: reward value must be finite");
    }
  }

  // Default two-optima layout: start top-left, the smaller reward at the
  // bottom-left corner and the larger one at the top-right corner, both
  // four steps away so the discounted gap is decided by the magnitudes.
  static GridworldSpec two_corner_default() {
    GridworldSpec spec;
    spec.width = 5;
    spec.height = 5;
    spec.start = {0, 0};
    spec.terminal_rewards = {{{4, 0}, 0.7}, {{0, 4}, 1.0}};
    spec.step_reward = 0.0;
    spec.gamma = 0.9;
    return spec;
  }
};

inline GridCell grid_move(GridCell c, int action) {
  switch (action) {
    case kUp: return {c.row - 1, c.col};
    case kDown: return {c.row + 1, c.col};
    case kLeft: return {c.row, c.col - 1};
    case kRight: return {c.row, c.col + 1};
    default: throw std::invalid_argument("gridworld: unknown action");
  }
}

// Deterministic gridworld. Reward cells are absorbing; while absorbed, every
// step pays (1 - gamma) * value so the discounted value of arriving at a
// reward cell after k steps is exactly gamma^k * value, and starting on a
// reward cell is worth exactly value.
inline TabularMdp build_gridworld(const GridworldSpec& spec) {
  spec.validate();
  TabularMdp mdp;
  mdp.num_states = spec.width * spec.height;
  mdp.num_actions = kNumGridActions;
  mdp.discount = spec.gamma;
  mdp.start_state = spec.state_index(spec.start);
  mdp.reward = Eigen::MatrixXd::Constant(mdp.num_states, mdp.num_actions, spec.step_reward);
  mdp.transition.assign(mdp.num_actions,
                        Eigen::MatrixXd::Zero(mdp.num_states, mdp.num_states));

  std::vector<double> terminal_value(mdp.num_states, 0.0);
  std::vector<bool> is_terminal(mdp.num_states, false);
  for (const auto& tr : spec.terminal_rewards) {
    int s = spec.state_index(tr.cell);
    is_terminal[s] = true;
    terminal_value[s] = tr.value;
  }

  for (int r = 0; r < spec.height; ++r) {
    for (int c = 0; c < spec.width; ++c) {
      int s = spec.state_index({r, c});
      for (int a = 0; a < kNumGridActions; ++a) {
        if (is_terminal[s]) {
          mdp.transition[a](s, s) = 1.0;
          mdp.reward(s, a) = (1.0 - spec.gamma) * terminal_value[s];
          continue;
        }
        GridCell next = grid_move({r, c}, a);
        if (!spec.in_grid(next)) next = {r, c};  // off-grid moves clamp
        mdp.transition[a](s, spec.state_index(next)) = 1.0;
      }
    }
  }
  mdp.validate();
  return mdp;
}

inline void check_policy_table(const TabularMdp& mdp, const Eigen::MatrixXd& probs) {
  if (probs.rows() != mdp.num_states || probs.cols() != mdp.num_actions)
    throw std::invalid_argument("policy table has wrong shape");
  for (int s = 0; s < mdp.num_states; ++s) {
    if ((probs.row(s).array() < 0.0).any() ||
        std::abs(probs.row(s).sum() - 1.0) > 1e-9)
      throw std::invalid_argument("policy row is not a probability vector");
  }
}

// P^pi(s, s') = sum_a pi(a|s) P(s'|s,a)
inline Eigen::MatrixXd policy_transition_matrix(const TabularMdp& mdp,
                                                const Eigen::MatrixXd& probs) {
  check_policy_table(mdp, probs);
  Eigen::MatrixXd P = Eigen::MatrixXd::Zero(mdp.num_states, mdp.num_states);
  for (int a = 0; a < mdp.num_actions; ++a)
    P.noalias() += probs.col(a).asDiagonal() * mdp.transition[a];
  return P;
}

struct ValueTables {
  Eigen::VectorXd v;          // V^{tau,pi}, length S
  Eigen::MatrixXd q;          // Q^{tau,pi}, S x A
  Eigen::VectorXd occupancy;  // discounted state occupancy from s0, length S
  double entropy_weight = 0.0;
};

inline double categorical_entropy(const Eigen::VectorXd& probs) {
  double h = 0.0;
  for (int i = 0; i < probs.size(); ++i)
    if (probs[i] > 0.0) h -= probs[i] * std::log(probs[i]);
  return h;
}

// Solves the entropy-augmented Bellman system by direct factorization:
//   (I - gamma P^pi) v = r^pi,  r^pi(s) = sum_a pi(a|s) R(s,a) + tau H(pi(.|s))
// and the occupancy as the transposed solve against e_{s0}.
inline ValueTables solve_values(const TabularMdp& mdp, const Eigen::MatrixXd& probs,
                                double tau) {
  check_policy_table(mdp, probs);
  if (tau < 0.0) throw std::invalid_argument("entropy weight must be nonnegative");
  const int S = mdp.num_states;
  const int A = mdp.num_actions;

  Eigen::VectorXd state_entropy(S);
  for (int s = 0; s < S; ++s) state_entropy[s] = categorical_entropy(probs.row(s));

  Eigen::VectorXd r_pi = (probs.array() * mdp.reward.array()).rowwise().sum();
  r_pi += tau * state_entropy;

  Eigen::MatrixXd Ppi = policy_transition_matrix(mdp, probs);
  Eigen::MatrixXd M = Eigen::MatrixXd::Identity(S, S) - mdp.discount * Ppi;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(M);
  if (std::abs(lu.determinant()) < 1e-300)
    throw std::runtime_error("solve_values: singular Bellman system");

  ValueTables out;
  out.entropy_weight = tau;
  out.v = lu.solve(r_pi);

  out.q.resize(S, A);
  for (int a = 0; a < A; ++a)
    out.q.col(a) = mdp.reward.col(a) + tau * state_entropy +
                   mdp.discount * (mdp.transition[a] * out.v);

  Eigen::VectorXd e0 = Eigen::VectorXd::Zero(S);
  e0[mdp.start_state] = 1.0;
  out.occupancy = M.transpose().partialPivLu().solve(e0);
  return out;
}

}  // namespace landscape

#endif
