#ifndef LANDSCAPE_ENV_HPP
#define LANDSCAPE_ENV_HPP

#include <cmath>
#include <random>
#include <stdexcept>

#include <Eigen/Core>

#include "landscape/rng.hpp"

namespace landscape {

// Deterministic point-mass arena with two circular goal regions. The near
// goal pays less per step inside than the far goal, mirroring the
// two-optima gridworld structure in a continuous setting.
struct PointMassConfig {
  double dt = 0.05;
  double friction = 0.1;
  int horizon = 200;
  Eigen::Vector2d start{0.0, 0.0};
  double start_jitter = 0.05;
  Eigen::Vector2d near_goal{1.0, 0.0};
  double near_radius = 0.7;
  double near_reward = 0.5;
  Eigen::Vector2d far_goal{3.0, 0.0};
  double far_radius = 0.7;
  double far_reward = 1.0;
  double arena_half_extent = 4.0;
  double action_bound = 1.0;
};

struct PointMassState {
  Eigen::Vector2d pos{0.0, 0.0};
  Eigen::Vector2d vel{0.0, 0.0};
  int t = 0;

  Eigen::Vector4d observation() const {
    Eigen::Vector4d x;
    x << pos, vel;
    return x;
  }
};

struct PointMassStep {
  PointMassState state;
  double reward = 0.0;
  bool done = false;
};

class PointMassEnv {
 public:
  explicit PointMassEnv(PointMassConfig cfg = {}) : cfg_(cfg) {}

  const PointMassConfig& config() const { return cfg_; }
  static constexpr int state_dim = 4;
  static constexpr int action_dim = 2;

  // Fixed start position plus small seeded jitter; same seed, same state.
  PointMassState reset(std::uint64_t seed) const {
    auto rng = make_stream({seed, 0x726573657400ULL});
    std::uniform_real_distribution<double> u(-cfg_.start_jitter, cfg_.start_jitter);
    PointMassState s;
    s.pos = cfg_.start + Eigen::Vector2d(u(rng), u(rng));
    s.vel.setZero();
    s.t = 0;
    return s;
  }

  PointMassStep step(const PointMassState& state, const Eigen::Vector2d& action) const {
    if (!action.allFinite())
      throw std::invalid_argument("pointmass: action must be finite");
    Eigen::Vector2d a =
        action.cwiseMax(-cfg_.action_bound).cwiseMin(cfg_.action_bound);

    PointMassStep out;
    out.state.pos = state.pos + cfg_.dt * state.vel;
    out.state.vel = state.vel + cfg_.dt * a - cfg_.friction * state.vel;
    out.state.pos =
        out.state.pos.cwiseMax(-cfg_.arena_half_extent).cwiseMin(cfg_.arena_half_extent);
    out.state.t = state.t + 1;

    out.reward = 0.0;
    if ((out.state.pos - cfg_.near_goal).norm() <= cfg_.near_radius)
      out.reward += cfg_.near_reward;
    if ((out.state.pos - cfg_.far_goal).norm() <= cfg_.far_radius)
      out.reward += cfg_.far_reward;
    out.done = out.state.t >= cfg_.horizon;
    return out;
  }

 private:
  PointMassConfig cfg_;
};

}  // namespace landscape

#endif
