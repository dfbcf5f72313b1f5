#ifndef LANDSCAPE_LIMITS_HPP
#define LANDSCAPE_LIMITS_HPP

#include <cmath>
#include <stdexcept>
#include <vector>

#include <Eigen/Core>

#include "landscape/rng.hpp"

namespace landscape {

// Separable quadratic with k1 locally-optimal coordinates and k2 ascent
// coordinates shifted to 2: O(theta) = -sum_{k1} theta_i^2 - sum_{k2} (theta_i - 2)^2.
struct LimitsConfig {
  int k1 = 50;
  int k2 = 50;
  double epsilon = 0.0;  // per-coordinate noise scale for simulated stochastic gradients
  int num_draws = 1000;
  double alpha = 0.1;
  std::uint64_t seed = 0;

  int dimension() const { return k1 + k2; }

  void validate() const {
    if (k1 < 0 || k2 < 0 || k1 + k2 < 1)
      throw std::invalid_argument("limits: k1 + k2 must be >= 1");
    if (epsilon < 0.0) throw std::invalid_argument("limits: epsilon must be >= 0");
    if (num_draws < 1) throw std::invalid_argument("limits: num_draws >= 1");
    if (alpha <= 0.0) throw std::invalid_argument("limits: alpha must be > 0");
  }
};

inline double limits_objective(const LimitsConfig& config, const Eigen::VectorXd& theta) {
  double v = 0.0;
  for (int i = 0; i < config.k1; ++i) v -= theta[i] * theta[i];
  for (int i = config.k1; i < config.dimension(); ++i)
    v -= (theta[i] - 2.0) * (theta[i] - 2.0);
  return v;
}

inline Eigen::VectorXd limits_gradient_at_origin(const LimitsConfig& config) {
  Eigen::VectorXd g = Eigen::VectorXd::Zero(config.dimension());
  for (int i = config.k1; i < config.dimension(); ++i) g[i] = 4.0;
  return g;
}

struct LimitsDrawOutcome {
  double delta_plus_random = 0.0;
  double delta_minus_random = 0.0;
  bool detected_random = false;
  double delta_plus_sgd = 0.0;
  double delta_minus_sgd = 0.0;
  bool detected_sgd = false;
};

struct LimitsReport {
  LimitsConfig config;
  double gradient_norm = 0.0;
  double frac_random = 0.0;  // fraction of draws finding an ascent direction
  double frac_sgd = 0.0;
  std::vector<LimitsDrawOutcome> draws;
};

// At theta = 0, draws K random unit directions and K noisy-gradient
// directions, evaluates the Delta pair for each, and reports the fraction
// that detect an ascent direction (improvement beyond 1e-12).
inline LimitsReport run_limits_experiment(const LimitsConfig& config) {
  config.validate();
  const int n = config.dimension();
  const double tol = 1e-12;
  Eigen::VectorXd origin = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd grad = limits_gradient_at_origin(config);
  double base = limits_objective(config, origin);

  LimitsReport report;
  report.config = config;
  report.gradient_norm = grad.norm();
  report.draws.resize(config.num_draws);

  std::normal_distribution<double> gauss(0.0, 1.0);
  int detected_random = 0, detected_sgd = 0;
  for (int k = 0; k < config.num_draws; ++k) {
    auto& out = report.draws[k];

    auto rng_rand = make_stream({config.seed, 0x72616e64ULL,
                                 static_cast<std::uint64_t>(k)});
    Eigen::VectorXd d = sample_unit_direction(rng_rand, n);
    out.delta_plus_random = limits_objective(config, config.alpha * d) - base;
    out.delta_minus_random = limits_objective(config, -config.alpha * d) - base;
    out.detected_random = out.delta_plus_random > tol || out.delta_minus_random > tol;
    detected_random += out.detected_random;

    auto rng_sgd = make_stream({config.seed, 0x736764ULL,
                                static_cast<std::uint64_t>(k)});
    Eigen::VectorXd g = grad;
    for (int i = 0; i < n; ++i) g[i] += config.epsilon * gauss(rng_sgd);
    double norm = g.norm();
    if (norm == 0.0) {
      out.detected_sgd = false;
      continue;
    }
    g /= norm;
    out.delta_plus_sgd = limits_objective(config, config.alpha * g) - base;
    out.delta_minus_sgd = limits_objective(config, -config.alpha * g) - base;
    out.detected_sgd = out.delta_plus_sgd > tol || out.delta_minus_sgd > tol;
    detected_sgd += out.detected_sgd;
  }
  report.frac_random = static_cast<double>(detected_random) / config.num_draws;
  report.frac_sgd = static_cast<double>(detected_sgd) / config.num_draws;
  return report;
}

}  // namespace landscape

#endif
