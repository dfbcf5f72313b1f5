#ifndef LANDSCAPE_TRACE_HPP
#define LANDSCAPE_TRACE_HPP

#include <utility>
#include <vector>

#include <Eigen/Core>

namespace landscape {

struct TrainRecord {
  int iter = 0;
  double objective_true = 0.0;  // tau = 0 (and sigma = 0) objective
  double objective_aug = 0.0;   // objective actually ascended
  double tau = 0.0;
  double grad_norm = 0.0;
  // REINFORCE-only columns; untouched by the exact trainer.
  double sigma = 0.0;
  double eval_return_mean = 0.0;
  double eval_return_std = 0.0;
  bool has_eval = false;
};

struct TrainTrace {
  std::vector<TrainRecord> records;
  std::vector<std::pair<int, Eigen::VectorXd>> checkpoints;  // (iter, theta)
  Eigen::VectorXd final_theta;
};

}  // namespace landscape

#endif
