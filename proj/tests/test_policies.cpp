#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "landscape/landscape.hpp"

using namespace landscape;
using Catch::Approx;

TEST_CASE("zero logits give the uniform distribution") {
  SoftmaxTabularPolicy policy(5, 4);
  for (int s = 0; s < 5; ++s) {
    Eigen::VectorXd p = policy.action_probs(s);
    for (int a = 0; a < 4; ++a) CHECK(p[a] == Approx(0.25).epsilon(1e-12));
  }
}

TEST_CASE("softmax is invariant to a per-state logit shift") {
  auto rng = make_stream({3, 1});
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::VectorXd theta(20);
  for (int i = 0; i < 20; ++i) theta[i] = gauss(rng);
  SoftmaxTabularPolicy a(5, 4, theta);

  Eigen::VectorXd shifted = theta;
  for (int ai = 0; ai < 4; ++ai) shifted[a.param_index(ai, 2)] += 123.0;
  SoftmaxTabularPolicy b(5, 4, shifted);
  CHECK((a.action_probs(2) - b.action_probs(2)).norm() == Approx(0.0).margin(1e-12));
}

TEST_CASE("softmax stays normalized for extreme logits") {
  SoftmaxTabularPolicy policy(1, 3);
  policy.theta << 1000.0, -1000.0, 999.0;
  Eigen::VectorXd p = policy.action_probs(0);
  CHECK(p.sum() == Approx(1.0).epsilon(1e-12));
  CHECK(p.allFinite());
}

TEST_CASE("log-prob gradient matches finite differences of log pi") {
  auto rng = make_stream({5, 2});
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::VectorXd theta(12);
  for (int i = 0; i < 12; ++i) theta[i] = gauss(rng);
  SoftmaxTabularPolicy policy(3, 4, theta);

  const double h = 1e-6;
  for (int s = 0; s < 3; ++s) {
    for (int a = 0; a < 4; ++a) {
      Eigen::VectorXd g = policy.log_prob_grad_state(s, a);
      for (int ai = 0; ai < 4; ++ai) {
        Eigen::VectorXd tp = theta, tm = theta;
        tp[policy.param_index(ai, s)] += h;
        tm[policy.param_index(ai, s)] -= h;
        double fd = (std::log(SoftmaxTabularPolicy(3, 4, tp).action_probs(s)[a]) -
                     std::log(SoftmaxTabularPolicy(3, 4, tm).action_probs(s)[a])) /
                    (2.0 * h);
        CHECK(g[ai] == Approx(fd).margin(1e-6));
      }
    }
  }
}

TEST_CASE("entropy gradient matches finite differences of H") {
  auto rng = make_stream({7, 3});
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::VectorXd theta(8);
  for (int i = 0; i < 8; ++i) theta[i] = gauss(rng);
  SoftmaxTabularPolicy policy(2, 4, theta);

  const double h = 1e-6;
  for (int s = 0; s < 2; ++s) {
    Eigen::VectorXd g = categorical_entropy_grad_state(policy, s);
    for (int ai = 0; ai < 4; ++ai) {
      Eigen::VectorXd tp = theta, tm = theta;
      tp[policy.param_index(ai, s)] += h;
      tm[policy.param_index(ai, s)] -= h;
      double fd =
          (categorical_entropy(SoftmaxTabularPolicy(2, 4, tp).action_probs(s)) -
           categorical_entropy(SoftmaxTabularPolicy(2, 4, tm).action_probs(s))) /
          (2.0 * h);
      CHECK(g[ai] == Approx(fd).margin(1e-6));
    }
  }
}

TEST_CASE("mixture endpoints: mix=0 is the base, mix=1 is uniform") {
  auto rng = make_stream({11, 4});
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::VectorXd theta(8);
  for (int i = 0; i < 8; ++i) theta[i] = gauss(rng);
  SoftmaxTabularPolicy base(2, 4, theta);

  MixedPolicy none(base, 0.0);
  MixedPolicy full(base, 1.0);
  for (int s = 0; s < 2; ++s) {
    CHECK((none.action_probs(s) - base.action_probs(s)).norm() ==
          Approx(0.0).margin(1e-15));
    for (int a = 0; a < 4; ++a) CHECK(full.action_probs(s)[a] == Approx(0.25));
  }
}

TEST_CASE("mixture enforces the minimum per-action probability") {
  SoftmaxTabularPolicy base(1, 4);
  base.theta << 50.0, 0.0, 0.0, 0.0;  // near-deterministic
  MixedPolicy mixed(base, 0.2);
  Eigen::VectorXd p = mixed.action_probs(0);
  for (int a = 0; a < 4; ++a) CHECK(p[a] >= 0.05 - 1e-15);
  CHECK(p.sum() == Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(MixedPolicy(base, 1.5), std::invalid_argument);
}

TEST_CASE("gaussian policy: mean, clipping, flat-parameter round-trip") {
  GaussianLinearPolicy policy(4, 2, 0.5);
  auto rng = make_stream({13, 5});
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::VectorXd p(8);
  for (int i = 0; i < 8; ++i) p[i] = gauss(rng);
  policy.set_flat_params(p);
  CHECK((policy.flat_params() - p).norm() == 0.0);

  Eigen::VectorXd s(4);
  s << 0.3, -0.2, 0.1, 0.4;
  CHECK((policy.mean(s) - policy.theta * s).norm() == 0.0);

  Eigen::VectorXd big(2);
  big << 10.0, -10.0;
  Eigen::VectorXd c = policy.clip(big);
  CHECK(c[0] == 1.0);
  CHECK(c[1] == -1.0);
}

TEST_CASE("gaussian log-prob gradient matches finite differences") {
  GaussianLinearPolicy policy(4, 2, 0.7);
  auto rng = make_stream({17, 6});
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::VectorXd p(8), s(4), a(2);
  for (int i = 0; i < 8; ++i) p[i] = gauss(rng);
  for (int i = 0; i < 4; ++i) s[i] = gauss(rng);
  for (int i = 0; i < 2; ++i) a[i] = gauss(rng);
  policy.set_flat_params(p);

  auto log_prob = [&](const Eigen::VectorXd& params) {
    GaussianLinearPolicy q(4, 2, 0.7);
    q.set_flat_params(params);
    Eigen::VectorXd diff = a - q.mean(s);
    return -diff.squaredNorm() / (2.0 * 0.7 * 0.7);
  };

  Eigen::VectorXd g = policy.log_prob_grad(s, a);
  const double h = 1e-6;
  for (int i = 0; i < 8; ++i) {
    Eigen::VectorXd pp = p, pm = p;
    pp[i] += h;
    pm[i] -= h;
    CHECK(g[i] == Approx((log_prob(pp) - log_prob(pm)) / (2.0 * h)).margin(1e-6));
  }
}

TEST_CASE("gaussian sampling is deterministic per stream and unbiased at sigma=0") {
  GaussianLinearPolicy policy(4, 2, 0.5);
  Eigen::VectorXd s = Eigen::VectorXd::Ones(4);
  auto r1 = make_stream({19, 7});
  auto r2 = make_stream({19, 7});
  CHECK((policy.sample(s, r1) - policy.sample(s, r2)).norm() == 0.0);

  GaussianLinearPolicy det(4, 2, 0.0);
  auto r3 = make_stream({19, 8});
  CHECK((det.sample(s, r3) - det.mean(s)).norm() == 0.0);
  CHECK_THROWS_AS(det.log_prob_grad(s, Eigen::VectorXd::Zero(2)), std::invalid_argument);
}
