#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>
#include <random>

#include "oracles.hpp"
#include "wdbo/baselines.hpp"

using namespace wdbo;

namespace {

Hyperparameters spatial_hyper() {
  Hyperparameters h;
  h.family.spatial = CorrelationKind::kMatern52;
  h.lambda = 1.3;
  h.l_s = 0.4;
  h.sigma2 = 0.05;
  return h;
}

MleOptions cheap_mle() {
  MleOptions opts;
  opts.num_starts = 1;
  opts.max_iters = 20;
  opts.tv_epsilon_grid = 0;  // keep epsilon fixed
  return opts;
}

Dataset uniform_init(int n, int d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Dataset out;
  for (int i = 0; i < n; ++i) {
    SpaceTimePoint pt;
    pt.x.resize(d);
    for (int k = 0; k < d; ++k) pt.x[k] = unif(rng);
    pt.t = 0.02 * unif(rng);
    out.append({pt, unif(rng)});
  }
  return out;
}

}  // namespace

TEST_CASE("tv covariance pinned values") {
  auto h = spatial_hyper();
  BaselineConfig cfg;
  Observation a{{Eigen::Vector2d(0.2, 0.3), 0.0}, 0.0};
  Observation b{{Eigen::Vector2d(0.2, 0.3), 0.9}, 0.0};

  cfg.epsilon = 0.3;
  CHECK(tv_covariance(a, 4, b, 4, h, cfg) ==
        doctest::Approx(h.lambda).epsilon(1e-14));

  cfg.epsilon = 0.0;
  Observation far{{Eigen::Vector2d(0.9, 0.1), 0.0}, 0.0};
  CHECK(tv_covariance(a, 0, far, 7, h, cfg) ==
        doctest::Approx(h.lambda *
                        spatial_correlation((a.point.x - far.point.x).norm(), h))
            .epsilon(1e-13));

  cfg.epsilon = 0.19;
  CHECK(tv_covariance(a, 3, a, 5, h, cfg) ==
        doctest::Approx(h.lambda * 0.81).epsilon(1e-13));

  cfg.epsilon = 1.5;
  CHECK_THROWS_AS(tv_covariance(a, 0, b, 1, h, cfg), std::invalid_argument);
}

TEST_CASE("discounted Gram matrices stay positive definite") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  auto h = spatial_hyper();
  BaselineConfig cfg;
  for (double eps : {0.05, 0.3, 0.8}) {
    cfg.epsilon = eps;
    const int n = 30;
    std::vector<Observation> obs;
    for (int i = 0; i < n; ++i) {
      obs.push_back({{Eigen::Vector2d(unif(rng), unif(rng)), 0.0}, 0.0});
    }
    Eigen::MatrixXd gram(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        gram(i, j) = tv_covariance(obs[i], i, obs[j], j, h, cfg);
      }
    }
    gram.diagonal().array() += h.sigma2;
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram);
    CHECK(eig.eigenvalues().minCoeff() >= h.sigma2 - 1e-10);
  }
}

TEST_CASE("GP-UCB grows append-only; R-GP-UCB resets modulo N") {
  const NoisyObjective objective = [](const Eigen::VectorXd& x, double t) {
    return std::sin(5.0 * x[0]) + 0.2 * t;
  };

  BaselineConfig cfg;
  cfg.variant = BaselineVariant::kGpUcb;
  cfg.mle = cheap_mle();
  BaselineController gpucb(cfg, 7);
  gpucb.initialize(uniform_init(15, 2, 11), 0.03);
  double t = 0.03;
  for (int k = 1; k <= 20; ++k) {
    const auto rec = gpucb.step(t, objective);
    CHECK(rec.dataset_size == 15 + k);
    t += 0.01;
  }

  cfg.variant = BaselineVariant::kRGpUcb;
  cfg.reset_period = 30;
  BaselineController rgpucb(cfg, 7);
  rgpucb.initialize(uniform_init(15, 2, 11), 0.0);
  t = 0.0;
  for (int k = 1; k <= 75; ++k) {
    rgpucb.step(t, objective);
    t += 0.005;
  }
  CHECK(rgpucb.dataset().size() == 75 % 30);
}

TEST_CASE("TV with epsilon 0 reproduces the GP-UCB query sequence") {
  std::mt19937_64 noise_a(17);
  std::mt19937_64 noise_b(17);
  std::normal_distribution<double> gauss_a(0.0, 0.1);
  std::normal_distribution<double> gauss_b(0.0, 0.1);
  const NoisyObjective obj_a = [&](const Eigen::VectorXd& x, double t) {
    return std::sin(5.0 * x[0] + t) + gauss_a(noise_a);
  };
  const NoisyObjective obj_b = [&](const Eigen::VectorXd& x, double t) {
    return std::sin(5.0 * x[0] + t) + gauss_b(noise_b);
  };

  BaselineConfig cfg;
  cfg.variant = BaselineVariant::kGpUcb;
  cfg.mle = cheap_mle();
  BaselineController gpucb(cfg, 23);
  cfg.variant = BaselineVariant::kTvGpUcb;
  cfg.epsilon = 0.0;
  BaselineController tv(cfg, 23);

  gpucb.initialize(uniform_init(10, 2, 29), 0.02);
  tv.initialize(uniform_init(10, 2, 29), 0.02);

  double t = 0.02;
  for (int k = 0; k < 12; ++k) {
    const auto a = gpucb.step(t, obj_a);
    const auto b = tv.step(t, obj_b);
    CHECK((a.query.x - b.query.x).norm() < 1e-12);
    CHECK(a.y == b.y);
    t += 0.01;
  }
}

TEST_CASE("TV epsilon grid fit picks up strong forgetting") {
  // observations at the same location flip sign over the sequence; a
  // discounted model explains them far better than epsilon ~ 0
  Dataset data;
  for (int i = 0; i < 24; ++i) {
    SpaceTimePoint pt{Eigen::Vector2d(0.5 + 0.001 * i, 0.5), 0.01 * i};
    data.append({pt, (i < 12 ? 1.0 : -1.0) + 0.01 * i});
  }
  CovarianceModel model;
  model.hyper = spatial_hyper();
  model.mode = TemporalMode::kIndexDiscount;
  model.tv_epsilon = 0.001;
  MleOptions opts;
  opts.num_starts = 2;
  opts.max_iters = 60;
  opts.tv_epsilon_grid = 8;
  const auto fitted = fit_mle_model(data, model, opts);
  CHECK(fitted.tv_epsilon > 0.001);
  CHECK(log_marginal_likelihood(data, fitted) >=
        log_marginal_likelihood(data, model) - 1e-9);
}
