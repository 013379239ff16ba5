#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "wdbo/criterion.hpp"
#include "wdbo/gp.hpp"
#include "wdbo/kernel.hpp"

namespace wdbo {

using Rng = std::mt19937_64;

/// Noisy objective: y = f(x, t) + noise, in normalized coordinates.
using NoisyObjective =
    std::function<double(const Eigen::VectorXd& x, double t)>;

/// Multiplicative allowance for cumulative posterior drift. Grows as
/// (1 + alpha)^{dt / l_T} on time advance; each removal divides by
/// (1 + R_hat) and is only permitted while value > 1 + R_hat, so the value
/// never drops below 1.
struct RemovalBudget {
  double value = 1.0;
  double alpha = 0.25;
};

RemovalBudget budget_advance(RemovalBudget budget, double dt, double l_t);

struct Removal {
  Observation obs;
  double ratio = 0.0;  // relevancy ratio at removal time
};

struct PruneResult {
  Dataset data;
  RemovalBudget budget;
  std::vector<Removal> removed;
};

/// Greedy removal loop: while the budget exceeds 1, compute all relevancy
/// ratios on the current dataset, pick the argmin (ties break to the lowest
/// index), and remove it iff budget > 1 + R_hat, consuming a factor
/// (1 + R_hat). Ratios are recomputed against the shrinking dataset after
/// every removal; the dataset is never pruned below one observation.
PruneResult prune(Dataset data, RemovalBudget budget, double t0,
                  const Hyperparameters& h, GramState gp);

struct AcquisitionConfig {
  double beta = 4.0;  // UCB weight, phi = mu + sqrt(beta) sigma
  int num_candidates = 256;
  int num_refine = 8;
  int refine_iters = 60;
};

/// Maximize the GP-UCB acquisition over [0,1]^dim at the present time:
/// quasi-random candidates plus local refinement from the best few. Returns
/// a uniform random point when the dataset is empty (flat prior).
SpaceTimePoint acquire(const GramState& gp, const Dataset& data, int dim,
                       double t0, const AcquisitionConfig& cfg, Rng& rng);

/// MLE settings for the on-the-fly fits inside the optimization loops: the
/// lengthscale prior is on so saturated fits cannot freeze the budget.
inline MleOptions dynamic_mle_defaults() {
  MleOptions opts;
  opts.lengthscale_prior = true;
  return opts;
}

struct WdboConfig {
  double alpha = 0.25;
  AcquisitionConfig acquisition;
  KernelFamily family;  // Matern-5/2 spatial, Matern-3/2 temporal defaults
  MleOptions mle = dynamic_mle_defaults();
  int mle_restart_period = 5;  // full multistart every k-th refit
  bool use_ard = false;
};

/// One controller iteration as seen by the harness.
struct AlgoStep {
  SpaceTimePoint query;
  double y = 0.0;
  int dataset_size = 0;
  int num_removed = 0;
  double budget = 1.0;
};

/// Interface shared by W-DBO and the baselines: the harness drives
/// initialize / step / advance_time and owns the clock.
class DboAlgorithm {
 public:
  virtual ~DboAlgorithm() = default;

  /// Install the initial observations and fit once; t0 is the time at which
  /// the first step will run.
  virtual void initialize(Dataset init, double t0) = 0;

  /// One optimize-observe-fit(-prune) iteration at time t0.
  virtual AlgoStep step(double t0, const NoisyObjective& objective) = 0;

  /// Clock advance after a step; dt is the measured response time in the
  /// same units as the temporal lengthscale.
  virtual void advance_time(double dt) = 0;

  virtual const Dataset& dataset() const = 0;
  virtual double budget() const { return 1.0; }
};

/// The optimize-observe-fit-prune loop with the exponential removal budget.
///
/// The acquisition at each step uses the hyperparameters fitted at the end
/// of the previous step; the budget advance uses the current temporal
/// lengthscale estimate, so a changing l_T changes the growth rate. The
/// budget is not capped: long droughts can bank large budgets and enable
/// removal bursts.
class WdboController : public DboAlgorithm {
 public:
  WdboController(WdboConfig config, std::uint64_t seed);

  void initialize(Dataset init, double t0) override;
  AlgoStep step(double t0, const NoisyObjective& objective) override;
  void advance_time(double dt) override;

  const Dataset& dataset() const override { return data_; }
  double budget() const override { return budget_.value; }
  const Hyperparameters& hyper() const { return hyper_; }
  const std::vector<Removal>& removal_log() const { return removal_log_; }

  /// Cumulative budget growth exponent sum(dt_k / l_T,k); the drift
  /// contract is prod(1 + R_hat) <= (1 + alpha)^{this}.
  double growth_exponent() const { return growth_exponent_; }

 private:
  void refit();

  WdboConfig config_;
  Rng rng_;
  Dataset data_;
  Hyperparameters hyper_;
  GramState gram_;
  RemovalBudget budget_;
  std::vector<Removal> removal_log_;
  double growth_exponent_ = 0.0;
  std::uint64_t fit_count_ = 0;
  bool initialized_ = false;
};

}  // namespace wdbo
