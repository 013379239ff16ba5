#pragma once

#include <cstdint>

#include "wdbo/controller.hpp"
#include "wdbo/gp.hpp"

namespace wdbo {

enum class BaselineVariant { kGpUcb, kRGpUcb, kTvGpUcb };

/// Configuration shared by the comparison algorithms. All of them reuse the
/// W-DBO acquisition optimizer and noise model; only the dataset policy and
/// the covariance differ.
struct BaselineConfig {
  BaselineVariant variant = BaselineVariant::kGpUcb;
  double epsilon = 0.01;  // index-discount rate, estimated by MLE grid
  int reset_period = 30;  // R-GP-UCB: clear the dataset every N iterations
  AcquisitionConfig acquisition;
  KernelFamily family;
  MleOptions mle = dynamic_mle_defaults();
  int mle_restart_period = 5;  // full multistart every k-th refit
};

/// Index-discounted covariance of the time-varying variant:
///   lambda k_S(||x_i - x_j||) (1 - eps)^{|i - j| / 2},
/// with i, j the query sequence numbers.
double tv_covariance(const Observation& o_i, int i, const Observation& o_j,
                     int j, const Hyperparameters& h,
                     const BaselineConfig& cfg);

/// GP-UCB (spatial-only, append-only), R-GP-UCB (periodic dataset reset) and
/// TV-GP-UCB (index-discounted covariance) behind the common harness
/// interface.
class BaselineController : public DboAlgorithm {
 public:
  BaselineController(BaselineConfig config, std::uint64_t seed);

  void initialize(Dataset init, double t0) override;
  AlgoStep step(double t0, const NoisyObjective& objective) override;
  void advance_time(double /*dt*/) override {}

  const Dataset& dataset() const override { return data_; }
  const CovarianceModel& model() const { return model_; }
  int iterations() const { return iterations_; }

 private:
  void refit();

  BaselineConfig config_;
  Rng rng_;
  Dataset data_;
  CovarianceModel model_;
  GramState gram_;
  int iterations_ = 0;  // optimizer queries since the last reset boundary
  int dim_ = 1;
  std::uint64_t fit_count_ = 0;
  bool initialized_ = false;
};

}  // namespace wdbo
