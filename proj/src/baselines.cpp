#include "wdbo/baselines.hpp"

#include <cmath>
#include <stdexcept>

namespace wdbo {

double tv_covariance(const Observation& o_i, int i, const Observation& o_j,
                     int j, const Hyperparameters& h,
                     const BaselineConfig& cfg) {
  if (cfg.epsilon < 0.0 || cfg.epsilon > 1.0) {
    throw std::invalid_argument("tv_covariance: epsilon outside [0, 1]");
  }
  const double ks = spatial_correlation_diff(o_i.point.x - o_j.point.x, h);
  return h.lambda * ks * std::pow(1.0 - cfg.epsilon, 0.5 * std::abs(i - j));
}

BaselineController::BaselineController(BaselineConfig config,
                                       std::uint64_t seed)
    : config_(config), rng_(seed) {
  model_.hyper.family = config_.family;
  model_.hyper.lambda = 1.0;
  model_.hyper.l_s = 0.5;
  model_.hyper.l_t = 0.5;
  model_.hyper.sigma2 = 1e-2;
  model_.mode = config_.variant == BaselineVariant::kTvGpUcb
                    ? TemporalMode::kIndexDiscount
                    : TemporalMode::kSpatialOnly;
  model_.tv_epsilon = config_.epsilon;
}

void BaselineController::refit() {
  if (data_.size() >= 2) {
    MleOptions opts = config_.mle;
    // vary the restart draws across refits, deterministically; full
    // multistart every restart_period-th refit, warm-only in between
    opts.seed = config_.mle.seed + 0x9E3779B97F4A7C15ULL * ++fit_count_;
    if (config_.mle_restart_period > 1 &&
        fit_count_ % config_.mle_restart_period != 0) {
      opts.num_starts = 1;
    }
    model_ = fit_mle_model(data_, model_, opts);
  }
  gram_ = GramState(data_, model_);
}

void BaselineController::initialize(Dataset init, double t0) {
  (void)t0;
  data_ = std::move(init);
  if (!data_.empty()) dim_ = data_[0].point.dim();
  iterations_ = 0;
  refit();
  initialized_ = true;
}

AlgoStep BaselineController::step(double t0, const NoisyObjective& objective) {
  if (!initialized_) {
    throw std::logic_error("BaselineController: not initialized");
  }

  const SpaceTimePoint query =
      acquire(gram_, data_, dim_, t0, config_.acquisition, rng_);
  const double y = objective(query.x, t0);
  data_.append({query, y});
  ++iterations_;

  int removed = 0;
  if (config_.variant == BaselineVariant::kRGpUcb &&
      iterations_ % config_.reset_period == 0) {
    removed = data_.size();
    data_.clear();
  }
  refit();

  AlgoStep rec;
  rec.query = query;
  rec.y = y;
  rec.dataset_size = data_.size();
  rec.num_removed = removed;
  rec.budget = 1.0;
  return rec;
}

}  // namespace wdbo
