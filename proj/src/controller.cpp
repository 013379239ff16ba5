#include "wdbo/controller.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "wdbo/optim.hpp"

namespace wdbo {

RemovalBudget budget_advance(RemovalBudget budget, double dt, double l_t) {
  if (dt < 0.0) throw std::invalid_argument("budget_advance: negative dt");
  if (!(l_t > 0.0)) throw std::invalid_argument("budget_advance: l_t <= 0");
  budget.value *= std::pow(1.0 + budget.alpha, dt / l_t);
  return budget;
}

PruneResult prune(Dataset data, RemovalBudget budget, double t0,
                  const Hyperparameters& h, GramState gp) {
  PruneResult out;
  while (budget.value > 1.0 && data.size() > 1) {
    const std::vector<double> ratios = relevancy_sweep(data, t0, h, gp);
    int best = 0;
    for (int i = 1; i < data.size(); ++i) {
      if (ratios[i] < ratios[best]) best = i;  // ties keep the lowest index
    }
    if (budget.value <= 1.0 + ratios[best]) break;
    out.removed.push_back({data[best], ratios[best]});
    budget.value /= 1.0 + ratios[best];
    data.remove(best);
    gp = GramState(data, gp.model());
  }
  out.data = std::move(data);
  out.budget = budget;
  return out;
}

SpaceTimePoint acquire(const GramState& gp, const Dataset& data, int dim,
                       double t0, const AcquisitionConfig& cfg, Rng& rng) {
  const int d = data.empty() ? dim : data[0].point.dim();
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  SpaceTimePoint out;
  out.t = t0;
  if (data.empty()) {
    out.x.resize(d);
    for (int i = 0; i < d; ++i) out.x[i] = unif(rng);
    return out;
  }

  const double root_beta = std::sqrt(cfg.beta);
  const auto ucb = [&](const Eigen::VectorXd& x) {
    SpaceTimePoint q{x, t0};
    const PosteriorValue p = posterior(gp, data, q);
    return p.mean + root_beta * std::sqrt(p.var);
  };

  // quasi-random scan, randomly shifted so repeated calls decorrelate
  Eigen::VectorXd shift(d);
  for (int i = 0; i < d; ++i) shift[i] = unif(rng);
  std::vector<std::pair<double, Eigen::VectorXd>> scored;
  scored.reserve(cfg.num_candidates + 1);
  for (int c = 0; c < cfg.num_candidates; ++c) {
    Eigen::VectorXd x = optim::halton_point(c, d);
    for (int i = 0; i < d; ++i) {
      x[i] += shift[i];
      if (x[i] >= 1.0) x[i] -= 1.0;
    }
    scored.emplace_back(ucb(x), x);
  }
  std::sort(scored.begin(), scored.end(),
            [](const auto& a, const auto& b) { return a.first > b.first; });

  Eigen::VectorXd best_x = scored[0].second;
  double best_v = scored[0].first;

  // refine starts: the best-scoring candidates plus the incumbent best
  // observation (local polish around the current maximizer)
  std::vector<Eigen::VectorXd> starts;
  const int refine = std::min<int>(cfg.num_refine, scored.size());
  for (int r = 0; r < refine; ++r) starts.push_back(scored[r].second);
  int incumbent = 0;
  for (int i = 1; i < data.size(); ++i) {
    if (data[i].y > data[incumbent].y) incumbent = i;
  }
  starts.push_back(data[incumbent].point.x);

  const Eigen::VectorXd lo = Eigen::VectorXd::Zero(d);
  const Eigen::VectorXd hi = Eigen::VectorXd::Ones(d);
  optim::NelderMeadOptions nm;
  nm.max_iters = cfg.refine_iters;
  nm.initial_step = 0.05;
  for (const auto& start : starts) {
    const auto res = optim::nelder_mead(
        [&](const Eigen::VectorXd& x) { return -ucb(x); }, start, lo, hi, nm);
    if (-res.value > best_v) {
      best_v = -res.value;
      best_x = res.x;
    }
  }
  out.x = best_x;
  return out;
}

WdboController::WdboController(WdboConfig config, std::uint64_t seed)
    : config_(config), rng_(seed) {
  hyper_.family = config_.family;
  hyper_.lambda = 1.0;
  hyper_.l_s = 0.5;
  hyper_.l_t = 0.5;
  hyper_.sigma2 = 1e-2;
  budget_.alpha = config_.alpha;
  config_.mle.fit_ard = config_.use_ard;
}

void WdboController::refit() {
  if (data_.size() >= 2) {
    MleOptions opts = config_.mle;
    // vary the restart draws across refits, deterministically; the full
    // multistart runs every restart_period-th refit, the steps in between
    // re-converge from the warm start only (cheap: the simplex exits early
    // when already at an optimum)
    opts.seed = config_.mle.seed + 0x9E3779B97F4A7C15ULL * ++fit_count_;
    if (config_.mle_restart_period > 1 &&
        fit_count_ % config_.mle_restart_period != 0) {
      opts.num_starts = 1;
    }
    hyper_ = fit_mle(data_, config_.family, hyper_, opts);
  }
  CovarianceModel model;
  model.hyper = hyper_;
  model.mode = TemporalMode::kProduct;
  gram_ = GramState(data_, model);
}

void WdboController::initialize(Dataset init, double t0) {
  (void)t0;
  data_ = std::move(init);
  budget_.value = 1.0;
  removal_log_.clear();
  growth_exponent_ = 0.0;
  refit();
  initialized_ = true;
}

AlgoStep WdboController::step(double t0, const NoisyObjective& objective) {
  if (!initialized_) throw std::logic_error("WdboController: not initialized");

  const SpaceTimePoint query =
      acquire(gram_, data_, data_.empty() ? 1 : data_[0].point.dim(), t0,
              config_.acquisition, rng_);
  const double y = objective(query.x, t0);
  data_.append({query, y});
  refit();

  PruneResult pruned = prune(std::move(data_), budget_, t0, hyper_, gram_);
  data_ = std::move(pruned.data);
  budget_ = pruned.budget;
  if (!pruned.removed.empty()) {
    CovarianceModel model;
    model.hyper = hyper_;
    model.mode = TemporalMode::kProduct;
    gram_ = GramState(data_, model);
    for (auto& r : pruned.removed) removal_log_.push_back(std::move(r));
  }

  AlgoStep rec;
  rec.query = query;
  rec.y = y;
  rec.dataset_size = data_.size();
  rec.num_removed = static_cast<int>(pruned.removed.size());
  rec.budget = budget_.value;
  return rec;
}

void WdboController::advance_time(double dt) {
  budget_ = budget_advance(budget_, dt, hyper_.l_t);
  growth_exponent_ += dt / hyper_.l_t;
}

}  // namespace wdbo
