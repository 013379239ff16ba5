#include "wdbo/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <mutex>
#include <random>
#include <stdexcept>

#include <json.hpp>

#include "wdbo/baselines.hpp"
#include "wdbo/optim.hpp"

namespace wdbo::bench {

namespace {

struct SignalStats {
  double mean = 0.0;
  double variance = 1.0;
};

SignalStats signal_stats(const BenchmarkProblem& problem, int samples = 10000) {
  const int dim = problem.total_dim();
  double sum = 0.0;
  double sq = 0.0;
  for (int s = 0; s < samples; ++s) {
    const Eigen::VectorXd u = optim::halton_point(s, dim);
    const double v = problem.evaluate(problem.to_raw(u));
    sum += v;
    sq += v * v;
  }
  SignalStats out;
  out.mean = sum / samples;
  out.variance = std::max(sq / samples - out.mean * out.mean, 1e-12);
  return out;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

RegretOracle::RegretOracle(const BenchmarkProblem& problem,
                           int grid_resolution, int num_slices)
    : problem_(problem) {
  const int d = problem.spatial_dim;
  int res = std::max(2, grid_resolution);
  // cap the total cell count at 2^20
  while (std::pow(static_cast<double>(res), d) > static_cast<double>(1 << 20) &&
         res > 2) {
    --res;
  }
  num_slices = std::max(2, num_slices);
  lattice_.resize(num_slices);

  const auto slice_value = [&](const Eigen::VectorXd& x_unit, double t_unit) {
    return problem.evaluate_unit(x_unit, t_unit);
  };

  const Eigen::VectorXd lo = Eigen::VectorXd::Zero(d);
  const Eigen::VectorXd hi = Eigen::VectorXd::Ones(d);
  optim::NelderMeadOptions nm;
  nm.max_iters = 150;
  nm.initial_step = 0.25 / res;

  double best_overall = std::numeric_limits<double>::infinity();
  Eigen::VectorXd best_overall_x;
  double best_overall_t = 0.0;
  Eigen::VectorXd prev_argmin;  // warm start: minima drift between slices

  Eigen::VectorXd x(d);
  const std::int64_t total_cells =
      static_cast<std::int64_t>(std::llround(std::pow(res, d)));
  for (int s = 0; s < num_slices; ++s) {
    const double t_unit = static_cast<double>(s) / (num_slices - 1);
    // full grid scan, tracking the best few cells
    constexpr int kKeep = 5;
    std::vector<std::pair<double, Eigen::VectorXd>> best(
        kKeep, {std::numeric_limits<double>::infinity(), Eigen::VectorXd()});
    for (std::int64_t cell = 0; cell < total_cells; ++cell) {
      std::int64_t c = cell;
      for (int k = 0; k < d; ++k) {
        x[k] = static_cast<double>(c % res) / (res - 1);
        c /= res;
      }
      const double v = slice_value(x, t_unit);
      if (v < best.back().first) {
        best.back() = {v, x};
        std::sort(best.begin(), best.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
      }
    }
    if (prev_argmin.size() == d) {
      best.emplace_back(slice_value(prev_argmin, t_unit), prev_argmin);
    }
    double refined = best[0].first;
    Eigen::VectorXd refined_x = best[0].second;
    for (const auto& [v, start] : best) {
      if (!std::isfinite(v)) continue;
      const auto res_nm = optim::nelder_mead(
          [&](const Eigen::VectorXd& xx) { return slice_value(xx, t_unit); },
          start, lo, hi, nm);
      if (res_nm.value < refined) {
        refined = res_nm.value;
        refined_x = res_nm.x;
      }
    }
    lattice_[s] = refined;
    prev_argmin = refined_x;
    if (refined < best_overall) {
      best_overall = refined;
      best_overall_x = refined_x;
      best_overall_t = t_unit;
    }
  }

  // joint space-time refinement for the global minimum
  Eigen::VectorXd start(d + 1);
  start.head(d) = best_overall_x;
  start[d] = best_overall_t;
  optim::NelderMeadOptions nm_joint;
  nm_joint.max_iters = 200;
  nm_joint.initial_step = 0.02;
  const auto res_joint = optim::nelder_mead(
      [&](const Eigen::VectorXd& xt) {
        return slice_value(xt.head(d), xt[d]);
      },
      start, Eigen::VectorXd::Zero(d + 1), Eigen::VectorXd::Ones(d + 1),
      nm_joint);
  global_min_ = std::min(best_overall, res_joint.value);
}

double RegretOracle::min_value(double t_normalized) const {
  const int n = static_cast<int>(lattice_.size());
  const double t = std::clamp(t_normalized, 0.0, 1.0);
  const double pos = t * (n - 1);
  const int k = std::min(n - 2, static_cast<int>(pos));
  const double frac = pos - k;
  return (1.0 - frac) * lattice_[k] + frac * lattice_[k + 1];
}

const RegretOracle& RegretOracle::shared(const BenchmarkProblem& problem,
                                         int grid_resolution, int num_slices) {
  static std::mutex mutex;
  static std::map<std::string, std::unique_ptr<RegretOracle>> cache;
  const std::string key = problem.name + "/" + std::to_string(grid_resolution) +
                          "/" + std::to_string(num_slices);
  std::scoped_lock lock(mutex);
  auto it = cache.find(key);
  if (it == cache.end()) {
    it = cache.emplace(key, std::make_unique<RegretOracle>(
                                problem, grid_resolution, num_slices))
             .first;
  }
  return *it->second;
}

RunResult run_experiment(DboAlgorithm& algo, const BenchmarkProblem& problem,
                         const RunConfig& cfg) {
  RunResult result;
  const int d = problem.spatial_dim;

  const SignalStats stats = signal_stats(problem);
  const double noise_sd = std::sqrt(cfg.noise_fraction * stats.variance);

  // The initial design occupies the first 1/40 of the normalized time axis;
  // the optimizer loop then runs for exactly `duration` simulated seconds.
  const double init_window = cfg.duration / 39.0;
  const double total_span = cfg.duration + init_window;
  const double norm = total_span > 0.0 ? total_span : 1.0;

  const RegretOracle& oracle =
      RegretOracle::shared(problem, cfg.oracle_resolution, cfg.oracle_slices);

  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);

  const NoisyObjective objective = [&](const Eigen::VectorXd& x, double t) {
    // maximization sign (the benchmarks are minimized), centered at the
    // signal mean: the zero-mean GP then models structure instead of
    // spending its kernel on a constant offset
    return -(problem.evaluate_unit(x, t) - stats.mean) +
           noise_sd * gauss(rng);
  };

  Dataset init;
  for (int i = 0; i < cfg.n_init; ++i) {
    SpaceTimePoint pt;
    pt.x.resize(d);
    for (int k = 0; k < d; ++k) pt.x[k] = unif(rng);
    pt.t = init_window * unif(rng) / norm;
    const double y = objective(pt.x, pt.t);
    init.append({pt, y});
  }
  algo.initialize(std::move(init), init_window / norm);

  double t_sim = init_window;
  double regret_sum = 0.0;
  int steps = 0;
  while (t_sim < init_window + cfg.duration) {
    const double t_unit = t_sim / norm;
    AlgoStep st;
    double dt = 0.0;
    try {
      if (cfg.cost.mode == CostModel::Mode::kWall) {
        const auto begin = std::chrono::steady_clock::now();
        st = algo.step(t_unit, objective);
        const auto end = std::chrono::steady_clock::now();
        dt = std::chrono::duration<double>(end - begin).count();
        dt = std::max(dt, 1e-6);
      } else {
        st = algo.step(t_unit, objective);
        dt = cfg.cost.cost(st.dataset_size);
      }
    } catch (const std::exception& e) {
      result.completed = false;
      result.error = e.what();
      break;
    }
    algo.advance_time(dt / norm);

    RunRecord rec;
    rec.sim_time = t_sim;
    rec.x = st.query.x;
    rec.y = st.y;
    rec.f_true = problem.evaluate_unit(st.query.x, t_unit);
    rec.regret = rec.f_true - oracle.min_value(t_unit);
    regret_sum += rec.regret;
    ++steps;
    rec.avg_regret = regret_sum / steps;
    rec.n_data = st.dataset_size;
    rec.n_removed = st.num_removed;
    rec.dt = dt;
    rec.budget = st.budget;
    result.records.push_back(std::move(rec));
    result.total_removals += st.num_removed;

    t_sim += dt;
  }

  result.final_dataset_size = algo.dataset().size();
  return result;
}

std::unique_ptr<DboAlgorithm> make_algorithm(const std::string& name,
                                             const AlgorithmOptions& opts,
                                             std::uint64_t seed) {
  if (name == "wdbo") {
    WdboConfig cfg;
    cfg.alpha = opts.alpha;
    cfg.acquisition.beta = opts.beta;
    cfg.mle = opts.mle;
    cfg.use_ard = opts.use_ard;
    return std::make_unique<WdboController>(cfg, seed);
  }
  BaselineConfig cfg;
  cfg.acquisition.beta = opts.beta;
  cfg.reset_period = opts.reset_period;
  cfg.mle = opts.mle;
  cfg.mle.fit_ard = opts.use_ard;
  if (name == "gpucb") {
    cfg.variant = BaselineVariant::kGpUcb;
  } else if (name == "rgpucb") {
    cfg.variant = BaselineVariant::kRGpUcb;
  } else if (name == "tvgpucb") {
    cfg.variant = BaselineVariant::kTvGpUcb;
  } else {
    throw std::invalid_argument("unknown algorithm: " + name);
  }
  return std::make_unique<BaselineController>(cfg, seed);
}

std::vector<std::string> algorithm_names() {
  return {"wdbo", "gpucb", "rgpucb", "tvgpucb"};
}

std::string trace_csv(const std::vector<RunRecord>& records) {
  std::string out = "sim_time";
  const int d = records.empty() ? 1 : static_cast<int>(records[0].x.size());
  for (int k = 1; k <= d; ++k) out += ",x_" + std::to_string(k);
  out += ",y,f_true,regret,avg_regret,n_data,n_removed,dt,budget\n";
  for (const auto& r : records) {
    out += format_double(r.sim_time);
    for (int k = 0; k < r.x.size(); ++k) out += "," + format_double(r.x[k]);
    out += "," + format_double(r.y);
    out += "," + format_double(r.f_true);
    out += "," + format_double(r.regret);
    out += "," + format_double(r.avg_regret);
    out += "," + std::to_string(r.n_data);
    out += "," + std::to_string(r.n_removed);
    out += "," + format_double(r.dt);
    out += "," + format_double(r.budget);
    out += "\n";
  }
  return out;
}

void write_trace_csv(const std::string& path,
                     const std::vector<RunRecord>& records) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot open " + path);
  file << trace_csv(records);
}

std::string summary_json(const RunResult& result, const std::string& bench,
                         const std::string& algo, double alpha,
                         const RunConfig& cfg) {
  nlohmann::ordered_json j;
  j["benchmark"] = bench;
  j["algorithm"] = algo;
  j["alpha"] = alpha;
  j["seed"] = cfg.seed;
  j["duration"] = cfg.duration;
  j["cost_model"] =
      cfg.cost.mode == CostModel::Mode::kWall ? "wall" : "synthetic";
  j["c0"] = cfg.cost.c0;
  j["c1"] = cfg.cost.c1;
  j["c3"] = cfg.cost.c3;
  j["n_init"] = cfg.n_init;
  j["noise_fraction"] = cfg.noise_fraction;
  j["steps"] = result.records.size();
  j["completed"] = result.completed;
  if (!result.completed) j["error"] = result.error;
  j["final_avg_regret"] = result.final_avg_regret();
  j["final_dataset_size"] = result.final_dataset_size;
  j["total_removals"] = result.total_removals;
  return j.dump(2) + "\n";
}

}  // namespace wdbo::bench
