#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "wdbo/benchmarks.hpp"
#include "wdbo/controller.hpp"

namespace wdbo::bench {

/// Response-time model separating consecutive queries. Wall mode measures
/// the real fit + acquisition time; synthetic mode charges
/// c0 + c1 n + c3 n^3 simulated seconds (n = dataset size after the step),
/// which keeps runs hardware-independent and bit-reproducible.
struct CostModel {
  enum class Mode { kWall, kSynthetic };
  Mode mode = Mode::kSynthetic;
  double c0 = 0.05;
  double c1 = 0.0;
  double c3 = 2e-6;

  double cost(int n) const {
    const double nn = static_cast<double>(n);
    return c0 + c1 * nn + c3 * nn * nn * nn;
  }
};

/// One per-iteration trace row.
struct RunRecord {
  double sim_time = 0.0;      // seconds; strictly increasing
  Eigen::VectorXd x;          // normalized query
  double y = 0.0;             // noisy observed value handed to the algorithm
  double f_true = 0.0;        // noiseless raw objective (minimization sign)
  double regret = 0.0;
  double avg_regret = 0.0;
  int n_data = 0;
  int n_removed = 0;
  double dt = 0.0;            // response time, seconds
  double budget = 1.0;
};

/// Per-time-slice minimum of the objective over the spatial domain: grid
/// scan (per-axis resolution capped so the cell count stays <= 2^20)
/// followed by local refinement from the best cells, cached on a lattice of
/// time slices with linear interpolation in between.
class RegretOracle {
 public:
  RegretOracle(const BenchmarkProblem& problem, int grid_resolution = 64,
               int num_slices = 64);

  /// Best raw objective value over the spatial domain at normalized time t.
  double min_value(double t_normalized) const;

  /// Minimum over space and time, refined jointly; used for spot checks.
  double global_min() const { return global_min_; }

  /// Shared, cached oracle per (problem name, resolution, slices).
  static const RegretOracle& shared(const BenchmarkProblem& problem,
                                    int grid_resolution = 64,
                                    int num_slices = 64);

 private:
  const BenchmarkProblem& problem_;
  std::vector<double> lattice_;
  double global_min_ = 0.0;
};

struct RunConfig {
  double duration = 600.0;      // optimizer running time, simulated seconds
  std::uint64_t seed = 1;
  CostModel cost;
  int n_init = 15;
  double noise_fraction = 0.05;  // noise variance as a share of signal variance
  int oracle_resolution = 64;
  int oracle_slices = 64;
};

struct RunResult {
  std::vector<RunRecord> records;
  bool completed = true;
  std::string error;
  int final_dataset_size = 0;
  int total_removals = 0;

  double final_avg_regret() const {
    return records.empty() ? 0.0 : records.back().avg_regret;
  }
};

/// Drive one optimization task: sample the initial design uniformly over
/// S' x the leading 1/40 of the normalized time axis, then loop
/// acquire-observe-fit(-prune) steps separated by the response time until
/// the running budget `duration` is exhausted. Observation noise has
/// variance `noise_fraction` times the signal variance (estimated once from
/// 10^4 quasi-random samples). An algorithm failure flushes the partial
/// trace into the result.
RunResult run_experiment(DboAlgorithm& algo, const BenchmarkProblem& problem,
                         const RunConfig& cfg);

/// Algorithm registry: wdbo, gpucb, rgpucb, tvgpucb.
struct AlgorithmOptions {
  double alpha = 0.25;
  double beta = 4.0;
  int reset_period = 30;
  bool use_ard = false;
  MleOptions mle = dynamic_mle_defaults();
};

std::unique_ptr<DboAlgorithm> make_algorithm(const std::string& name,
                                             const AlgorithmOptions& opts,
                                             std::uint64_t seed);

std::vector<std::string> algorithm_names();

/// Trace CSV with the fixed header
///   sim_time,x_1..x_d,y,f_true,regret,avg_regret,n_data,n_removed,dt,budget
/// (x_1..x_d expands to one column per spatial coordinate). Deterministic
/// formatting: byte-identical across reruns of the same seeded run.
std::string trace_csv(const std::vector<RunRecord>& records);
void write_trace_csv(const std::string& path,
                     const std::vector<RunRecord>& records);

/// Per-run summary JSON (final average regret, removals, config echo, seed).
std::string summary_json(const RunResult& result, const std::string& bench,
                         const std::string& algo, double alpha,
                         const RunConfig& cfg);

}  // namespace wdbo::bench
