#include "wdbo/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "wdbo/convolution.hpp"
#include "wdbo/harness.hpp"
#include "wdbo/special_functions.hpp"

namespace wdbo::cli {

namespace {

namespace fs = std::filesystem;

struct CommonOptions {
  std::vector<std::string> benches;
  std::string algo = "wdbo";
  double alpha = 0.25;
  double beta = 4.0;
  std::uint64_t seed = 1;
  int num_seeds = 0;  // when > 0, run seeds 1..num_seeds
  double duration = 600.0;
  std::string cost_model = "synthetic";
  double c0 = 0.05;
  double c1 = 0.0;
  double c3 = 2e-6;
  std::string out_dir = ".";
  int jobs = 1;
  int grid = 64;
  int reset_period = 30;
  bool use_ard = false;
};

void add_common_flags(CLI::App* cmd, CommonOptions& opt) {
  cmd->add_option("--bench", opt.benches, "benchmark name(s)");
  cmd->add_option("--algo", opt.algo, "algorithm: wdbo|gpucb|rgpucb|tvgpucb");
  cmd->add_option("--alpha", opt.alpha, "W-DBO removal-budget hyperparameter");
  cmd->add_option("--beta", opt.beta, "GP-UCB beta (phi = mu + sqrt(beta) sd)");
  cmd->add_option("--seed", opt.seed, "single seed");
  cmd->add_option("--seeds", opt.num_seeds, "run seeds 1..N");
  cmd->add_option("--duration", opt.duration, "simulated seconds");
  cmd->add_option("--cost-model", opt.cost_model, "wall|synthetic");
  cmd->add_option("--c0", opt.c0, "synthetic cost: constant term");
  cmd->add_option("--c1", opt.c1, "synthetic cost: linear term");
  cmd->add_option("--c3", opt.c3, "synthetic cost: cubic term");
  cmd->add_option("--out", opt.out_dir, "output directory");
  cmd->add_option("--jobs", opt.jobs, "seed-level parallelism");
  cmd->add_option("--grid", opt.grid, "regret-oracle grid resolution");
  cmd->add_option("--reset-period", opt.reset_period, "R-GP-UCB reset period");
  cmd->add_flag("--ard", opt.use_ard, "ARD spatial SE kernel");
}

bench::RunConfig make_run_config(const CommonOptions& opt, std::uint64_t seed) {
  bench::RunConfig cfg;
  cfg.duration = opt.duration;
  cfg.seed = seed;
  cfg.cost.mode = opt.cost_model == "wall" ? bench::CostModel::Mode::kWall
                                           : bench::CostModel::Mode::kSynthetic;
  cfg.cost.c0 = opt.c0;
  cfg.cost.c1 = opt.c1;
  cfg.cost.c3 = opt.c3;
  cfg.oracle_resolution = opt.grid;
  return cfg;
}

bench::AlgorithmOptions make_algo_options(const CommonOptions& opt,
                                          double alpha) {
  bench::AlgorithmOptions a;
  a.alpha = alpha;
  a.beta = opt.beta;
  a.reset_period = opt.reset_period;
  a.use_ard = opt.use_ard;
  return a;
}

std::vector<std::uint64_t> seed_list(const CommonOptions& opt) {
  std::vector<std::uint64_t> seeds;
  if (opt.num_seeds > 0) {
    for (int s = 1; s <= opt.num_seeds; ++s) seeds.push_back(s);
  } else {
    seeds.push_back(opt.seed);
  }
  return seeds;
}

struct SeedOutcome {
  bench::RunResult result;
  std::uint64_t seed = 0;
};

/// Run one (bench, algo, alpha) over all seeds, optionally in parallel.
std::vector<SeedOutcome> run_seeds(const bench::BenchmarkProblem& problem,
                                   const CommonOptions& opt, double alpha,
                                   const std::vector<std::uint64_t>& seeds) {
  std::vector<SeedOutcome> outcomes(seeds.size());
  const auto work = [&](std::size_t i) {
    const auto algo = bench::make_algorithm(
        opt.algo, make_algo_options(opt, alpha), seeds[i] ^ 0x517cc1b727220a95ULL);
    outcomes[i].seed = seeds[i];
    outcomes[i].result =
        bench::run_experiment(*algo, problem, make_run_config(opt, seeds[i]));
  };
  const int jobs = std::max(1, opt.jobs);
  if (jobs == 1 || seeds.size() == 1) {
    for (std::size_t i = 0; i < seeds.size(); ++i) work(i);
  } else {
    std::vector<std::thread> pool;
    std::size_t next = 0;
    for (std::size_t i = 0; i < seeds.size(); i += jobs) {
      pool.clear();
      for (int j = 0; j < jobs && next < seeds.size(); ++j, ++next) {
        pool.emplace_back(work, next);
      }
      for (auto& t : pool) t.join();
    }
  }
  return outcomes;
}

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / v.size();
}

double stderr_of(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean_of(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / (v.size() - 1) / v.size());
}

int cmd_run(const CommonOptions& opt) {
  if (opt.benches.empty()) {
    std::cerr << "run: --bench is required\n";
    return 2;
  }
  fs::create_directories(opt.out_dir);
  for (const auto& bench_name : opt.benches) {
    const auto& problem = bench::benchmark_by_name(bench_name);
    const auto seeds = seed_list(opt);
    const auto outcomes = run_seeds(problem, opt, opt.alpha, seeds);

    std::vector<double> regrets;
    bool all_completed = true;
    for (const auto& oc : outcomes) {
      const std::string stem = opt.out_dir + "/" + bench_name + "_" + opt.algo +
                               "_seed" + std::to_string(oc.seed);
      bench::write_trace_csv(stem + ".csv", oc.result.records);
      std::ofstream json_file(stem + ".json", std::ios::binary);
      json_file << bench::summary_json(oc.result, bench_name, opt.algo,
                                       opt.alpha, make_run_config(opt, oc.seed));
      regrets.push_back(oc.result.final_avg_regret());
      all_completed = all_completed && oc.result.completed;
    }
    if (outcomes.size() > 1) {
      nlohmann::ordered_json agg;
      agg["benchmark"] = bench_name;
      agg["algorithm"] = opt.algo;
      agg["alpha"] = opt.alpha;
      agg["num_seeds"] = outcomes.size();
      agg["mean_avg_regret"] = mean_of(regrets);
      agg["stderr_avg_regret"] = stderr_of(regrets);
      std::ofstream agg_file(
          opt.out_dir + "/" + bench_name + "_" + opt.algo + "_summary.json",
          std::ios::binary);
      agg_file << agg.dump(2) << "\n";
    }
    if (!all_completed) {
      std::cerr << "run: " << bench_name << " finished with failures\n";
      return 1;
    }
  }
  return 0;
}

int cmd_sensitivity(const CommonOptions& opt,
                    const std::vector<double>& alphas) {
  if (alphas.size() < 2) {
    std::cerr << "sensitivity: need at least two --alphas\n";
    return 2;
  }
  if (opt.benches.empty()) {
    std::cerr << "sensitivity: --bench is required\n";
    return 2;
  }
  fs::create_directories(opt.out_dir);

  std::string csv =
      "benchmark,alpha,mean_avg_regret,stderr_avg_regret,normalized\n";
  nlohmann::ordered_json best_json;
  std::vector<std::vector<double>> normalized_by_alpha(alphas.size());

  for (const auto& bench_name : opt.benches) {
    const auto& problem = bench::benchmark_by_name(bench_name);
    const auto seeds = seed_list(opt);
    std::vector<double> means;
    std::vector<double> errs;
    for (const double alpha : alphas) {
      const auto outcomes = run_seeds(problem, opt, alpha, seeds);
      std::vector<double> regrets;
      for (const auto& oc : outcomes) {
        regrets.push_back(oc.result.final_avg_regret());
      }
      means.push_back(mean_of(regrets));
      errs.push_back(stderr_of(regrets));
    }
    const double lo = *std::min_element(means.begin(), means.end());
    const double hi = *std::max_element(means.begin(), means.end());
    const double range = hi - lo;
    for (std::size_t a = 0; a < alphas.size(); ++a) {
      // degenerate range: everything normalizes to 0
      const double normalized = range > 0.0 ? (means[a] - lo) / range : 0.0;
      normalized_by_alpha[a].push_back(normalized);
      char line[256];
      std::snprintf(line, sizeof(line), "%s,%.17g,%.17g,%.17g,%.17g\n",
                    bench_name.c_str(), alphas[a], means[a], errs[a],
                    normalized);
      csv += line;
    }
  }

  std::size_t best = 0;
  std::vector<double> mean_normalized(alphas.size());
  for (std::size_t a = 0; a < alphas.size(); ++a) {
    mean_normalized[a] = mean_of(normalized_by_alpha[a]);
    if (mean_normalized[a] < mean_normalized[best]) best = a;
  }
  best_json["alphas"] = alphas;
  best_json["mean_normalized_regret"] = mean_normalized;
  best_json["best_alpha"] = alphas[best];

  std::ofstream csv_file(opt.out_dir + "/sensitivity.csv", std::ios::binary);
  csv_file << csv;
  std::ofstream json_file(opt.out_dir + "/sensitivity_summary.json",
                          std::ios::binary);
  json_file << best_json.dump(2) << "\n";
  return 0;
}

// 1-d adaptive Simpson for the diag-conv oracle column
double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(m);
  const auto simpson = [](double fa_, double fm_, double fb_, double h) {
    return h / 6.0 * (fa_ + 4.0 * fm_ + fb_);
  };
  std::function<double(double, double, double, double, double, double, int)>
      rec = [&](double aa, double bb, double faa, double fmm, double fbb,
                double whole, int d) {
        const double mm = 0.5 * (aa + bb);
        const double lm = 0.5 * (aa + mm);
        const double rm = 0.5 * (mm + bb);
        const double flm = f(lm);
        const double frm = f(rm);
        const double left = simpson(faa, flm, fmm, mm - aa);
        const double right = simpson(fmm, frm, fbb, bb - mm);
        if (d <= 0 || std::abs(left + right - whole) < 15.0 * tol) {
          return left + right + (left + right - whole) / 15.0;
        }
        return rec(aa, mm, faa, flm, fmm, left, d - 1) +
               rec(mm, bb, fmm, frm, fbb, right, d - 1);
      };
  return rec(a, b, fa, fm, fb, simpson(fa, fm, fb, b - a), depth);
}

int cmd_diag_conv(const CommonOptions& opt, const std::string& family,
                  std::vector<double> xi, std::vector<double> xj,
                  std::int64_t samples, int grid_points) {
  Hyperparameters h;
  if (family == "se") {
    h.family.spatial = CorrelationKind::kSquaredExponential;
  } else if (family == "matern12") {
    h.family.spatial = CorrelationKind::kMatern12;
  } else if (family == "matern32") {
    h.family.spatial = CorrelationKind::kMatern32;
  } else if (family == "matern52") {
    h.family.spatial = CorrelationKind::kMatern52;
  } else {
    std::cerr << "diag-conv: unsupported family " << family << "\n";
    return 2;
  }
  if (xi.empty()) xi = {0.25};
  if (xj.empty()) xj = xi;
  if (xi.size() != xj.size()) {
    std::cerr << "diag-conv: xi and xj dimensions differ\n";
    return 2;
  }
  const int d = static_cast<int>(xi.size());
  const Eigen::VectorXd vxi = Eigen::Map<Eigen::VectorXd>(xi.data(), d);
  const Eigen::VectorXd vxj = Eigen::Map<Eigen::VectorXd>(xj.data(), d);
  const double crit = critical_lengthscale(vxi, vxj, d);

  fs::create_directories(opt.out_dir);
  std::string csv =
      "l_s,a_estimate,a_stderr,closed_form,oracle,rel_error,critical_l_s\n";
  // anchor the log grid to the point separation: lengthscales far below the
  // distance drive the convolution below double-precision resolution
  const double grid_lo = std::max(0.05, (vxj - vxi).norm() / 5.0);
  const double grid_hi = 30.0;
  for (int g = 0; g < grid_points; ++g) {
    const double frac = static_cast<double>(g) / (grid_points - 1);
    h.l_s = grid_lo * std::pow(grid_hi / grid_lo, frac);
    const auto a_est = approx_error_A(vxi, vxj, h, samples, opt.seed);
    const double closed = spatial_selfconv(vxj - vxi, h);

    double oracle = 0.0;
    if (d == 1) {
      const double delta = std::abs(vxj[0] - vxi[0]);
      const auto integrand = [&](double u) {
        return spatial_correlation(std::abs(u), h) *
               spatial_correlation(std::abs(delta - u), h);
      };
      const double reach = 40.0 * h.l_s + delta;
      oracle = adaptive_simpson(integrand, -reach, 0.0, 1e-12, 30) +
               adaptive_simpson(integrand, 0.0, delta, 1e-12, 30) +
               adaptive_simpson(integrand, delta, reach, 1e-12, 30);
    } else {
      // d > 1: importance-sampled MC against a Gaussian proposal
      std::mt19937_64 rng(opt.seed);
      std::normal_distribution<double> gauss(0.0, 1.0);
      const Eigen::VectorXd mid = 0.5 * (vxi + vxj);
      const double scale = h.l_s;
      double sum = 0.0;
      for (std::int64_t s = 0; s < samples; ++s) {
        Eigen::VectorXd x(d);
        double log_q = 0.0;
        for (int k = 0; k < d; ++k) {
          const double z = gauss(rng);
          x[k] = mid[k] + scale * z;
          log_q += -0.5 * z * z -
                   std::log(scale * std::sqrt(2.0 * 3.14159265358979324));
        }
        sum += spatial_correlation_diff(x - vxi, h) *
               spatial_correlation_diff(x - vxj, h) * std::exp(-log_q);
      }
      oracle = sum / static_cast<double>(samples);
    }
    const double rel_err = std::abs(closed - oracle) / std::abs(oracle);
    char line[512];
    std::snprintf(line, sizeof(line),
                  "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", h.l_s,
                  a_est.value, a_est.stderr_, closed, oracle, rel_err, crit);
    csv += line;
  }
  std::ofstream file(opt.out_dir + "/diag_conv.csv", std::ios::binary);
  file << csv;
  return 0;
}

int cmd_list() {
  std::printf("benchmarks (name, total dims incl. time, raw bounds):\n");
  for (const auto& name : bench::benchmark_names()) {
    const auto& p = bench::benchmark_by_name(name);
    std::printf("  %-16s d+1=%d  [%g, %g]\n", name.c_str(), p.total_dim(),
                p.lower[0], p.upper[0]);
  }
  std::printf("algorithms:\n");
  for (const auto& name : bench::algorithm_names()) {
    std::printf("  %s\n", name.c_str());
  }
  return 0;
}

}  // namespace

int run_main(int argc, const char* const* argv) {
  CLI::App app{"Dynamic Bayesian optimization with Wasserstein-based dataset "
               "pruning"};
  app.set_config("--config", "", "flat key=value config file");
  app.require_subcommand(1);

  CommonOptions opt;
  std::vector<double> alphas;
  std::string family = "se";
  std::vector<double> xi;
  std::vector<double> xj;
  std::int64_t samples = 100000;
  int grid_points = 25;

  CLI::App* run_cmd = app.add_subcommand("run", "run one experiment");
  add_common_flags(run_cmd, opt);
  CLI::App* sens_cmd =
      app.add_subcommand("sensitivity", "alpha sensitivity sweep");
  add_common_flags(sens_cmd, opt);
  sens_cmd->add_option("--alphas", alphas, "alpha grid (>= 2 values)");
  CLI::App* diag_cmd =
      app.add_subcommand("diag-conv", "convolution / approximation diagnostics");
  add_common_flags(diag_cmd, opt);
  diag_cmd->add_option("--family", family, "spatial family");
  diag_cmd->add_option("--xi", xi, "first point (normalized)");
  diag_cmd->add_option("--xj", xj, "second point (normalized)");
  diag_cmd->add_option("--samples", samples, "MC samples per row");
  diag_cmd->add_option("--grid-points", grid_points, "lengthscale grid size");
  CLI::App* list_cmd = app.add_subcommand("list", "list registries");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (run_cmd->parsed()) return cmd_run(opt);
    if (sens_cmd->parsed()) return cmd_sensitivity(opt, alphas);
    if (diag_cmd->parsed()) {
      return cmd_diag_conv(opt, family, xi, xj, samples, grid_points);
    }
    if (list_cmd->parsed()) return cmd_list();
  } catch (const std::invalid_argument& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace wdbo::cli
