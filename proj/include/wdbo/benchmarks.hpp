#pragma once

#include <Eigen/Core>

#include <functional>
#include <string>
#include <vector>

namespace wdbo::bench {

/// A dynamic synthetic objective over a (d+1)-dimensional raw domain whose
/// last coordinate is time. All registered functions are minimized; the
/// harness negates them to run the maximizing optimizers.
struct BenchmarkProblem {
  std::string name;
  int spatial_dim = 1;         // d; the full input has d+1 coordinates
  Eigen::VectorXd lower;       // raw bounds, size d+1
  Eigen::VectorXd upper;
  std::function<double(const Eigen::VectorXd&)> evaluator;  // raw coords

  int total_dim() const { return spatial_dim + 1; }

  /// Map normalized [0,1]^{d+1} coordinates to the raw domain.
  Eigen::VectorXd to_raw(const Eigen::VectorXd& unit) const;
  /// Inverse map; round-trips to 1e-12.
  Eigen::VectorXd to_unit(const Eigen::VectorXd& raw) const;

  /// Evaluate at raw coordinates, checking bounds (1e-9 slack).
  /// Throws std::domain_error when out of bounds.
  double evaluate(const Eigen::VectorXd& z) const;

  /// Evaluate at normalized spatial coordinates x and normalized time t.
  double evaluate_unit(const Eigen::VectorXd& x, double t) const;
};

/// Registered problem by name (rastrigin, schwefel, styblinski_tang,
/// eggholder, ackley, rosenbrock, shekel, hartmann3, hartmann6, powell).
/// Throws std::invalid_argument for unknown names.
const BenchmarkProblem& benchmark_by_name(const std::string& name);

std::vector<std::string> benchmark_names();

/// Convenience wrapper: evaluate a registered benchmark at raw coordinates.
double evaluate_benchmark(const std::string& name, const Eigen::VectorXd& z);

}  // namespace wdbo::bench
