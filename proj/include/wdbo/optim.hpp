#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <functional>

namespace wdbo::optim {

using ObjectiveFn = std::function<double(const Eigen::VectorXd&)>;

struct NelderMeadOptions {
  int max_iters = 200;
  double initial_step = 0.25;
  double f_tol = 1e-10;
  double x_tol = 1e-10;
};

struct MinimizeResult {
  Eigen::VectorXd x;
  double value = 0.0;
  int iterations = 0;
};

/// Derivative-free simplex minimizer with box clamping: every evaluated
/// point is projected into [lower, upper] component-wise.
MinimizeResult nelder_mead(const ObjectiveFn& f, const Eigen::VectorXd& start,
                           const Eigen::VectorXd& lower,
                           const Eigen::VectorXd& upper,
                           const NelderMeadOptions& opts = {});

/// k-th point (0-based) of the d-dimensional Halton sequence on [0,1)^d,
/// using the first d primes as bases.
Eigen::VectorXd halton_point(std::int64_t k, int d);

}  // namespace wdbo::optim
