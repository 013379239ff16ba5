#include "wdbo/criterion.hpp"

#include <cmath>
#include <stdexcept>
#include <thread>

#include "wdbo/convolution.hpp"

namespace wdbo {

namespace {

// Numerator terms assembled from the shared full C(D, D) by partitioning out
// the removed index.
double removal_sq_from_shared(const Dataset& data, int i, const GramState& gp,
                              const Eigen::MatrixXd& conv_full) {
  const int n = data.size();
  const double lambda2 = gp.model().hyper.lambda * gp.model().hyper.lambda;
  const DiffCoefficients dc = diff_coefficients(gp, data, i);

  const double self_term = (dc.a * dc.a + dc.e) * conv_full(i, i);
  if (n == 1) return lambda2 * self_term;

  double cross = 0.0;
  double trace = 0.0;
  int r = 0;
  for (int j = 0; j < n; ++j) {
    if (j == i) continue;
    cross += (2.0 * dc.a * dc.b[r] + dc.c[r]) * conv_full(i, j);
    int s = 0;
    for (int k = 0; k < n; ++k) {
      if (k == i) continue;
      trace += (dc.b[r] * dc.b[s] + dc.m(r, s)) * conv_full(k, j);
      ++s;
    }
    ++r;
  }
  return lambda2 * (self_term + cross + trace);
}

}  // namespace

Eigen::MatrixXd conv_matrix(const Dataset& x_set, const Dataset& y_set,
                            double t0, const Hyperparameters& h) {
  const int rows = x_set.size();
  const int cols = y_set.size();
  Eigen::MatrixXd conv(rows, cols);
  for (int i = 0; i < rows; ++i) {
    const auto& oi = x_set[i];
    if (oi.point.t > t0) {
      throw std::invalid_argument("conv_matrix: observation time after t0");
    }
    for (int j = 0; j < cols; ++j) {
      const auto& oj = y_set[j];
      conv(i, j) = spatial_selfconv(oj.point.x - oi.point.x, h) *
                   temporal_selfconv_restricted(oi.point.t, oj.point.t, t0, h);
    }
  }
  return conv;
}

double w2_removal_sq(const Dataset& data, int remove_index, double t0,
                     const Hyperparameters& h, const GramState& gp) {
  if (data.size() < 1 || remove_index < 0 || remove_index >= data.size()) {
    throw std::invalid_argument("w2_removal_sq: index out of range");
  }
  const Eigen::MatrixXd conv_full = conv_matrix(data, data, t0, h);
  return removal_sq_from_shared(data, remove_index, gp, conv_full);
}

double w2_prior_sq(const Dataset& data, double t0, const Hyperparameters& h,
                   const GramState& gp) {
  if (data.size() < 1) {
    throw std::invalid_argument("w2_prior_sq: empty dataset");
  }
  const Eigen::MatrixXd conv_full = conv_matrix(data, data, t0, h);
  const double lambda2 = h.lambda * h.lambda;
  const double mean_term = gp.alpha().dot(conv_full * gp.alpha());
  // Tr(Delta^{-1} C) via one multi-column solve against the factorization
  const double trace_term = gp.solve(conv_full).trace();
  return lambda2 * (mean_term + trace_term);
}

double relevancy_ratio(const Dataset& data, int remove_index, double t0,
                       const Hyperparameters& h, const GramState& gp) {
  const double num = w2_removal_sq(data, remove_index, t0, h, gp);
  const double den = w2_prior_sq(data, t0, h, gp);
  return std::sqrt(num / den);
}

std::vector<double> relevancy_sweep(const Dataset& data, double t0,
                                    const Hyperparameters& h,
                                    const GramState& gp) {
  const int n = data.size();
  std::vector<double> ratios(n, 0.0);
  if (n == 0) return ratios;

  const Eigen::MatrixXd conv_full = conv_matrix(data, data, t0, h);
  const double lambda2 = h.lambda * h.lambda;
  const double prior =
      lambda2 * (gp.alpha().dot(conv_full * gp.alpha()) +
                 gp.solve(conv_full).trace());

  const auto worker = [&](int begin, int end) {
    for (int i = begin; i < end; ++i) {
      ratios[i] =
          std::sqrt(removal_sq_from_shared(data, i, gp, conv_full) / prior);
    }
  };

  const unsigned hw = std::thread::hardware_concurrency();
  const int num_threads =
      n >= 16 ? static_cast<int>(std::max(1u, std::min(hw, 8u))) : 1;
  if (num_threads <= 1) {
    worker(0, n);
    return ratios;
  }
  std::vector<std::thread> pool;
  const int chunk = (n + num_threads - 1) / num_threads;
  for (int t = 0; t < num_threads; ++t) {
    const int begin = t * chunk;
    const int end = std::min(n, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back(worker, begin, end);
  }
  for (auto& th : pool) th.join();
  return ratios;
}

}  // namespace wdbo
