#pragma once

#include <Eigen/Core>

#include <vector>

#include "wdbo/gp.hpp"
#include "wdbo/kernel.hpp"

namespace wdbo {

/// Convolution matrix of the relevancy criterion:
///   C[i][j] = (k_S * k_S)(x_j - x_i) * (k_T * k_T)|[t0 - t_i, +inf)(t_j - t_i).
/// Rows range over X, columns over Y; all entries are positive. The row
/// observation supplies the restriction interval, but the restricted
/// temporal convolution equals the future-window integral over
/// [t0, +inf), which is symmetric in (t_i, t_j) — so C(D, D) is symmetric.
Eigen::MatrixXd conv_matrix(const Dataset& x_set, const Dataset& y_set,
                            double t0, const Hyperparameters& h);

/// Upper bound on the integrated squared 2-Wasserstein distance, over the
/// future domain S x [t0, +inf), between the GP conditioned on `data` and
/// the GP conditioned on `data` minus observation `remove_index`:
///   lambda^2 (a^2 + E) C(o_i, o_i) + lambda^2 (2 a b + c) . C(o_i, Dtilde)
///   + lambda^2 Tr((b b^T + M) C(Dtilde, Dtilde)).
double w2_removal_sq(const Dataset& data, int remove_index, double t0,
                     const Hyperparameters& h, const GramState& gp);

/// Upper bound on the integrated squared 2-Wasserstein distance between the
/// conditioned GP and the prior:
///   lambda^2 (y^T Delta^{-T} C(D,D) Delta^{-1} y + Tr(Delta^{-1} C(D,D))).
double w2_prior_sq(const Dataset& data, double t0, const Hyperparameters& h,
                   const GramState& gp);

/// Relevancy ratio: sqrt(w2_removal_sq / w2_prior_sq). Equals 1 exactly for
/// a single observation; the denominator is strictly positive for n >= 1.
double relevancy_ratio(const Dataset& data, int remove_index, double t0,
                       const Hyperparameters& h, const GramState& gp);

/// All n relevancy ratios over a frozen dataset snapshot. One C(D, D) and
/// one GramState are shared; per-index work partitions out the removed
/// row/column. Indices fan out over threads (read-only sharing).
std::vector<double> relevancy_sweep(const Dataset& data, double t0,
                                    const Hyperparameters& h,
                                    const GramState& gp);

}  // namespace wdbo
