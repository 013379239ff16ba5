#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include <cstdint>

#include "wdbo/kernel.hpp"

namespace wdbo {

/// How the covariance between two dataset entries is evaluated.
///  - kProduct:      lambda k_S(||dx||) k_T(|dt|)          (the W-DBO model)
///  - kSpatialOnly:  lambda k_S(||dx||)                    (vanilla GP-UCB)
///  - kIndexDiscount: lambda k_S(||dx||) (1-eps)^{|i-j|/2} (time-varying UCB)
enum class TemporalMode { kProduct, kSpatialOnly, kIndexDiscount };

struct CovarianceModel {
  Hyperparameters hyper;
  TemporalMode mode = TemporalMode::kProduct;
  double tv_epsilon = 0.0;

  /// Covariance of two observations; `ia`, `ib` are their query sequence
  /// numbers (used only by the index-discount mode).
  double operator()(const Observation& a, int ia, const Observation& b,
                    int ib) const;

  /// Covariance between a fresh query point and a stored observation. For
  /// the index-discount mode the query takes the next sequence number.
  double query_cov(const SpaceTimePoint& q, int query_seq,
                   const Observation& b, int ib) const;
};

/// Immutable solver state for a conditioned GP: Delta = k(X,X) + sigma^2 I,
/// its Cholesky factorization and the cached solve Delta^{-1} y. sigma^2 is
/// floored at 1e-6 lambda so Delta stays SPD.
class GramState {
 public:
  GramState() = default;
  GramState(const Dataset& data, const CovarianceModel& model);

  int size() const { return n_; }
  const CovarianceModel& model() const { return model_; }
  const Eigen::MatrixXd& gram() const { return gram_; }
  const Eigen::MatrixXd& delta() const { return delta_; }
  const Eigen::VectorXd& alpha() const { return alpha_; }
  double sigma2_eff() const { return sigma2_eff_; }
  double log_det_delta() const { return log_det_; }

  Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const;
  Eigen::MatrixXd solve(const Eigen::MatrixXd& rhs) const;

 private:
  int n_ = 0;
  CovarianceModel model_;
  double sigma2_eff_ = 0.0;
  double log_det_ = 0.0;
  Eigen::MatrixXd gram_;
  Eigen::MatrixXd delta_;
  Eigen::LLT<Eigen::MatrixXd> llt_;
  Eigen::VectorXd alpha_;
};

struct PosteriorValue {
  double mean = 0.0;
  double var = 0.0;
};

/// Leave-one-out block decomposition of Delta_D^{-1} with the removed
/// observation ordered first:
///   Delta_D^{-1} = [[E, G], [H, F]],  H = G^T.
struct BlockInverseParts {
  double e = 0.0;
  Eigen::MatrixXd f;  // (n-1) x (n-1)
  Eigen::VectorXd g;  // row block, stored as a vector
  Eigen::VectorXd h;  // column block
};

/// Coefficients of the posterior mean / variance differences caused by
/// removing one observation:
///   mu_D - mu_Dtilde           = a k(q, o_1) + b . k(q, Dtilde)
///   sigma^2_Dtilde - sigma^2_D = E k(q,o_1)^2 + k(q,o_1) c . k(q, Dtilde)
///                                + k(q, Dtilde)^T M k(q, Dtilde)
struct DiffCoefficients {
  double a = 0.0;
  double e = 0.0;
  Eigen::VectorXd b;
  Eigen::VectorXd c;
  Eigen::MatrixXd m;
};

/// Posterior mean/variance at query q. Variance is clamped at 0 from below
/// (it is nonnegative analytically) and never exceeds lambda. The empty
/// dataset returns the prior (0, lambda).
PosteriorValue posterior(const GramState& state, const Dataset& data,
                         const SpaceTimePoint& q);

/// Block inverse for removing `remove_index`, built from Delta_Dtilde solves
/// and a rank-one update (never by slicing a dense inverse of Delta_D, so
/// the dense-inverse test oracle stays an independent route).
BlockInverseParts block_inverse(const GramState& state, const Dataset& data,
                                int remove_index);

DiffCoefficients diff_coefficients(const GramState& state, const Dataset& data,
                                   int remove_index);

/// Gaussian log marginal likelihood
///   -1/2 y^T Delta^{-1} y - 1/2 log det Delta - n/2 log 2 pi.
double log_marginal_likelihood(const Dataset& data, const CovarianceModel& model);
double log_marginal_likelihood(const Dataset& data, const Hyperparameters& h);

struct MleOptions {
  int num_starts = 4;  // warm start plus log-uniform random draws
  int max_iters = 150;
  std::uint64_t seed = 0x2545F4914F6CDD1DULL;
  bool fit_ard = false;     // one spatial lengthscale per coordinate
  int tv_epsilon_grid = 8;  // grid size for the index-discount epsilon

  // Gamma(a, b) log-prior on each lengthscale, added to the fit objective.
  // Off by default (pure marginal likelihood); the dynamic controllers turn
  // it on. Without it the temporal lengthscale saturates at its upper bound
  // whenever the objective's fast structure is below the sampling
  // resolution, which freezes the removal budget.
  bool lengthscale_prior = false;
  double prior_shape = 3.0;
  double prior_rate = 6.0;
};

/// Maximum-likelihood hyperparameters via multi-start Nelder-Mead ascent in
/// log space. Box bounds: lambda in [1e-3, 1e3] and sigma^2 in [1e-6, 1]
/// times the sample variance of y; lengthscales in [1e-2, 10] (normalized
/// coordinates). The warm start is always a candidate, so the returned
/// likelihood never falls below the likelihood at `prev`.
Hyperparameters fit_mle(const Dataset& data, const KernelFamily& family,
                        const Hyperparameters& prev, const MleOptions& opts = {});

/// Same search for an arbitrary covariance model. Index-discount models fit
/// epsilon by grid search over [1e-3, 0.5] jointly with the continuous fit.
CovarianceModel fit_mle_model(const Dataset& data, const CovarianceModel& prev,
                              const MleOptions& opts = {});

}  // namespace wdbo
