#pragma once

#include <Eigen/Core>

#include <string>
#include <vector>

namespace wdbo {

/// A point (x, t) in the normalized spatio-temporal domain [0,1]^d x T.
struct SpaceTimePoint {
  Eigen::VectorXd x;
  double t = 0.0;

  int dim() const { return static_cast<int>(x.size()); }
};

/// A queried point together with its noisy objective value.
struct Observation {
  SpaceTimePoint point;
  double y = 0.0;
};

/// Ordered set of observations; insertion order is preserved.
///
/// Duplicate (x, t) pairs are permitted: the observation-noise floor keeps
/// the Gram matrix invertible, so duplicates only soften the conditioning
/// rather than break it.
class Dataset {
 public:
  Dataset() = default;
  explicit Dataset(std::vector<Observation> obs) : obs_(std::move(obs)) {}

  int size() const { return static_cast<int>(obs_.size()); }
  bool empty() const { return obs_.empty(); }
  const Observation& operator[](int i) const { return obs_[i]; }
  const std::vector<Observation>& observations() const { return obs_; }

  void append(Observation o) { obs_.push_back(std::move(o)); }
  void remove(int index) { obs_.erase(obs_.begin() + index); }
  void clear() { obs_.clear(); }

  /// Copy without the observation at `index`.
  Dataset without(int index) const;

  /// Observed values as a vector.
  Eigen::VectorXd values() const;

 private:
  std::vector<Observation> obs_;
};

/// Supported correlation-function families. Matern orders are the
/// half-integers nu = 1/2, 3/2, 5/2 (temporal p = 0, 1, 2).
enum class CorrelationKind {
  kSquaredExponential,
  kMatern12,
  kMatern32,
  kMatern52,
};

std::string to_string(CorrelationKind kind);

/// Matern smoothness nu for the given kind; throws for SE.
double matern_nu(CorrelationKind kind);

/// Half-integer index p with nu = p + 1/2; throws for SE.
int matern_p(CorrelationKind kind);

struct KernelFamily {
  CorrelationKind spatial = CorrelationKind::kMatern52;
  CorrelationKind temporal = CorrelationKind::kMatern32;
};

/// Covariance hyperparameters: output scale, spatial/temporal lengthscales,
/// observation-noise variance and the kernel family. When `ard_lengthscales`
/// is non-empty it replaces `l_s` for the spatial SE kernel (one lengthscale
/// per coordinate).
struct Hyperparameters {
  double lambda = 1.0;
  double l_s = 1.0;
  double l_t = 1.0;
  double sigma2 = 1e-2;
  KernelFamily family;
  Eigen::VectorXd ard_lengthscales;

  bool has_ard() const { return ard_lengthscales.size() > 0; }

  /// Throws std::invalid_argument if any positivity or family constraint
  /// is violated (ARD requires a spatial SE kernel).
  void validate() const;
};

/// Unit-peak correlation k(r) for distance r >= 0 and lengthscale l.
/// Half-integer Matern kernels use the exponential-times-polynomial form.
double correlation(CorrelationKind kind, double r, double l);

/// k_S(r) with the spatial family and lengthscale of `h`.
double spatial_correlation(double r, const Hyperparameters& h);

/// k_T(tau) with the temporal family and lengthscale of `h`.
double temporal_correlation(double tau, const Hyperparameters& h);

/// Spatial correlation from the coordinate difference; dispatches to the
/// ARD quadratic form exp(-1/2 dx^T M^-2 dx) when ARD lengthscales are set.
double spatial_correlation_diff(const Eigen::VectorXd& dx,
                                const Hyperparameters& h);

/// Decomposable spatio-temporal covariance
///   k((x,t),(x',t')) = lambda * k_S(||x - x'||_2) * k_T(|t - t'|).
/// Throws on dimension mismatch.
double covariance(const SpaceTimePoint& p, const SpaceTimePoint& q,
                  const Hyperparameters& h);

}  // namespace wdbo
