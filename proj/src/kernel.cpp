#include "wdbo/kernel.hpp"

#include <cmath>
#include <stdexcept>

namespace wdbo {

Dataset Dataset::without(int index) const {
  Dataset out;
  out.obs_.reserve(obs_.size() > 0 ? obs_.size() - 1 : 0);
  for (int i = 0; i < size(); ++i) {
    if (i != index) out.obs_.push_back(obs_[i]);
  }
  return out;
}

Eigen::VectorXd Dataset::values() const {
  Eigen::VectorXd y(size());
  for (int i = 0; i < size(); ++i) y[i] = obs_[i].y;
  return y;
}

std::string to_string(CorrelationKind kind) {
  switch (kind) {
    case CorrelationKind::kSquaredExponential: return "se";
    case CorrelationKind::kMatern12: return "matern12";
    case CorrelationKind::kMatern32: return "matern32";
    case CorrelationKind::kMatern52: return "matern52";
  }
  return "unknown";
}

double matern_nu(CorrelationKind kind) {
  return matern_p(kind) + 0.5;
}

int matern_p(CorrelationKind kind) {
  switch (kind) {
    case CorrelationKind::kMatern12: return 0;
    case CorrelationKind::kMatern32: return 1;
    case CorrelationKind::kMatern52: return 2;
    default:
      throw std::invalid_argument("matern_p: not a Matern kernel");
  }
}

void Hyperparameters::validate() const {
  if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be > 0");
  if (!(l_s > 0.0)) throw std::invalid_argument("l_s must be > 0");
  if (!(l_t > 0.0)) throw std::invalid_argument("l_t must be > 0");
  if (!(sigma2 >= 0.0)) throw std::invalid_argument("sigma2 must be >= 0");
  if (has_ard()) {
    if (family.spatial != CorrelationKind::kSquaredExponential) {
      throw std::invalid_argument(
          "ARD lengthscales require a spatial SE kernel");
    }
    for (int i = 0; i < ard_lengthscales.size(); ++i) {
      if (!(ard_lengthscales[i] > 0.0)) {
        throw std::invalid_argument("ARD lengthscales must be > 0");
      }
    }
  }
}

double correlation(CorrelationKind kind, double r, double l) {
  if (r < 0.0) throw std::invalid_argument("correlation: negative distance");
  const double s = r / l;
  switch (kind) {
    case CorrelationKind::kSquaredExponential:
      return std::exp(-0.5 * s * s);
    case CorrelationKind::kMatern12:
      return std::exp(-s);
    case CorrelationKind::kMatern32: {
      const double z = std::sqrt(3.0) * s;
      return (1.0 + z) * std::exp(-z);
    }
    case CorrelationKind::kMatern52: {
      const double z = std::sqrt(5.0) * s;
      return (1.0 + z + z * z / 3.0) * std::exp(-z);
    }
  }
  throw std::invalid_argument("correlation: unknown kind");
}

double spatial_correlation(double r, const Hyperparameters& h) {
  return correlation(h.family.spatial, r, h.l_s);
}

double temporal_correlation(double tau, const Hyperparameters& h) {
  return correlation(h.family.temporal, tau, h.l_t);
}

double spatial_correlation_diff(const Eigen::VectorXd& dx,
                                const Hyperparameters& h) {
  if (h.has_ard()) {
    if (dx.size() != h.ard_lengthscales.size()) {
      throw std::invalid_argument("spatial_correlation_diff: ARD dim mismatch");
    }
    const double quad =
        (dx.array() / h.ard_lengthscales.array()).square().sum();
    return std::exp(-0.5 * quad);
  }
  return correlation(h.family.spatial, dx.norm(), h.l_s);
}

double covariance(const SpaceTimePoint& p, const SpaceTimePoint& q,
                  const Hyperparameters& h) {
  if (p.x.size() != q.x.size()) {
    throw std::invalid_argument("covariance: dimension mismatch");
  }
  const double ks = spatial_correlation_diff(p.x - q.x, h);
  const double kt = temporal_correlation(std::abs(p.t - q.t), h);
  return h.lambda * ks * kt;
}

}  // namespace wdbo
