#include "wdbo/gp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

#include "wdbo/optim.hpp"

namespace wdbo {

namespace {

constexpr double kLog2Pi = 1.837877066409345483560659472811235279;
constexpr double kSigmaFloorFactor = 1e-6;

double sample_variance(const Eigen::VectorXd& y) {
  if (y.size() < 2) return 1.0;
  const double mean = y.mean();
  return (y.array() - mean).square().sum() / (y.size() - 1);
}

Eigen::VectorXd kernel_vector(const CovarianceModel& model, const Dataset& data,
                              const SpaceTimePoint& q) {
  const int n = data.size();
  Eigen::VectorXd k(n);
  for (int j = 0; j < n; ++j) k[j] = model.query_cov(q, n, data[j], j);
  return k;
}

}  // namespace

double CovarianceModel::operator()(const Observation& a, int ia,
                                   const Observation& b, int ib) const {
  // expression-template norm: no temporary vector in the Gram hot loop
  const double ks =
      hyper.has_ard()
          ? std::exp(-0.5 * ((a.point.x - b.point.x).array() /
                             hyper.ard_lengthscales.array())
                                .square()
                                .sum())
          : correlation(hyper.family.spatial, (a.point.x - b.point.x).norm(),
                        hyper.l_s);
  switch (mode) {
    case TemporalMode::kProduct:
      return hyper.lambda * ks *
             temporal_correlation(std::abs(a.point.t - b.point.t), hyper);
    case TemporalMode::kSpatialOnly:
      return hyper.lambda * ks;
    case TemporalMode::kIndexDiscount:
      return hyper.lambda * ks *
             std::pow(1.0 - tv_epsilon, 0.5 * std::abs(ia - ib));
  }
  return 0.0;
}

double CovarianceModel::query_cov(const SpaceTimePoint& q, int query_seq,
                                  const Observation& b, int ib) const {
  Observation qo;
  qo.point = q;
  return (*this)(qo, query_seq, b, ib);
}

GramState::GramState(const Dataset& data, const CovarianceModel& model)
    : n_(data.size()), model_(model) {
  model_.hyper.validate();
  sigma2_eff_ =
      std::max(model_.hyper.sigma2, kSigmaFloorFactor * model_.hyper.lambda);
  if (n_ == 0) return;

  gram_.resize(n_, n_);
  for (int i = 0; i < n_; ++i) {
    for (int j = 0; j <= i; ++j) {
      const double v = model_(data[i], i, data[j], j);
      gram_(i, j) = v;
      gram_(j, i) = v;
    }
  }
  delta_ = gram_;
  delta_.diagonal().array() += sigma2_eff_;
  llt_.compute(delta_);
  if (llt_.info() != Eigen::Success) {
    throw std::runtime_error("GramState: Delta is not positive definite");
  }
  log_det_ = 2.0 * llt_.matrixL().toDenseMatrix().diagonal().array().log().sum();
  alpha_ = llt_.solve(data.values());
}

Eigen::VectorXd GramState::solve(const Eigen::VectorXd& rhs) const {
  return llt_.solve(rhs);
}

Eigen::MatrixXd GramState::solve(const Eigen::MatrixXd& rhs) const {
  return llt_.solve(rhs);
}

PosteriorValue posterior(const GramState& state, const Dataset& data,
                         const SpaceTimePoint& q) {
  PosteriorValue out;
  const double lambda = state.model().hyper.lambda;
  if (state.size() == 0) {
    out.mean = 0.0;
    out.var = lambda;
    return out;
  }
  if (state.size() != data.size()) {
    throw std::invalid_argument("posterior: state/dataset size mismatch");
  }
  const Eigen::VectorXd k = kernel_vector(state.model(), data, q);
  out.mean = k.dot(state.alpha());
  const double var = lambda - k.dot(state.solve(k));
  out.var = std::clamp(var, 0.0, lambda);
  return out;
}

BlockInverseParts block_inverse(const GramState& state, const Dataset& data,
                                int remove_index) {
  (void)data;  // the kernel column lives in the cached Delta
  const int n = state.size();
  if (n < 1 || remove_index < 0 || remove_index >= n) {
    throw std::invalid_argument("block_inverse: index out of range");
  }
  const double s = state.model().hyper.lambda + state.sigma2_eff();

  BlockInverseParts out;
  if (n == 1) {
    out.e = 1.0 / s;
    out.f.resize(0, 0);
    out.g.resize(0);
    out.h.resize(0);
    return out;
  }

  // Delta restricted to the kept observations, and the covariance column of
  // the removed one against them.
  Eigen::MatrixXd delta_rest(n - 1, n - 1);
  Eigen::VectorXd k_rest(n - 1);
  int r = 0;
  for (int i = 0; i < n; ++i) {
    if (i == remove_index) continue;
    k_rest[r] = state.delta()(remove_index, i);  // off-diagonal: pure kernel
    int c = 0;
    for (int j = 0; j < n; ++j) {
      if (j == remove_index) continue;
      delta_rest(r, c) = state.delta()(i, j);
      ++c;
    }
    ++r;
  }

  Eigen::LLT<Eigen::MatrixXd> llt(delta_rest);
  if (llt.info() != Eigen::Success) {
    throw std::runtime_error("block_inverse: Delta_rest not SPD");
  }
  const Eigen::VectorXd w = llt.solve(k_rest);
  const double e = 1.0 / (s - k_rest.dot(w));
  const Eigen::MatrixXd rest_inv =
      llt.solve(Eigen::MatrixXd::Identity(n - 1, n - 1));

  out.e = e;
  out.g = -e * w;
  out.h = -e * w;
  out.f = rest_inv + e * (w * w.transpose());
  return out;
}

DiffCoefficients diff_coefficients(const GramState& state, const Dataset& data,
                                   int remove_index) {
  const int n = state.size();
  const BlockInverseParts blocks = block_inverse(state, data, remove_index);

  DiffCoefficients out;
  out.e = blocks.e;
  if (n == 1) {
    out.a = blocks.e * data[0].y;
    out.b.resize(0);
    out.c.resize(0);
    out.m.resize(0, 0);
    return out;
  }

  Eigen::VectorXd y_rest(n - 1);
  int r = 0;
  for (int i = 0; i < n; ++i) {
    if (i != remove_index) y_rest[r++] = data[i].y;
  }
  const double y1 = data[remove_index].y;

  // M = F - Delta_rest^{-1} is the rank-one update E w w^T; recover it from
  // the blocks as H H^T / E.
  out.m = blocks.h * blocks.h.transpose() / blocks.e;
  out.a = blocks.e * y1 + blocks.g.dot(y_rest);
  out.b = blocks.h * y1 + out.m * y_rest;
  out.c = blocks.g + blocks.h;
  return out;
}

double log_marginal_likelihood(const Dataset& data,
                               const CovarianceModel& model) {
  if (data.size() < 1) {
    throw std::invalid_argument("log_marginal_likelihood: empty dataset");
  }
  const GramState state(data, model);
  const Eigen::VectorXd y = data.values();
  return -0.5 * y.dot(state.alpha()) - 0.5 * state.log_det_delta() -
         0.5 * data.size() * kLog2Pi;
}

double log_marginal_likelihood(const Dataset& data, const Hyperparameters& h) {
  CovarianceModel model;
  model.hyper = h;
  model.mode = TemporalMode::kProduct;
  return log_marginal_likelihood(data, model);
}

namespace {

struct ParamSpace {
  // log-space bounds over (lengthscales..., noise-to-signal ratio g); the
  // output scale is profiled out analytically per evaluation
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;
  int num_spatial = 1;  // 1 isotropic, d for ARD
  bool has_temporal = true;

  int dim() const { return static_cast<int>(lower.size()); }
};

ParamSpace make_space(int spatial_dims, bool has_temporal) {
  ParamSpace sp;
  sp.num_spatial = spatial_dims;
  sp.has_temporal = has_temporal;
  const int d = spatial_dims + (has_temporal ? 1 : 0) + 1;
  sp.lower.resize(d);
  sp.upper.resize(d);
  int k = 0;
  for (int i = 0; i < spatial_dims; ++i, ++k) {
    sp.lower[k] = std::log(1e-2);
    sp.upper[k] = std::log(10.0);
  }
  if (has_temporal) {
    sp.lower[k] = std::log(1e-2);
    sp.upper[k] = std::log(10.0);
    ++k;
  }
  sp.lower[k] = std::log(1e-6);  // g = sigma^2 / lambda
  sp.upper[k] = std::log(1e3);
  return sp;
}

Eigen::VectorXd pack(const Hyperparameters& h, const ParamSpace& sp) {
  Eigen::VectorXd v(sp.dim());
  int k = 0;
  if (sp.num_spatial == 1) {
    v[k++] = std::log(h.l_s);
  } else {
    for (int i = 0; i < sp.num_spatial; ++i) {
      v[k++] = std::log(h.has_ard() ? h.ard_lengthscales[i] : h.l_s);
    }
  }
  if (sp.has_temporal) v[k++] = std::log(h.l_t);
  v[k] = std::log(std::max(h.sigma2, 1e-300) / h.lambda);
  return v;
}

// unpack with lambda = 1 and sigma2 = g; the caller rescales by the
// profiled output scale afterwards
Hyperparameters unpack_unit(const Eigen::VectorXd& v,
                            const Hyperparameters& proto,
                            const ParamSpace& sp) {
  Hyperparameters h = proto;
  int k = 0;
  if (sp.num_spatial == 1) {
    h.l_s = std::exp(v[k++]);
    h.ard_lengthscales.resize(0);
  } else {
    h.ard_lengthscales.resize(sp.num_spatial);
    for (int i = 0; i < sp.num_spatial; ++i) {
      h.ard_lengthscales[i] = std::exp(v[k++]);
    }
    h.l_s = h.ard_lengthscales.mean();
  }
  if (sp.has_temporal) h.l_t = std::exp(v[k++]);
  h.lambda = 1.0;
  h.sigma2 = std::exp(v[k]);
  return h;
}

CovarianceModel fit_continuous(const Dataset& data, const CovarianceModel& prev,
                               const MleOptions& opts) {
  const int d = data[0].point.dim();
  const int n = data.size();
  const bool ard = opts.fit_ard || prev.hyper.has_ard();
  const double var_y = std::max(sample_variance(data.values()), 1e-12);
  const double lambda_lo = 1e-3 * var_y;
  const double lambda_hi = 1e3 * var_y;
  const ParamSpace sp =
      make_space(ard ? d : 1, prev.mode == TemporalMode::kProduct);

  Hyperparameters proto = prev.hyper;
  if (ard && !proto.has_ard()) {
    proto.ard_lengthscales = Eigen::VectorXd::Constant(d, proto.l_s);
  }
  if (!ard) proto.ard_lengthscales.resize(0);

  const auto log_prior = [&](const Hyperparameters& hp) {
    if (!opts.lengthscale_prior) return 0.0;
    const double a = opts.prior_shape;
    const double b = opts.prior_rate;
    const auto gamma_log = [&](double l) { return (a - 1.0) * std::log(l) - b * l; };
    double lp = 0.0;
    if (hp.has_ard()) {
      for (int i = 0; i < hp.ard_lengthscales.size(); ++i) {
        lp += gamma_log(hp.ard_lengthscales[i]);
      }
    } else {
      lp += gamma_log(hp.l_s);
    }
    if (prev.mode == TemporalMode::kProduct) lp += gamma_log(hp.l_t);
    return lp;
  };

  const Eigen::VectorXd y = data.values();

  // Profile likelihood: with Delta = lambda (R + g I), the output scale has
  // the closed-form maximizer lambda_hat = y^T (R + g I)^{-1} y / n, which
  // collapses the search to (lengthscales, g) and lets the scale react to
  // fresh data instantly instead of waiting for the simplex to walk there.
  struct Profiled {
    double neg_objective = std::numeric_limits<double>::max();
    double lambda = 1.0;
  };
  const auto profiled = [&](const Eigen::VectorXd& v) {
    CovarianceModel m = prev;
    m.hyper = unpack_unit(v, proto, sp);
    Profiled out;
    double quad;
    double log_det;
    try {
      const GramState unit_state(data, m);
      quad = y.dot(unit_state.alpha());
      log_det = unit_state.log_det_delta();
    } catch (const std::exception&) {
      return out;
    }
    double lambda_hat = std::clamp(quad / n, lambda_lo, lambda_hi);
    const double lml = -0.5 * quad / lambda_hat -
                       0.5 * (n * std::log(lambda_hat) + log_det) -
                       0.5 * n * kLog2Pi;
    Hyperparameters scaled = m.hyper;
    scaled.lambda = lambda_hat;
    scaled.sigma2 = m.hyper.sigma2 * lambda_hat;  // sigma2 = g * lambda
    const double objective = lml + log_prior(scaled);
    if (std::isfinite(objective)) {
      out.neg_objective = -objective;
      out.lambda = lambda_hat;
    }
    return out;
  };

  const auto neg_lml = [&](const Eigen::VectorXd& v) {
    return profiled(v).neg_objective;
  };

  std::mt19937_64 rng(opts.seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  Eigen::VectorXd warm = pack(proto, sp);
  for (int i = 0; i < warm.size(); ++i) {
    warm[i] = std::clamp(warm[i], sp.lower[i], sp.upper[i]);
  }

  Eigen::VectorXd best_x = warm;
  double best_f = neg_lml(warm);

  optim::NelderMeadOptions nm;
  nm.max_iters = opts.max_iters;
  nm.initial_step = 0.15;
  for (int s = 0; s < opts.num_starts; ++s) {
    Eigen::VectorXd start(sp.dim());
    if (s == 0) {
      start = warm;
    } else {
      for (int i = 0; i < sp.dim(); ++i) {
        start[i] = sp.lower[i] + unif(rng) * (sp.upper[i] - sp.lower[i]);
      }
    }
    const auto res = optim::nelder_mead(neg_lml, start, sp.lower, sp.upper, nm);
    if (res.value < best_f) {
      best_f = res.value;
      best_x = res.x;
    }
  }

  CovarianceModel out = prev;
  const Profiled best = profiled(best_x);
  out.hyper = unpack_unit(best_x, proto, sp);
  out.hyper.lambda = best.lambda;
  out.hyper.sigma2 = std::clamp(out.hyper.sigma2 * best.lambda, 1e-6 * var_y,
                                1.0 * var_y);
  return out;
}

}  // namespace

Hyperparameters fit_mle(const Dataset& data, const KernelFamily& family,
                        const Hyperparameters& prev, const MleOptions& opts) {
  if (data.size() < 2) {
    throw std::invalid_argument("fit_mle: need at least two observations");
  }
  CovarianceModel model;
  model.hyper = prev;
  model.hyper.family = family;
  model.mode = TemporalMode::kProduct;
  return fit_mle_model(data, model, opts).hyper;
}

CovarianceModel fit_mle_model(const Dataset& data, const CovarianceModel& prev,
                              const MleOptions& opts) {
  if (data.size() < 2) {
    throw std::invalid_argument("fit_mle_model: need at least two observations");
  }
  if (prev.mode != TemporalMode::kIndexDiscount ||
      opts.tv_epsilon_grid < 2) {
    return fit_continuous(data, prev, opts);  // epsilon kept as-is
  }

  // Index-discount: 1-d grid over epsilon, continuous fit for the rest.
  CovarianceModel best = prev;
  double best_lml = -std::numeric_limits<double>::infinity();
  MleOptions grid_opts = opts;
  grid_opts.num_starts = std::max(1, opts.num_starts / 2);
  const int grid = opts.tv_epsilon_grid;
  for (int g = 0; g < grid; ++g) {
    CovarianceModel candidate = prev;
    const double frac = static_cast<double>(g) / (grid - 1);
    candidate.tv_epsilon = 1e-3 * std::pow(0.5 / 1e-3, frac);
    candidate = fit_continuous(data, candidate, grid_opts);
    const double lml = log_marginal_likelihood(data, candidate);
    if (lml > best_lml) {
      best_lml = lml;
      best = candidate;
    }
  }
  return best;
}

}  // namespace wdbo
