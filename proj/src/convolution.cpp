#include "wdbo/convolution.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <stdexcept>

#include "wdbo/special_functions.hpp"

namespace wdbo {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

// (k_S * k_S)(r) for the Matern family: the closed form
//   pref * r^alpha K_alpha(c r),  alpha = 2 nu + d/2,  c = sqrt(2 nu) / l,
//   pref = 2^{d/2 - 2nu + 1} pi^{d/2} Gamma(nu + d/2)^2
//          / (Gamma(nu)^2 Gamma(2nu + d)) * c^{2nu - d/2}.
double matern_selfconv_radial(double r, int d, double nu, double l) {
  const double alpha = 2.0 * nu + 0.5 * d;
  const double c = std::sqrt(2.0 * nu) / l;
  const double pref = std::pow(2.0, 0.5 * d - 2.0 * nu + 1.0) *
                      std::pow(kPi, 0.5 * d) *
                      std::pow(std::tgamma(nu + 0.5 * d), 2) /
                      (std::pow(std::tgamma(nu), 2) * std::tgamma(2.0 * nu + d)) *
                      std::pow(c, 2.0 * nu - 0.5 * d);
  const double z = c * r;
  if (z < 1e-6) {
    // r^alpha K_alpha(c r) -> Gamma(alpha)/2 (2/c)^alpha, with the next
    // correction -z^2/(4(alpha-1)); alpha >= 3/2 for all supported pairs
    const double limit =
        0.5 * std::tgamma(alpha) * std::pow(2.0 / c, alpha);
    return pref * limit * (1.0 - z * z / (4.0 * (alpha - 1.0)));
  }
  return pref * std::pow(r, alpha) * special::bessel_k(alpha, z);
}

// Matern temporal convolution on [t0, +inf): Lemma-style double sum over
// exponential-times-polynomial terms. Polynomial derivatives are taken by
// exact coefficient arithmetic on the expanded product (degree <= 2p).
double matern_selfconv_restricted(double t_i, double t_j, double t0, int p,
                                  double l) {
  const double root = std::sqrt(2.0 * p + 1.0);
  const double u = t0 - t_i;       // lower integration limit after shifting
  const double delta = t_i - t_j;  // second factor argument offset
  const double scale = l / (2.0 * root);

  // factorials up to 2p + p = 3p <= 6
  static constexpr std::array<double, 8> kFact = {1, 1, 2, 6, 24, 120, 720, 5040};
  const double base_coeff =
      std::pow(kFact[p] / kFact[2 * p], 2);  // (p!/(2p)!)^2

  double total = 0.0;
  for (int k1 = 0; k1 <= p; ++k1) {
    for (int k2 = 0; k2 <= p; ++k2) {
      const double c_k =
          base_coeff * kFact[p + k1] * kFact[p + k2] /
          (kFact[k1] * kFact[k2] * kFact[p - k1] * kFact[p - k2]) *
          std::pow(2.0 * root / l, 2 * p - k1 - k2 - 1);

      // coefficients of P(t) = t^{p-k1} (t + delta)^{p-k2}
      const int m1 = p - k1;
      const int m2 = p - k2;
      std::array<double, 5> coeff{};  // degree <= 2p <= 4
      double binom = 1.0;
      for (int m = 0; m <= m2; ++m) {
        if (m > 0) binom *= static_cast<double>(m2 - m + 1) / m;
        coeff[m1 + m] += binom * std::pow(delta, m2 - m);
      }

      // P_{k1 k2} = sum_{k3} scale^{k3} P^{(k3)}(u)
      double poly_sum = 0.0;
      double scale_pow = 1.0;
      const int degree = m1 + m2;
      for (int k3 = 0; k3 <= degree; ++k3) {
        double deriv = 0.0;
        double u_pow = 1.0;
        for (int m = k3; m <= degree; ++m) {
          double fall = 1.0;  // m (m-1) ... (m-k3+1)
          for (int j = 0; j < k3; ++j) fall *= m - j;
          deriv += coeff[m] * fall * u_pow;
          u_pow *= u;
        }
        poly_sum += scale_pow * deriv;
        scale_pow *= scale;
      }
      total += c_k * poly_sum;
    }
  }
  return total * std::exp(-root * (2.0 * t0 - t_i - t_j) / l);
}

}  // namespace

double spatial_selfconv_radial(double r, int d, const Hyperparameters& h) {
  if (r < 0.0) {
    throw std::invalid_argument("spatial_selfconv_radial: negative distance");
  }
  if (d < 1) throw std::invalid_argument("spatial_selfconv_radial: d < 1");
  if (h.family.spatial == CorrelationKind::kSquaredExponential) {
    return std::pow(kPi, 0.5 * d) * std::pow(h.l_s, d) *
           std::exp(-r * r / (4.0 * h.l_s * h.l_s));
  }
  return matern_selfconv_radial(r, d, matern_nu(h.family.spatial), h.l_s);
}

double spatial_selfconv(const Eigen::VectorXd& dx, const Hyperparameters& h) {
  const int d = static_cast<int>(dx.size());
  if (h.has_ard()) {
    if (h.ard_lengthscales.size() != d) {
      throw std::invalid_argument("spatial_selfconv: ARD dim mismatch");
    }
    const double quad =
        (dx.array() / h.ard_lengthscales.array()).square().sum();
    return std::pow(kPi, 0.5 * d) * h.ard_lengthscales.prod() *
           std::exp(-0.25 * quad);
  }
  return spatial_selfconv_radial(dx.norm(), d, h);
}

double temporal_selfconv_restricted(double t_i, double t_j, double t0,
                                    const Hyperparameters& h) {
  if (t_i > t0 || t_j > t0) {
    throw std::invalid_argument(
        "temporal_selfconv_restricted: observation time after t0");
  }
  const double l = h.l_t;
  if (h.family.temporal == CorrelationKind::kSquaredExponential) {
    const double diff = t_i - t_j;
    return 0.5 * std::sqrt(kPi) * l *
           std::exp(-diff * diff / (4.0 * l * l)) *
           special::erfc((2.0 * t0 - t_i - t_j) / (2.0 * l));
  }
  return matern_selfconv_restricted(t_i, t_j, t0, matern_p(h.family.temporal),
                                    l);
}

McEstimate approx_error_A(const Eigen::VectorXd& x_i,
                          const Eigen::VectorXd& x_j, const Hyperparameters& h,
                          std::int64_t mc_samples, std::uint64_t seed) {
  if (mc_samples < 1) {
    throw std::invalid_argument("approx_error_A: mc_samples < 1");
  }
  const int d = static_cast<int>(x_i.size());
  const bool gaussian_tail =
      h.family.spatial == CorrelationKind::kSquaredExponential;

  const auto integrand = [&](const Eigen::VectorXd& x) {
    return spatial_correlation_diff(x - x_i, h) *
           spatial_correlation_diff(x - x_j, h);
  };

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::exponential_distribution<double> expo(1.0);

  // Interior integral over [0,1]^d (cube volume 1, plain mean).
  double in_sum = 0.0;
  double in_sq = 0.0;
  Eigen::VectorXd x(d);
  for (std::int64_t s = 0; s < mc_samples; ++s) {
    for (int k = 0; k < d; ++k) x[k] = unif(rng);
    const double v = integrand(x);
    in_sum += v;
    in_sq += v * v;
  }
  const double n = static_cast<double>(mc_samples);
  const double in_mean = in_sum / n;
  const double in_var = std::max(0.0, in_sq / n - in_mean * in_mean);
  const double in_se = std::sqrt(in_var / n);

  // Full-space integral with an importance-sampled proposal centered at the
  // midpoint. SE tails are sub-Gaussian; Matern tails need the heavier
  // Laplace proposal to keep the weights bounded.
  const Eigen::VectorXd mid = 0.5 * (x_i + x_j);
  const double prop_scale =
      gaussian_tail ? h.l_s
                    : std::sqrt(static_cast<double>(d)) * h.l_s /
                          std::sqrt(2.0 * matern_nu(h.family.spatial));
  double full_sum = 0.0;
  double full_sq = 0.0;
  for (std::int64_t s = 0; s < mc_samples; ++s) {
    double log_q = 0.0;
    for (int k = 0; k < d; ++k) {
      if (gaussian_tail) {
        const double z = normal(rng);
        x[k] = mid[k] + prop_scale * z;
        log_q += -0.5 * z * z - std::log(prop_scale * std::sqrt(2.0 * kPi));
      } else {
        const double e = expo(rng);
        const double sign = unif(rng) < 0.5 ? -1.0 : 1.0;
        x[k] = mid[k] + sign * prop_scale * e;
        log_q += -e - std::log(2.0 * prop_scale);
      }
    }
    const double w = integrand(x) * std::exp(-log_q);
    full_sum += w;
    full_sq += w * w;
  }
  const double full_mean = full_sum / n;
  const double full_var = std::max(0.0, full_sq / n - full_mean * full_mean);
  const double full_se = std::sqrt(full_var / n);

  const double exterior = full_mean - in_mean;
  const double exterior_se = std::sqrt(full_se * full_se + in_se * in_se);
  const double gap = 1.0 - in_mean;

  McEstimate out;
  if (exterior <= gap) {
    out.value = std::clamp(exterior, 0.0, 1.0);
    out.stderr_ = exterior_se;
  } else {
    out.value = std::clamp(gap, 0.0, 1.0);
    out.stderr_ = in_se;
  }
  return out;
}

double critical_lengthscale(const Eigen::VectorXd& x_i,
                            const Eigen::VectorXd& x_j, int d) {
  if (d < 1) throw std::invalid_argument("critical_lengthscale: d < 1");
  const double r2 = (x_i - x_j).squaredNorm();
  const double w = special::lambert_w0(kPi * r2 / (2.0 * d));
  return std::exp(0.5 * w) / std::sqrt(kPi);
}

}  // namespace wdbo
