#pragma once

#include <Eigen/Core>

#include <cstdint>

#include "wdbo/kernel.hpp"

namespace wdbo {

/// Self-convolution (k_S * k_S)(||x||_2 = r) of the spatial correlation
/// function over R^d.
///
///   SE:      pi^{d/2} l^d exp(-r^2 / (4 l^2))
///   Matern:  prefactor(nu, d, l) * r^{2nu + d/2} K_{2nu + d/2}(sqrt(2nu) r / l)
///
/// The Matern form needs K at order 2nu + d/2, which is an integer or a
/// half-integer for every supported (nu, d). Small r uses the analytic
/// r -> 0 limit of the Bessel product.
double spatial_selfconv_radial(double r, int d, const Hyperparameters& h);

/// Self-convolution from the coordinate difference. Dispatches to the ARD
/// form pi^{d/2} det(M) exp(-1/4 dx^T M^-2 dx) when ARD lengthscales are set.
double spatial_selfconv(const Eigen::VectorXd& dx, const Hyperparameters& h);

/// Temporal self-convolution restricted to the future window,
///
///   integral over [t0, +inf) of k_T(|t - t_i|) k_T(|t - t_j|) dt,
///
/// in closed form. Requires t_i <= t0 and t_j <= t0 (throws otherwise).
/// Strictly decreasing in t0 and tends to 0 as the observations go stale.
///
/// The SE entry carries exp(-(t_i - t_j)^2 / (4 l_T^2)); the tail factor is
/// evaluated through erfc so staleness decays smoothly instead of
/// underflowing at 1 - erf.
double temporal_selfconv_restricted(double t_i, double t_j, double t0,
                                    const Hyperparameters& h);

/// Monte-Carlo estimate with its standard error.
struct McEstimate {
  double value = 0.0;
  double stderr_ = 0.0;
};

/// Absolute approximation error A(x_i, x_j; l_S) of replacing the integral
/// of k_S(||x - x_i||) k_S(||x - x_j||) over [0,1]^d by its R^d extension:
/// the minimum of the mass outside the cube and of 1 minus the mass inside.
///
/// Both integrals are estimated by Monte Carlo: uniform samples on the cube
/// for the interior, an importance-sampled proposal (Gaussian for SE/ARD,
/// Laplace for Matern) for the full-space integral. Deterministic given the
/// seed.
McEstimate approx_error_A(const Eigen::VectorXd& x_i,
                          const Eigen::VectorXd& x_j, const Hyperparameters& h,
                          std::int64_t mc_samples, std::uint64_t seed = 1);

/// Spatial lengthscale maximizing A(x_i, x_j; l_S) for the SE kernel:
///   (1/sqrt(pi)) exp( W0(pi ||x_i - x_j||^2 / (2d)) / 2 ).
double critical_lengthscale(const Eigen::VectorXd& x_i,
                            const Eigen::VectorXd& x_j, int d);

}  // namespace wdbo
