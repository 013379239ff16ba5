#pragma once

namespace wdbo::special {

/// Error function, accurate to ~1e-15 over the real line.
///
/// Uses the scaled confluent series erf(x) = (2x e^{-x^2}/sqrt(pi))
/// * sum_n (2x^2)^n / (2n+1)!!, whose terms are all positive (no
/// cancellation), and saturates to +-1 for |x| >= 6.5.
double erf(double x);

/// Complementary error function. Unlike 1 - erf(x), does not underflow
/// for moderate arguments: erfc(27) ~ 1e-318 is still representable.
/// Large-argument evaluation uses a Lentz continued fraction.
double erfc(double x);

/// Modified Bessel function of the second kind K_order(z), z > 0.
///
/// Supported orders are non-negative integers and half-integers.
/// Half-integer orders use the closed forms starting from
/// K_{1/2}(z) = sqrt(pi/(2z)) e^{-z} plus upward recurrence; integer
/// orders use the ascending series for z <= 2 and a continued-fraction
/// evaluation for z > 2, then upward recurrence from K_0, K_1.
/// Throws std::domain_error for z <= 0 or unsupported orders.
double bessel_k(double order, double z);

/// Principal branch of the Lambert W function: w e^w = x with w >= -1,
/// defined for x >= -1/e. Halley iteration from a branch-adapted guess.
/// Throws std::domain_error for x < -1/e.
double lambert_w0(double x);

}  // namespace wdbo::special
