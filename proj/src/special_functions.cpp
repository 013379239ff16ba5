#include "wdbo/special_functions.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace wdbo::special {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kEulerGamma = 0.577215664901532860606512090082402431;

// erfc(x) for x >= 1 via the modified Lentz continued fraction
//   erfc(x) = e^{-x^2}/sqrt(pi) * 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + ...))))
double erfc_continued_fraction(double x) {
  const double tiny = 1e-300;
  double f = x;  // g = x + K_{n>=1}(  (n/2) / x  ), Lentz recursion
  double c = x;
  double d = 0.0;
  for (int n = 1; n < 300; ++n) {
    const double a_n = 0.5 * n;
    d = x + a_n * d;
    if (std::abs(d) < tiny) d = tiny;
    d = 1.0 / d;
    c = x + a_n / c;
    if (std::abs(c) < tiny) c = tiny;
    const double delta = c * d;
    f *= delta;
    if (std::abs(delta - 1.0) < 1e-16) break;
  }
  return std::exp(-x * x) / std::sqrt(kPi) / f;
}

// Ascending series for I_0, I_1 (full precision, converges for z <= 2 fast).
double bessel_i0_series(double z) {
  const double q = 0.25 * z * z;
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 60; ++k) {
    term *= q / (static_cast<double>(k) * k);
    sum += term;
    if (term < sum * 1e-18) break;
  }
  return sum;
}

double bessel_i1_series(double z) {
  const double q = 0.25 * z * z;
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 60; ++k) {
    term *= q / (static_cast<double>(k) * (k + 1.0));
    sum += term;
    if (term < sum * 1e-18) break;
  }
  return 0.5 * z * sum;
}

// K_0, K_1 for 0 < z <= 2 via the classical log series (A&S 9.6.10-11).
double bessel_k0_series(double z) {
  const double q = 0.25 * z * z;
  const double lg = std::log(0.5 * z) + kEulerGamma;
  double term = 1.0;
  double harmonic = 0.0;
  double sum = 0.0;
  for (int k = 1; k < 60; ++k) {
    term *= q / (static_cast<double>(k) * k);
    harmonic += 1.0 / k;
    sum += term * harmonic;
    if (term * harmonic < std::abs(sum) * 1e-18 + 1e-320) break;
  }
  return -lg * bessel_i0_series(z) + sum;
}

double bessel_k1_series(double z) {
  // K_1(z) = 1/z + ln(z/2) I_1(z) - (z/4) sum_k [psi(k+1)+psi(k+2)]/(k!(k+1)!) q^k
  // with psi(m) = -gamma + H_{m-1}.
  const double q = 0.25 * z * z;
  double term = 1.0;  // q^k / (k! (k+1)!)
  double hk = 0.0;    // H_k
  double sum = 0.0;
  for (int k = 0; k < 60; ++k) {
    if (k > 0) {
      term *= q / (static_cast<double>(k) * (k + 1.0));
      hk += 1.0 / k;
    }
    const double psi_sum = -2.0 * kEulerGamma + 2.0 * hk + 1.0 / (k + 1.0);
    sum += term * psi_sum;
    if (std::abs(term * psi_sum) < std::abs(sum) * 1e-18 + 1e-320) break;
  }
  return 1.0 / z + std::log(0.5 * z) * bessel_i1_series(z) - 0.25 * z * sum;
}

// K_0, K_1 for z > 2 via the Temme/Thompson-Barnett continued fraction.
void bessel_k01_cf(double z, double& k0, double& k1) {
  const double eps = std::numeric_limits<double>::epsilon();
  double b = 2.0 * (1.0 + z);
  double d = 1.0 / b;
  double h = d;
  double delh = d;
  double q1 = 0.0;
  double q2 = 1.0;
  const double a1 = 0.25;  // 0.25 - mu^2 with mu = 0
  double q = a1;
  double c = a1;
  double a = -a1;
  double s = 1.0 + q * delh;
  for (int i = 1; i < 5000; ++i) {
    a -= 2.0 * i;
    c = -a * c / (i + 1.0);
    const double qnew = (q1 - b * q2) / a;
    q1 = q2;
    q2 = qnew;
    q += c * qnew;
    b += 2.0;
    d = 1.0 / (b + a * d);
    delh = (b * d - 1.0) * delh;
    h += delh;
    const double dels = q * delh;
    s += dels;
    if (std::abs(dels / s) <= eps) break;
  }
  h = a1 * h;
  k0 = std::sqrt(kPi / (2.0 * z)) * std::exp(-z) / s;
  k1 = k0 * (z + 0.5 - h) / z;
}

bool is_half_integer(double order) {
  const double two = 2.0 * order;
  return std::abs(two - std::round(two)) < 1e-12 &&
         std::abs(order - std::round(order)) > 0.25;
}

bool is_integer(double order) {
  return std::abs(order - std::round(order)) < 1e-12;
}

}  // namespace

double erf(double x) {
  if (std::abs(x) >= 6.5) return x > 0 ? 1.0 : -1.0;
  if (x == 0.0) return 0.0;
  const double x2 = x * x;
  double term = 1.0;
  double sum = 1.0;
  // sum_n (2x^2)^n / (3*5*...*(2n+1)); all terms positive
  for (int n = 1; n < 400; ++n) {
    term *= 2.0 * x2 / (2.0 * n + 1.0);
    sum += term;
    if (term < sum * 1e-18) break;
  }
  return 2.0 * x * std::exp(-x2) / std::sqrt(kPi) * sum;
}

double erfc(double x) {
  if (x < 1.0) return 1.0 - erf(x);  // no cancellation: erf(x) < 0.85
  if (x > 26.5) return 0.0;          // e^{-x^2} underflows past here
  return erfc_continued_fraction(x);
}

double bessel_k(double order, double z) {
  if (!(z > 0.0)) {
    throw std::domain_error("bessel_k: argument must be positive, got z=" +
                            std::to_string(z));
  }
  if (order < 0.0) order = -order;  // K_{-v} = K_v

  if (is_half_integer(order)) {
    // K_{1/2} = sqrt(pi/(2z)) e^{-z}; upward recurrence in steps of 1
    const double base = std::sqrt(kPi / (2.0 * z)) * std::exp(-z);
    double km = base;               // K_{1/2}
    if (order < 1.0) return km;
    double k = base * (1.0 + 1.0 / z);  // K_{3/2}
    double nu = 1.5;
    while (nu + 0.5 < order + 1e-9) {
      const double knext = km + (2.0 * nu / z) * k;
      km = k;
      k = knext;
      nu += 1.0;
    }
    return k;
  }

  if (!is_integer(order)) {
    throw std::domain_error(
        "bessel_k: only integer and half-integer orders are supported");
  }
  const int n = static_cast<int>(std::lround(order));
  double k0;
  double k1;
  if (z <= 2.0) {
    k0 = bessel_k0_series(z);
    k1 = bessel_k1_series(z);
  } else {
    bessel_k01_cf(z, k0, k1);
  }
  if (n == 0) return k0;
  double km = k0;
  double k = k1;
  for (int m = 1; m < n; ++m) {
    const double knext = km + (2.0 * m / z) * k;
    km = k;
    k = knext;
  }
  return k;
}

double lambert_w0(double x) {
  constexpr double kInvE = 0.367879441171442321595523770161460867;  // 1/e
  if (x < -kInvE - 1e-12) {
    throw std::domain_error("lambert_w0: argument below -1/e");
  }
  if (x < -kInvE) x = -kInvE;
  if (x == 0.0) return 0.0;

  double w;
  if (x < -0.25) {
    // expansion around the branch point x = -1/e
    const double p = std::sqrt(2.0 * (std::exp(1.0) * x + 1.0));
    w = -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p * p * p;
  } else if (x < 3.0) {
    w = x / (1.0 + x);  // crude but in the basin
  } else {
    const double lx = std::log(x);
    w = lx - std::log(lx);
  }

  for (int it = 0; it < 60; ++it) {
    const double ew = std::exp(w);
    const double f = w * ew - x;
    const double denom = ew * (w + 1.0) - (w + 2.0) * f / (2.0 * w + 2.0);
    const double dw = f / denom;
    w -= dw;
    if (std::abs(dw) < 1e-16 * (1.0 + std::abs(w))) break;
  }
  return w;
}

}  // namespace wdbo::special
