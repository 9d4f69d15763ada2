#pragma once

// Real-argument special functions: error function family, Euler Gamma with
// continuation to negative non-integer arguments, and the normalized Gaussian
// kernel with its derivative.

#include <cmath>
#include <numbers>
#include <string>

#include "errors.hpp"

namespace kgdist {

namespace detail {

inline void require_finite(double x, const char* op) {
  if (!std::isfinite(x))
    throw domain_error(std::string(op) + ": argument must be finite, got " + fmt_real(x));
}

inline constexpr double erf_series_limit = 3.0;
inline constexpr double erfc_fraction_limit = 2.0;

// erf(x) = 2/sqrt(pi) e^{-x^2} sum_n 2^n x^{2n+1} / (2n+1)!!
// All terms are positive, so there is no cancellation for |x| <= 3.
inline double erf_series(double x) {
  const double x2 = x * x;
  double term = x;
  double sum = x;
  for (int n = 1; n < 200; ++n) {
    term *= 2.0 * x2 / (2.0 * n + 1.0);
    sum += term;
    if (std::abs(term) <= std::abs(sum) * 1e-17) break;
  }
  return 2.0 * std::numbers::inv_sqrtpi * std::exp(-x2) * sum;
}

// sqrt(pi) e^{x^2} erfc(x) for x >= 2 by the Laplace continued fraction
//   1/(x + (1/2)/(x + 1/(x + (3/2)/(x + ...)))),
// evaluated with the modified Lentz algorithm.
inline double erfc_fraction(double x) {
  constexpr double tiny = 1e-300;
  double f = x;
  double c = x;
  double d = 0.0;
  for (int k = 1; k < 2000; ++k) {
    const double a = 0.5 * k;
    d = x + a * d;
    if (d == 0.0) d = tiny;
    c = x + a / c;
    if (c == 0.0) c = tiny;
    d = 1.0 / d;
    const double delta = c * d;
    f *= delta;
    if (std::abs(delta - 1.0) < 1e-16) break;
  }
  return 1.0 / f;
}

}  // namespace detail

/// Gauss error function.
inline double erf(double x) {
  detail::require_finite(x, "erf");
  const double ax = std::abs(x);
  if (ax <= detail::erf_series_limit) return detail::erf_series(x);
  const double tail = std::exp(-ax * ax) * std::numbers::inv_sqrtpi * detail::erfc_fraction(ax);
  return std::copysign(1.0 - tail, x);
}

/// Complementary error function, accurate in the far right tail.
inline double erfc(double x) {
  detail::require_finite(x, "erfc");
  if (x < 0.0) return 2.0 - erfc(-x);
  if (x < detail::erfc_fraction_limit) return 1.0 - detail::erf_series(x);
  return std::exp(-x * x) * std::numbers::inv_sqrtpi * detail::erfc_fraction(x);
}

/// Scaled complementary error function e^{x^2} erfc(x), for x >= 0.
/// Lets callers combine the Gaussian factor with other exponentials.
inline double erfcx(double x) {
  detail::require_finite(x, "erfcx");
  if (x < 0.0) throw domain_error("erfcx: argument must be nonnegative, got " + detail::fmt_real(x));
  if (x < detail::erfc_fraction_limit) return std::exp(x * x) * (1.0 - detail::erf_series(x));
  return std::numbers::inv_sqrtpi * detail::erfc_fraction(x);
}

inline constexpr double gamma_pole_margin = 1e-3;

namespace detail {

// Lanczos approximation, g = 7, nine coefficients; Gamma(z) for z >= 1.
inline double gamma_lanczos(double z) {
  static constexpr double g = 7.0;
  static constexpr double coef[9] = {
      0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
      771.32342877765313,   -176.61502916214059,   12.507343278686905,
      -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
  const double zm1 = z - 1.0;
  double a = coef[0];
  for (int i = 1; i < 9; ++i) a += coef[i] / (zm1 + i);
  const double t = zm1 + g + 0.5;
  // t^{zm1+1/2} split in two so that z up to ~171 does not overflow early.
  const double half_pow = std::pow(t, 0.5 * (zm1 + 0.5));
  return std::sqrt(2.0 * std::numbers::pi) * half_pow * (half_pow * std::exp(-t)) * a;
}

}  // namespace detail

/// Euler Gamma for real z. Negative non-integer arguments are reached by
/// upward recurrence Gamma(z) = Gamma(z+n) / (z (z+1) ... (z+n-1)).
/// Throws pole_error within gamma_pole_margin of {0, -1, -2, ...}.
inline double gamma_real(double z) {
  detail::require_finite(z, "gamma_real");
  if (z <= gamma_pole_margin) {
    const double nearest = std::round(z);
    if (std::abs(z - nearest) < gamma_pole_margin)
      throw pole_error("gamma_real: pole at z = " + detail::fmt_real(nearest) +
                           " (argument " + detail::fmt_real(z) + ")",
                       z);
  }
  if (z >= 1.0) return detail::gamma_lanczos(z);
  const int shift = static_cast<int>(std::ceil(1.0 - z));
  double denom = 1.0;
  for (int k = 0; k < shift; ++k) denom *= z + k;
  return detail::gamma_lanczos(z + shift) / denom;
}

namespace detail {

inline void require_positive_width(double eps, const char* op) {
  if (!(eps > 0.0) || !std::isfinite(eps))
    throw domain_error(std::string(op) + ": width must be positive and finite, got " + fmt_real(eps));
}

}  // namespace detail

/// Normalized Gaussian (1/(sqrt(2 pi) eps)) exp(-x^2 / (2 eps^2)).
inline double gaussian(double x, double eps) {
  detail::require_finite(x, "gaussian");
  detail::require_positive_width(eps, "gaussian");
  const double u = x / eps;
  return std::exp(-0.5 * u * u) / (std::sqrt(2.0 * std::numbers::pi) * eps);
}

/// d/dx of gaussian(x, eps) = -x / eps^2 * gaussian(x, eps).
inline double gaussian_prime(double x, double eps) {
  return -x / (eps * eps) * gaussian(x, eps);
}

}  // namespace kgdist
