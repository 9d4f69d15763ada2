#pragma once

// Momentum-space side of the point-source problem: the origin value from
// analytic continuation in the dimension D, the piecewise Fourier solution,
// a hard momentum cutoff with its explicit divergent subtraction, and a
// numerical inverse transform of 1/(k^2 + m^2) away from the origin.

#include <cmath>
#include <numbers>
#include <string>

#include "errors.hpp"
#include "kg_fields.hpp"
#include "quad.hpp"
#include "specfun.hpp"

namespace kgdist {

inline constexpr double dimension_pole_margin = 1e-6;

/// Analytically continued spatial dimension, D in (0, 4) away from the
/// Gamma(1 - D/2) pole at D = 2.
class Dimension {
public:
  explicit Dimension(double d) : d_(d) {
    if (!std::isfinite(d) || !(d > 0.0) || !(d < 4.0))
      throw domain_error("Dimension: D must lie in (0, 4), got " + detail::fmt_real(d));
    if (std::abs(d - 2.0) < dimension_pole_margin)
      throw pole_error("Gamma pole at 1-D/2 = 0 (D = " + detail::fmt_real(d) + ")", 1.0 - 0.5 * d);
  }

  double value() const noexcept { return d_; }

private:
  double d_;
};

/// (1/(2 pi^2)) pi^{D/2} Gamma(1 - D/2) (m^2)^{D/2 - 1}; equals -m at D = 3.
inline double dimreg_origin(const FieldParams& p, const Dimension& dim) {
  if (!(p.m() > 0.0)) throw domain_error("dimreg_origin: mass must be positive");
  const double d = dim.value();
  double g;
  try {
    g = gamma_real(1.0 - 0.5 * d);
  } catch (const pole_error&) {
    throw pole_error("Gamma pole at 1-D/2 = 0 (D = " + detail::fmt_real(d) + ")", 1.0 - 0.5 * d);
  }
  const double pi = std::numbers::pi;
  return std::pow(pi, 0.5 * d) * g * std::pow(p.m() * p.m(), 0.5 * d - 1.0) / (2.0 * pi * pi);
}

/// e^{-m r}/r for r > 0 and -m at r = 0.
inline double phi_fourier(double r, const FieldParams& p) {
  detail::require_radius(r, true, "phi_fourier", "radius must be nonnegative");
  if (r == 0.0) return -p.m();
  return yukawa(r, p);
}

namespace detail {

inline void require_cutoff(double lambda, const char* op) {
  if (!(lambda > 0.0) || !std::isfinite(lambda))
    throw domain_error(std::string(op) + ": cutoff must be positive and finite, got " + fmt_real(lambda));
}

}  // namespace detail

/// (2/pi) integral_0^Lambda k^2/(k^2 + m^2) dk = (2/pi)(Lambda - m arctan(Lambda/m)).
inline double cutoff_origin(const FieldParams& p, double lambda) {
  detail::require_cutoff(lambda, "cutoff_origin");
  const double m = p.m();
  const double arctan_term = m > 0.0 ? m * std::atan(lambda / m) : 0.0;
  return 2.0 / std::numbers::pi * (lambda - arctan_term);
}

/// cutoff_origin - (2/pi) Lambda, i.e. -(2m/pi) arctan(Lambda/m).
/// The linear divergence cancels analytically; no large terms are subtracted.
inline double cutoff_subtracted(const FieldParams& p, double lambda) {
  detail::require_cutoff(lambda, "cutoff_subtracted");
  const double m = p.m();
  if (m == 0.0) return 0.0;
  return -2.0 * m / std::numbers::pi * std::atan(lambda / m);
}

/// (2/(pi r)) integral_0^Lambda k sin(k r)/(k^2 + m^2) dk, extrapolated to
/// Lambda -> inf from the half-periods below Lambda. Approaches yukawa(r).
/// A Lambda below 100/r is allowed but flagged in the result warning.
inline IntegralResult fourier_radial_numeric(double r, const FieldParams& p, double lambda,
                                             const QuadratureConfig& cfg = {}) {
  detail::require_radius(r, false, "fourier_radial_numeric", "the Fourier integral diverges at r=0");
  detail::require_cutoff(lambda, "fourier_radial_numeric");
  const double m2 = p.m() * p.m();
  auto res = integrate_sine_transform([m2](double k) { return k / (k * k + m2); }, r, lambda, cfg);
  const double scale = 2.0 / (std::numbers::pi * r);
  res.value *= scale;
  res.error_estimate *= scale;
  if (lambda * r < 100.0) {
    if (!res.warning.empty()) res.warning += "; ";
    res.warning += "Lambda below 100/r: too few half-periods for reliable acceleration";
    res.converged = false;
  }
  return res;
}

}  // namespace kgdist
