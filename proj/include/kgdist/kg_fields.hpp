#pragma once

// Radial fields of the stationary Klein-Gordon operator (laplacian - m^2):
// the Yukawa mode, the growing mode, the sqrt(r^2 + eps^2)-regularized Yukawa
// potential, and the erf-mollified combination Phi(r, eps) that stays finite
// at the origin. Each comes with its closed-form residual; a five-point
// finite-difference operator is provided as an independent cross-check.

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <optional>
#include <string>

#include "errors.hpp"
#include "mollifier.hpp"
#include "specfun.hpp"

namespace kgdist {

/// Mass of the Klein-Gordon operator. m = 0 (Coulomb limit) is accepted
/// here; operations that need m > 0 check it themselves.
class FieldParams {
public:
  explicit FieldParams(double m) : m_(m) {
    if (!(m >= 0.0) || !std::isfinite(m))
      throw domain_error("FieldParams: mass must be nonnegative and finite, got " + detail::fmt_real(m));
  }

  double m() const noexcept { return m_; }

private:
  double m_;
};

enum class OriginBehavior { finite, removable, singular };

/// A scalar field of radius, optionally with its analytic radial Laplacian
/// (1/r) d^2/dr^2 [r f(r)].
struct RadialFunction {
  std::string name;
  std::function<double(double)> value;
  std::optional<std::function<double(double)>> laplacian_radial;
  OriginBehavior origin = OriginBehavior::finite;
};

namespace detail {

inline void require_radius(double r, bool allow_zero, const char* op, const char* hint) {
  if (!std::isfinite(r) || r < 0.0 || (!allow_zero && r == 0.0))
    throw domain_error(std::string(op) + ": " + hint + " (r = " + fmt_real(r) + ")");
}

// sinh(x r) / r, with the r -> 0 limit x.
inline double sinh_over_r(double x, double r) {
  if (r == 0.0) return x;
  return std::sinh(x * r) / r;
}

}  // namespace detail

/// e^{-m r} / r
inline double yukawa(double r, const FieldParams& p) {
  detail::require_radius(r, false, "yukawa", "singular at r=0; use yukawa_reg or phi_dist");
  return std::exp(-p.m() * r) / r;
}

/// e^{+m r} / r
inline double growing_mode(double r, const FieldParams& p) {
  detail::require_radius(r, false, "growing_mode", "singular at r=0");
  return std::exp(p.m() * r) / r;
}

/// e^{-m r} / sqrt(r^2 + eps^2); equals 1/eps at the origin.
inline double yukawa_reg(double r, const FieldParams& p, const Mollification& moll) {
  detail::require_radius(r, true, "yukawa_reg", "radius must be nonnegative");
  return std::exp(-p.m() * r) / std::hypot(r, moll.epsilon());
}

/// -3 eps^2 / (r^2 + eps^2)^{5/2} e^{-m r}: the delta-forming part of the
/// regularized Yukawa residual. Finite at r = 0, where it equals -3/eps^3.
inline double yukawa_reg_residual_delta_term(double r, const FieldParams& p, const Mollification& moll) {
  detail::require_radius(r, true, "yukawa_reg_residual_delta_term", "radius must be nonnegative");
  const double e2 = moll.epsilon() * moll.epsilon();
  const double s = r * r + e2;
  return -3.0 * e2 / (s * s * std::sqrt(s)) * std::exp(-p.m() * r);
}

/// (laplacian - m^2) applied to yukawa_reg, in closed form. The second term
/// carries an explicit 1/r, so r = 0 is rejected.
inline double kg_residual_yukawa_reg(double r, const FieldParams& p, const Mollification& moll) {
  detail::require_radius(r, false, "kg_residual_yukawa_reg",
                         "1/r term is singular at r=0; use yukawa_reg_residual_delta_term");
  const double e2 = moll.epsilon() * moll.epsilon();
  const double s = r * r + e2;
  const double sqrt_s = std::sqrt(s);
  const double first = -3.0 * e2 / (s * s * sqrt_s);
  const double second = -2.0 * p.m() * e2 / (r * s * sqrt_s);
  return (first + second) * std::exp(-p.m() * r);
}

/// Radius below which phi_dist switches to its even Taylor polynomial.
inline double phi_dist_switch_radius(const FieldParams& p, const Mollification& moll) {
  const double eps = moll.epsilon();
  const double scale = p.m() > 0.0 ? std::min(eps, 1.0 / p.m()) : eps;
  return 1e-3 * scale;
}

/// Taylor coefficients c0, c2, c4 of phi_dist in powers of r^2.
struct PhiDistSeries {
  double c0, c2, c4;

  double operator()(double r) const {
    const double r2 = r * r;
    return c0 + r2 * (c2 + r2 * c4);
  }
};

inline PhiDistSeries phi_dist_series(const FieldParams& p, const Mollification& moll) {
  const double m = p.m();
  const double m2 = m * m;
  const double ie2 = 1.0 / (moll.epsilon() * moll.epsilon());
  // -sinh(m r)/r + erf(r/(sqrt2 eps)) cosh(m r)/r expanded to O(r^4).
  const double a = std::sqrt(2.0 / std::numbers::pi) / moll.epsilon();
  return {
      -m + a,
      -m * m2 / 6.0 + a * (0.5 * m2 - ie2 / 6.0),
      -m * m2 * m2 / 120.0 + a * (m2 * m2 / 24.0 - m2 * ie2 / 12.0 + ie2 * ie2 / 40.0),
  };
}

/// Phi(r, eps) = f(r) e^{-m r}/r - f(-r) e^{m r}/r with f = heaviside_reg.
///
/// Written as N(r)/r with N(r) = -sinh(m r) + erf(z) cosh(m r),
/// z = r/(sqrt2 eps). Three branches:
///  - r below phi_dist_switch_radius: even Taylor polynomial; the value at
///    r = 0 is the smooth extension -m + sqrt(2/pi)/eps.
///  - z < 1: N(r)/r directly, both terms are O(r) and nothing cancels.
///  - z >= 1: N(r) = e^{-m r} - erfc(z) cosh(m r), with erfc(z) e^{+-m r}
///    formed from erfcx so neither factor overflows.
inline double phi_dist(double r, const FieldParams& p, const Mollification& moll) {
  detail::require_radius(r, true, "phi_dist", "radius must be nonnegative");
  const double m = p.m();
  if (r < phi_dist_switch_radius(p, moll)) return phi_dist_series(p, moll)(r);
  const double z = r / (std::numbers::sqrt2 * moll.epsilon());
  if (z < 1.0) return (-std::sinh(m * r) + kgdist::erf(z) * std::cosh(m * r)) / r;
  const double scaled = 0.5 * kgdist::erfcx(z);
  const double z2 = z * z;
  const double tail = scaled * (std::exp(m * r - z2) + std::exp(-m * r - z2));
  return (std::exp(-m * r) - tail) / r;
}

/// The prescription erf(0) = 0 first, then the removable limit of
/// (1/2)(e^{-m r} - e^{m r})/r: gives -m.
inline double phi_origin_paper(const FieldParams& p) {
  if (!(p.m() > 0.0)) throw domain_error("phi_origin_paper: mass must be positive");
  return -p.m();
}

/// phi_dist(0) at fixed eps: -m + sqrt(2/pi)/eps. Diverges as eps -> 0.
inline double phi_origin_smooth(const FieldParams& p, const Mollification& moll) {
  return -p.m() + std::sqrt(2.0 / std::numbers::pi) / moll.epsilon();
}

/// The two summands of (laplacian - m^2) Phi:
///   gaussian_term   = -(2m/(sqrt(2 pi) eps)) e^{-r^2/(2 eps^2)} (e^{-mr} - e^{mr})/r
///                   = 4 m G(r) sinh(m r)/r
///   derivative_term = (e^{-mr} + e^{mr})/r * G'(r) = -2 G(r) cosh(m r)/eps^2
/// with G the normalized Gaussian of width eps. Both are finite at r = 0.
struct PhiDistResidualTerms {
  double gaussian_term;
  double derivative_term;

  double total() const { return gaussian_term + derivative_term; }
};

inline PhiDistResidualTerms kg_residual_phi_dist_terms(double r, const FieldParams& p,
                                                       const Mollification& moll) {
  detail::require_radius(r, true, "kg_residual_phi_dist", "radius must be nonnegative");
  const double m = p.m();
  const double eps = moll.epsilon();
  const double ie2 = 1.0 / (eps * eps);
  const double norm = 1.0 / (std::sqrt(2.0 * std::numbers::pi) * eps);
  const double expo = -0.5 * r * r * ie2;
  if (m * r < 1.0) {
    const double g = norm * std::exp(expo);
    return {4.0 * m * g * detail::sinh_over_r(m, r), -2.0 * g * std::cosh(m * r) * ie2};
  }
  // G e^{+-m r} combined in the exponent: avoids inf * 0 far out.
  const double up = norm * std::exp(expo + m * r);
  const double down = norm * std::exp(expo - m * r);
  return {2.0 * m * (up - down) / r, -(up + down) * ie2};
}

/// (laplacian - m^2) Phi in closed form.
inline double kg_residual_phi_dist(double r, const FieldParams& p, const Mollification& moll) {
  return kg_residual_phi_dist_terms(r, p, moll).total();
}

/// (1/r) d^2/dr^2 [r f] - m^2 f by the five-point fourth-order stencil on
/// g = r f over [r - 2h, r + 2h].
inline double kg_operator_numeric(const RadialFunction& fld, double r, const FieldParams& p, double h) {
  if (!(h > 0.0) || !std::isfinite(h) || !std::isfinite(r))
    throw domain_error("kg_operator_numeric: step must be positive and finite");
  if (!(r > 2.0 * h))
    throw domain_error("kg_operator_numeric: stencil [r-2h, r+2h] leaves r > 0 (r = " + detail::fmt_real(r) +
                       ", h = " + detail::fmt_real(h) + ")");
  const auto g = [&](double x) { return x * fld.value(x); };
  const double second =
      (-g(r + 2.0 * h) + 16.0 * g(r + h) - 30.0 * g(r) + 16.0 * g(r - h) - g(r - 2.0 * h)) / (12.0 * h * h);
  const double m = p.m();
  return second / r - m * m * fld.value(r);
}

// RadialFunction views of the families above.

inline RadialFunction yukawa_field(const FieldParams& p) {
  const double m2 = p.m() * p.m();
  return {"yukawa", [p](double r) { return yukawa(r, p); },
          [p, m2](double r) { return m2 * yukawa(r, p); }, OriginBehavior::singular};
}

inline RadialFunction growing_mode_field(const FieldParams& p) {
  const double m2 = p.m() * p.m();
  return {"growing_mode", [p](double r) { return growing_mode(r, p); },
          [p, m2](double r) { return m2 * growing_mode(r, p); }, OriginBehavior::singular};
}

inline RadialFunction yukawa_reg_field(const FieldParams& p, const Mollification& moll) {
  const double m2 = p.m() * p.m();
  return {"yukawa_reg", [p, moll](double r) { return yukawa_reg(r, p, moll); },
          [p, moll, m2](double r) { return kg_residual_yukawa_reg(r, p, moll) + m2 * yukawa_reg(r, p, moll); },
          OriginBehavior::finite};
}

inline RadialFunction phi_dist_field(const FieldParams& p, const Mollification& moll) {
  const double m2 = p.m() * p.m();
  return {"phi_dist", [p, moll](double r) { return phi_dist(r, p, moll); },
          [p, moll, m2](double r) { return kg_residual_phi_dist(r, p, moll) + m2 * phi_dist(r, p, moll); },
          OriginBehavior::removable};
}

}  // namespace kgdist
