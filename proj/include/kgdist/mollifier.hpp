#pragma once

// Erf-smoothed Heaviside step and its Gaussian derivative, the one-parameter
// family whose eps -> 0+ limit defines the step with Theta(0) = 1/2.

#include <cmath>
#include <numbers>

#include "errors.hpp"
#include "specfun.hpp"

namespace kgdist {

/// Regularization width eps > 0, in the same length units as r.
class Mollification {
public:
  explicit Mollification(double epsilon) : epsilon_(epsilon) {
    if (!(epsilon > 0.0) || !std::isfinite(epsilon))
      throw domain_error("Mollification: epsilon must be positive and finite, got " +
                         detail::fmt_real(epsilon));
  }

  double epsilon() const noexcept { return epsilon_; }

private:
  double epsilon_;
};

/// (1/2) [1 + erf(x / (sqrt(2) eps))]
inline double heaviside_reg(double x, const Mollification& moll) {
  detail::require_finite(x, "heaviside_reg");
  const double z = x / (std::numbers::sqrt2 * moll.epsilon());
  // The negative side goes through erfc so deep tails keep relative accuracy.
  if (z < 0.0) return 0.5 * kgdist::erfc(-z);
  return 0.5 * (1.0 + kgdist::erf(z));
}

/// Pointwise eps -> 0+ limit of heaviside_reg.
inline double heaviside_limit(double x) {
  detail::require_finite(x, "heaviside_limit");
  if (x > 0.0) return 1.0;
  if (x < 0.0) return 0.0;
  return 0.5;
}

/// Gaussian delta sequence, d/dx heaviside_reg(x, moll).
inline double delta_reg(double x, const Mollification& moll) {
  return gaussian(x, moll.epsilon());
}

}  // namespace kgdist
