#pragma once

// Globally adaptive Gauss-Kronrod (7, 15) quadrature on finite intervals and
// on [0, inf) for radial densities, an accelerated sine-transform integrator,
// and a log-log least-squares fit for convergence orders.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace kgdist {

struct QuadratureConfig {
  double abs_tol = 1e-12;
  double rel_tol = 1e-10;
  int max_subdivisions = 2000;
  /// Length scale of the integrand; anchors the [0, inf) map and breakpoints.
  std::optional<double> split_scale;

  void validate() const {
    if (!(abs_tol >= 0.0) || !(rel_tol >= 0.0) || !std::isfinite(abs_tol) || !std::isfinite(rel_tol))
      throw std::invalid_argument("QuadratureConfig: tolerances must be finite and nonnegative");
    if (!(abs_tol + rel_tol > 0.0))
      throw std::invalid_argument("QuadratureConfig: at least one of abs_tol, rel_tol must be positive");
    if (max_subdivisions < 1) throw std::invalid_argument("QuadratureConfig: max_subdivisions must be positive");
    if (split_scale && (!(*split_scale > 0.0) || !std::isfinite(*split_scale)))
      throw std::invalid_argument("QuadratureConfig: split_scale must be positive and finite");
  }

  double tolerance_for(double value) const { return std::max(abs_tol, rel_tol * std::abs(value)); }

  QuadratureConfig with_split_scale(double s) const {
    QuadratureConfig out = *this;
    out.split_scale = s;
    return out;
  }
};

struct IntegralResult {
  double value = 0.0;
  double error_estimate = 0.0;
  long evaluations = 0;
  bool converged = false;
  std::string warning;
};

namespace detail {

// Kronrod abscissae in (0, 1], descending; odd indices are the Gauss nodes.
inline constexpr std::array<double, 8> gk15_nodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> gk15_weights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> g7_weights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a, b;
  double value;
  double error;
};

template <class F>
double checked_eval(F& f, double x) {
  const double y = f(x);
  if (!std::isfinite(y))
    throw quadrature_error("integrand returned " + fmt_real(y) + " at abscissa " + fmt_real(x), x);
  return y;
}

/// One Kronrod panel. The error is |K15 - G7|, floored at 50 ulp of the
/// absolute integral so rounding is never reported as zero.
template <class F>
Panel gk15(F& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = checked_eval(f, center);
  double kronrod = fc * gk15_weights[7];
  double gauss = fc * g7_weights[3];
  double abs_sum = std::abs(kronrod);
  for (std::size_t i = 0; i < 7; ++i) {
    const double dx = half * gk15_nodes[i];
    const double f1 = checked_eval(f, center - dx);
    const double f2 = checked_eval(f, center + dx);
    kronrod += gk15_weights[i] * (f1 + f2);
    abs_sum += gk15_weights[i] * (std::abs(f1) + std::abs(f2));
    if (i % 2 == 1) gauss += g7_weights[i / 2] * (f1 + f2);
  }
  kronrod *= half;
  gauss *= half;
  abs_sum *= std::abs(half);
  const double err = std::max(std::abs(kronrod - gauss), 50.0 * std::numeric_limits<double>::epsilon() * abs_sum);
  return {a, b, kronrod, err};
}

/// Global adaptive bisection of the worst panel over the given breakpoints.
template <class F>
IntegralResult adaptive(F& f, std::span<const double> breakpoints, const QuadratureConfig& cfg) {
  cfg.validate();
  const auto by_error = [](const Panel& lhs, const Panel& rhs) { return lhs.error < rhs.error; };
  std::vector<Panel> heap;
  heap.reserve(static_cast<std::size_t>(cfg.max_subdivisions) + breakpoints.size());
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) heap.push_back(gk15(f, breakpoints[i], breakpoints[i + 1]));
  std::make_heap(heap.begin(), heap.end(), by_error);

  IntegralResult out;
  const auto totals = [&] {
    double v = 0.0, e = 0.0;
    for (const auto& p : heap) {
      v += p.value;
      e += p.error;
    }
    out.value = v;
    out.error_estimate = e;
  };
  totals();
  while (out.error_estimate > cfg.tolerance_for(out.value)) {
    if (heap.size() >= static_cast<std::size_t>(cfg.max_subdivisions)) {
      out.warning = "subdivision limit reached";
      break;
    }
    std::pop_heap(heap.begin(), heap.end(), by_error);
    const Panel worst = heap.back();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      out.warning = "panel width at floating-point resolution near " + fmt_real(worst.a);
      std::push_heap(heap.begin(), heap.end(), by_error);
      break;
    }
    heap.back() = gk15(f, worst.a, mid);
    std::push_heap(heap.begin(), heap.end(), by_error);
    heap.push_back(gk15(f, mid, worst.b));
    std::push_heap(heap.begin(), heap.end(), by_error);
    totals();
  }
  out.evaluations = static_cast<long>(heap.size()) * 15;
  out.converged = out.error_estimate <= cfg.tolerance_for(out.value);
  return out;
}

}  // namespace detail

/// Adaptive integral of g over [a, b].
template <class F>
IntegralResult integrate_interval(F&& g, double a, double b, const QuadratureConfig& cfg = {}) {
  if (!std::isfinite(a) || !std::isfinite(b) || !(a < b))
    throw domain_error("integrate_interval: need finite a < b, got [" + detail::fmt_real(a) + ", " +
                       detail::fmt_real(b) + "]");
  const std::array<double, 2> bp = {a, b};
  return detail::adaptive(g, bp, cfg);
}

/// 4 pi * integral_0^inf r^2 density(r) dr, i.e. the integral over R^3 of a
/// spherically symmetric density.
///
/// The half-line is mapped onto [0, 1) by r = s t / (1 - t) with
/// s = cfg.split_scale (default 1), and starts from breakpoints at
/// r in {0, s, 10 s}. Only interior Kronrod nodes are evaluated, so the
/// density is never called at r = 0 or r = inf.
template <class F>
IntegralResult integrate_radial(F&& density, const QuadratureConfig& cfg = {}) {
  const double s = cfg.split_scale.value_or(1.0);
  auto mapped = [&](double t) {
    const double one_minus = 1.0 - t;
    const double r = s * t / one_minus;
    const double d = density(r);
    if (!std::isfinite(d))
      throw quadrature_error("density returned " + detail::fmt_real(d) + " at r = " + detail::fmt_real(r), r);
    if (d == 0.0) return 0.0;
    return 4.0 * std::numbers::pi * r * r * d * s / (one_minus * one_minus);
  };
  const std::array<double, 4> bp = {0.0, 0.5, 10.0 / 11.0, 1.0};
  return detail::adaptive(mapped, bp, cfg);
}

inline constexpr int max_half_periods = 10000;

/// Estimate of integral_0^inf g(k) sin(omega k) dk for slowly varying g.
///
/// Integrates exactly between consecutive zeros of sin(omega k) up to k_max
/// (at most max_half_periods half-periods), then extrapolates the
/// alternating partial sums by repeated averaging (Euler transform).
/// The error estimate is the spread between the last two averaging levels
/// plus the accumulated panel errors.
template <class F>
IntegralResult integrate_sine_transform(F&& g, double omega, double k_max, const QuadratureConfig& cfg = {}) {
  if (!(omega > 0.0) || !(k_max > 0.0) || !std::isfinite(omega) || !std::isfinite(k_max))
    throw domain_error("integrate_sine_transform: omega and k_max must be positive and finite");
  const double half_period = std::numbers::pi / omega;
  const long available = static_cast<long>(std::floor(k_max / half_period));
  const long count = std::min<long>(available, max_half_periods);

  IntegralResult out;
  if (count < 2) {
    out.warning = "fewer than two half-periods below k_max";
    return out;
  }
  auto integrand = [&](double k) { return g(k) * std::sin(omega * k); };
  std::vector<double> partial;
  partial.reserve(static_cast<std::size_t>(count));
  double running = 0.0;
  double panel_error = 0.0;
  bool all_converged = true;
  for (long j = 0; j < count; ++j) {
    const auto piece = integrate_interval(integrand, j * half_period, (j + 1) * half_period, cfg);
    running += piece.value;
    panel_error += piece.error_estimate;
    out.evaluations += piece.evaluations;
    all_converged = all_converged && piece.converged;
    partial.push_back(running);
  }

  const std::size_t levels = std::min<std::size_t>(partial.size() - 1, 12);
  std::vector<double> row(partial.end() - static_cast<long>(levels) - 1, partial.end());
  double previous = row.back();
  for (std::size_t level = 0; level < levels; ++level) {
    previous = row.back();
    for (std::size_t i = 0; i + 1 < row.size(); ++i) row[i] = 0.5 * (row[i] + row[i + 1]);
    row.pop_back();
  }
  out.value = row.front();
  out.error_estimate = std::abs(out.value - previous) + panel_error;
  out.converged = all_converged && out.error_estimate <= cfg.tolerance_for(out.value);
  if (count == max_half_periods && available > max_half_periods)
    out.warning = "half-period cap reached; k_max truncated";
  return out;
}

/// Least-squares slope of log(deviation) against log(eps).
/// Zero deviations are dropped; fewer than three remaining points throws
/// insufficient_data.
inline double fit_convergence_order(std::span<const double> eps_grid, std::span<const double> deviations) {
  if (eps_grid.size() != deviations.size())
    throw std::invalid_argument("fit_convergence_order: grid and deviations differ in length");
  for (std::size_t i = 0; i < eps_grid.size(); ++i) {
    if (!(eps_grid[i] > 0.0) || !std::isfinite(eps_grid[i]))
      throw std::invalid_argument("fit_convergence_order: grid values must be positive and finite");
    if (i > 0 && !(eps_grid[i] < eps_grid[i - 1]))
      throw std::invalid_argument("fit_convergence_order: grid must be strictly decreasing");
    if (!(deviations[i] >= 0.0) || !std::isfinite(deviations[i]))
      throw std::invalid_argument("fit_convergence_order: deviations must be finite and nonnegative");
  }
  std::vector<std::pair<double, double>> pts;
  for (std::size_t i = 0; i < eps_grid.size(); ++i)
    if (deviations[i] > 0.0) pts.emplace_back(std::log(eps_grid[i]), std::log(deviations[i]));
  if (pts.size() < 3)
    throw insufficient_data("fit_convergence_order: need at least 3 nonzero deviations, have " +
                            std::to_string(pts.size()));
  double mx = 0.0, my = 0.0;
  for (const auto& [x, y] : pts) {
    mx += x;
    my += y;
  }
  mx /= static_cast<double>(pts.size());
  my /= static_cast<double>(pts.size());
  double sxy = 0.0, sxx = 0.0;
  for (const auto& [x, y] : pts) {
    sxy += (x - mx) * (y - my);
    sxx += (x - mx) * (x - mx);
  }
  return sxy / sxx;
}

}  // namespace kgdist
