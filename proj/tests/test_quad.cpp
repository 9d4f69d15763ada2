#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "kgdist/quad.hpp"

using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;
using kgdist::QuadratureConfig;

namespace {

constexpr double pi = std::numbers::pi;

double yukawa_reg_delta(double r, double eps) {
  const double s = r * r + eps * eps;
  return -3.0 * eps * eps / (s * s * std::sqrt(s));
}

}  // namespace

TEST_CASE("config validation", "[quad]") {
  QuadratureConfig cfg;
  CHECK(cfg.abs_tol == 1e-12);
  CHECK(cfg.rel_tol == 1e-10);
  CHECK(cfg.max_subdivisions == 2000);
  CHECK_NOTHROW(cfg.validate());
  cfg.abs_tol = 0.0;
  cfg.rel_tol = 0.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg.rel_tol = 1e-8;
  CHECK_NOTHROW(cfg.validate());
  cfg.max_subdivisions = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  CHECK_THROWS_AS(QuadratureConfig{}.with_split_scale(-1.0).validate(), std::invalid_argument);
}

TEST_CASE("interval fixtures", "[quad][interval]") {
  auto a = kgdist::integrate_interval([](double x) { return x * x; }, 0.0, 1.0);
  CHECK(a.converged);
  CHECK_THAT(a.value, WithinRel(1.0 / 3.0, 1e-14));
  auto b = kgdist::integrate_interval([](double x) { return std::sin(x); }, 0.0, pi);
  CHECK_THAT(b.value, WithinRel(2.0, 1e-14));
  auto c = kgdist::integrate_interval([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0);
  CHECK(c.converged);
  CHECK_THAT(c.value, WithinRel(2.0, 1e-9));
  CHECK(c.evaluations > 15);
  CHECK_THROWS_AS(kgdist::integrate_interval([](double x) { return x; }, 1.0, 0.0), kgdist::domain_error);
}

TEST_CASE("radial fixtures", "[quad][radial]") {
  auto g = kgdist::integrate_radial([](double r) { return std::exp(-0.5 * r * r); });
  CHECK(g.converged);
  CHECK_THAT(g.value, WithinRel(std::pow(2.0 * pi, 1.5), 1e-12));

  auto d = kgdist::integrate_radial([](double r) { return yukawa_reg_delta(r, 0.3); },
                                    QuadratureConfig{}.with_split_scale(0.3));
  CHECK_THAT(d.value, WithinAbs(-4.0 * pi, 1e-8));

  const double eps = 0.5;
  auto s = kgdist::integrate_radial(
      [eps](double r) {
        const double q = r * r + eps * eps;
        return eps * eps / (r * q * std::sqrt(q));
      },
      QuadratureConfig{}.with_split_scale(eps));
  CHECK_THAT(s.value, WithinRel(4.0 * pi * eps, 1e-10));
}

TEST_CASE("delta normalization is independent of the width", "[quad][radial]") {
  double lo = INFINITY, hi = -INFINITY;
  for (double eps : {1e-2, 1e-1, 1.0, 10.0}) {
    const auto res = kgdist::integrate_radial([eps](double r) { return yukawa_reg_delta(r, eps); },
                                              QuadratureConfig{}.with_split_scale(eps));
    CHECK_THAT(res.value, WithinAbs(-4.0 * pi, 1e-7));
    lo = std::min(lo, res.value);
    hi = std::max(hi, res.value);
  }
  CHECK(hi - lo < 1e-7);
}

TEST_CASE("linearity", "[quad][property]") {
  auto f = [](double r) { return std::exp(-r * r); };
  auto g = [](double r) { return 1.0 / (1.0 + r * r * r * r * r); };
  const double alpha = GENERATE(take(5, random(-3.0, 3.0)));
  const double beta = GENERATE(take(3, random(-3.0, 3.0)));
  const auto If = kgdist::integrate_radial(f);
  const auto Ig = kgdist::integrate_radial(g);
  const auto Ih = kgdist::integrate_radial([&](double r) { return alpha * f(r) + beta * g(r); });
  const double allowance = std::abs(alpha) * If.error_estimate + std::abs(beta) * Ig.error_estimate +
                           Ih.error_estimate + 1e-14 * (std::abs(alpha * If.value) + std::abs(beta * Ig.value));
  CHECK(std::abs(Ih.value - (alpha * If.value + beta * Ig.value)) <= allowance);
}

TEST_CASE("error estimates are honest on closed-form fixtures", "[quad][property]") {
  struct Fixture { const char* name; double value, exact, estimate; };
  std::vector<Fixture> fx;
  auto push = [&](const char* name, const kgdist::IntegralResult& r, double exact) {
    fx.push_back({name, r.value, exact, r.error_estimate});
  };
  push("x^2", kgdist::integrate_interval([](double x) { return x * x; }, 0.0, 1.0), 1.0 / 3.0);
  push("sin", kgdist::integrate_interval([](double x) { return std::sin(x); }, 0.0, pi), 2.0);
  push("1/sqrt", kgdist::integrate_interval([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0), 2.0);
  push("log", kgdist::integrate_interval([](double x) { return std::log(x); }, 0.0, 1.0), -1.0);
  push("gauss3", kgdist::integrate_radial([](double r) { return std::exp(-0.5 * r * r); }), std::pow(2 * pi, 1.5));
  push("exp", kgdist::integrate_radial([](double r) { return std::exp(-r); }), 8.0 * pi);
  for (double eps : {0.01, 0.3, 10.0})
    push("delta", kgdist::integrate_radial([eps](double r) { return yukawa_reg_delta(r, eps); },
                                           QuadratureConfig{}.with_split_scale(eps)),
         -4.0 * pi);
  for (const auto& f : fx) {
    INFO(f.name << ": value " << f.value << " exact " << f.exact << " estimate " << f.estimate);
    CHECK(std::abs(f.value - f.exact) <= 10.0 * f.estimate + 4.0 * std::numeric_limits<double>::epsilon() * std::abs(f.exact));
  }
}

TEST_CASE("non-convergence is reported, not thrown", "[quad]") {
  QuadratureConfig cfg;
  cfg.max_subdivisions = 3;
  const auto res = kgdist::integrate_interval([](double x) { return std::sin(1.0 / x); }, 1e-6, 1.0, cfg);
  CHECK_FALSE(res.converged);
  CHECK(std::isfinite(res.value));
}

TEST_CASE("converged implies the tolerance contract", "[quad][property]") {
  const double s = GENERATE(take(10, random(0.05, 20.0)));
  const auto res = kgdist::integrate_radial([s](double r) { return std::exp(-r / s) / (1.0 + r); });
  REQUIRE(res.converged);
  CHECK(res.error_estimate <= std::max(1e-12, 1e-10 * std::abs(res.value)));
}

TEST_CASE("NaN from the integrand names the abscissa", "[quad]") {
  try {
    kgdist::integrate_interval([](double x) { return x > 0.5 ? std::nan("") : x; }, 0.0, 1.0);
    FAIL("expected quadrature_error");
  } catch (const kgdist::quadrature_error& e) {
    CHECK(e.abscissa() > 0.5);
    CHECK_THAT(std::string(e.what()), Catch::Matchers::ContainsSubstring("nan"));
  }
  CHECK_THROWS_AS(kgdist::integrate_radial([](double r) { return r > 2.0 ? INFINITY : 1.0; }),
                  kgdist::quadrature_error);
}

TEST_CASE("sine transform", "[quad][oscillatory]") {
  // integral_0^inf k sin(k)/(k^2 + 1) dk = (pi/2) e^{-1}
  const auto res = kgdist::integrate_sine_transform([](double k) { return k / (k * k + 1.0); }, 1.0, 500.0);
  CHECK_THAT(res.value, WithinAbs(0.5 * pi * std::exp(-1.0), 1e-8));
  const auto few = kgdist::integrate_sine_transform([](double k) { return 1.0 / k; }, 1.0, 4.0);
  CHECK_FALSE(few.converged);
  CHECK_FALSE(few.warning.empty());
  const auto capped = kgdist::integrate_sine_transform([](double k) { return 1.0 / (1.0 + k); }, 1.0, 1e6);
  CHECK_THAT(capped.warning, Catch::Matchers::ContainsSubstring("cap"));
}

TEST_CASE("convergence order fit", "[quad][fit]") {
  const std::vector<double> eps = {0.2, 0.1, 0.05, 0.02, 0.01};
  std::vector<double> sq, lin, noisy;
  std::mt19937 rng(20261014);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (double e : eps) {
    sq.push_back(e * e);
    lin.push_back(e);
    noisy.push_back(3.0 * std::pow(e, 1.5) * (1.0 + 0.01 * u(rng)));
  }
  CHECK_THAT(kgdist::fit_convergence_order(eps, sq), WithinAbs(2.0, 1e-12));
  CHECK_THAT(kgdist::fit_convergence_order(eps, lin), WithinAbs(1.0, 1e-12));
  CHECK_THAT(kgdist::fit_convergence_order(eps, noisy), WithinAbs(1.5, 0.05));

  std::vector<double> zeros = sq;
  zeros[1] = 0.0;
  CHECK_THAT(kgdist::fit_convergence_order(eps, zeros), WithinAbs(2.0, 1e-12));
  zeros[2] = 0.0;
  zeros[3] = 0.0;
  CHECK_THROWS_AS(kgdist::fit_convergence_order(eps, zeros), kgdist::insufficient_data);

  const std::vector<double> two = {0.1, 0.05};
  CHECK_THROWS_AS(kgdist::fit_convergence_order(two, std::vector<double>{0.01, 0.0025}), kgdist::insufficient_data);
  const std::vector<double> rising = {0.01, 0.1, 0.2};
  CHECK_THROWS_AS(kgdist::fit_convergence_order(rising, std::vector<double>{1.0, 2.0, 3.0}), std::invalid_argument);
  CHECK_THROWS_AS(kgdist::fit_convergence_order(eps, std::vector<double>{1.0, 2.0}), std::invalid_argument);
}
