#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "kgdist/mollifier.hpp"
#include "kgdist/quad.hpp"

using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;
using kgdist::Mollification;

TEST_CASE("Mollification rejects non-positive widths", "[mollifier]") {
  CHECK_THROWS_AS(Mollification(0.0), kgdist::domain_error);
  CHECK_THROWS_AS(Mollification(-0.1), kgdist::domain_error);
  CHECK_THROWS_AS(Mollification(std::nan("")), kgdist::domain_error);
  CHECK(Mollification(0.25).epsilon() == 0.25);
}

TEST_CASE("regularized step values", "[mollifier]") {
  for (double eps : {1e-8, 0.1, 3.0}) CHECK(kgdist::heaviside_reg(0.0, Mollification(eps)) == 0.5);
  CHECK_THAT(kgdist::heaviside_reg(0.1, Mollification(0.1)), WithinRel(0.8413447460685429485852, 1e-14));
  CHECK(kgdist::heaviside_limit(0.0) == 0.5);
  CHECK(kgdist::heaviside_limit(3.7) == 1.0);
  CHECK(kgdist::heaviside_limit(-2.0) == 0.0);
}

TEST_CASE("sum rule and monotonicity", "[mollifier][property]") {
  const double x = GENERATE(take(40, random(-5.0, 5.0)));
  const double eps = GENERATE(take(5, random(0.01, 2.0)));
  const Mollification moll(eps);
  CHECK_THAT(kgdist::heaviside_reg(x, moll) + kgdist::heaviside_reg(-x, moll), WithinAbs(1.0, 1e-15));
  const double v = kgdist::heaviside_reg(x, moll);
  CHECK(v >= 0.0);
  CHECK(v <= 1.0);
  CHECK(kgdist::heaviside_reg(x + 0.01 * eps, moll) >= v);
}

TEST_CASE("pointwise limit is approached monotonically", "[mollifier][property]") {
  for (double x : {-0.5, -0.01, 0.003, 0.2, 2.0}) {
    double previous = INFINITY;
    for (double eps = 1e-1; eps >= 1e-8; eps /= 10.0) {
      const double dev = std::abs(kgdist::heaviside_reg(x, Mollification(eps)) - kgdist::heaviside_limit(x));
      INFO("x = " << x << ", eps = " << eps);
      CHECK(dev <= previous);
      previous = dev;
    }
    CHECK(previous < 1e-12);
  }
}

TEST_CASE("delta_reg is the derivative of the step", "[mollifier]") {
  CHECK_THAT(kgdist::delta_reg(0.0, Mollification(1.0)), WithinRel(0.3989422804014327, 1e-15));
  const double eps = GENERATE(take(8, random(0.05, 2.0)));
  const double x = GENERATE(take(4, random(-3.0, 3.0))) * eps;
  const Mollification moll(eps);
  const double h = 1e-5 * eps;
  const double fd = (kgdist::heaviside_reg(x + h, moll) - kgdist::heaviside_reg(x - h, moll)) / (2.0 * h);
  INFO("x = " << x << ", eps = " << eps);
  CHECK_THAT(kgdist::delta_reg(x, moll), WithinRel(fd, 1e-6));
  CHECK(kgdist::delta_reg(-x, moll) == kgdist::delta_reg(x, moll));
  CHECK(kgdist::delta_reg(x, moll) > 0.0);
}

TEST_CASE("delta_reg normalization and weak limit", "[mollifier]") {
  for (double eps : {0.01, 1.0, 100.0}) {
    const Mollification moll(eps);
    const auto res =
        kgdist::integrate_interval([&](double x) { return kgdist::delta_reg(x, moll); }, -40.0 * eps, 40.0 * eps);
    CHECK_THAT(res.value, WithinRel(1.0, 1e-10));
  }
  // Smooth bounded psi: the pairing tends to psi(0).
  const Mollification moll(1e-4);
  const auto psi = [](double x) { return std::cos(x) + 0.5 * std::sin(3.0 * x) + 1.0 / (1.0 + x * x); };
  const auto res = kgdist::integrate_interval([&](double x) { return kgdist::delta_reg(x, moll) * psi(x); },
                                              -40.0 * moll.epsilon(), 40.0 * moll.epsilon());
  CHECK_THAT(res.value, WithinAbs(psi(0.0), 1e-6));
}
