#pragma once

#include <cstdio>
#include <stdexcept>
#include <string>

namespace kgdist {

/// Argument outside the mathematical domain of an operation.
class domain_error : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// Gamma-function pole (or too close to one). Carries the offending argument.
class pole_error : public domain_error {
public:
  pole_error(const std::string& what, double argument)
      : domain_error(what), argument_(argument) {}

  double argument() const noexcept { return argument_; }

private:
  double argument_;
};

/// Integrand produced a non-finite value.
class quadrature_error : public std::runtime_error {
public:
  quadrature_error(const std::string& what, double abscissa)
      : std::runtime_error(what), abscissa_(abscissa) {}

  double abscissa() const noexcept { return abscissa_; }

private:
  double abscissa_;
};

/// Too few usable points for a least-squares fit.
class insufficient_data : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

namespace detail {

inline std::string fmt_real(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace detail

}  // namespace kgdist
