#pragma once

// Run configuration for the command-line front end, the flat `key = value`
// config-file reader, and the test-function selector syntax.

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "quad.hpp"
#include "verifier.hpp"

namespace kgdist {

/// Invalid configuration; maps to exit status 2. The message names the field.
class config_error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

enum class OutputFormat { table, csv, json };

inline std::string_view format_name(OutputFormat f) {
  switch (f) {
    case OutputFormat::table: return "table";
    case OutputFormat::csv: return "csv";
    case OutputFormat::json: return "json";
  }
  return "table";
}

inline OutputFormat parse_format(std::string_view s) {
  if (s == "table") return OutputFormat::table;
  if (s == "csv") return OutputFormat::csv;
  if (s == "json") return OutputFormat::json;
  throw config_error("format: expected one of table, csv, json; got '" + std::string(s) + "'");
}

struct RunConfig {
  double mass = 1.0;
  std::vector<double> eps_grid = {0.2, 0.1, 0.05, 0.02, 0.01, 0.005};
  double abs_tol = QuadratureConfig{}.abs_tol;
  double rel_tol = QuadratureConfig{}.rel_tol;
  int max_subdivisions = QuadratureConfig{}.max_subdivisions;
  /// Comma-separated selectors: gaussian:SIGMA, poly_gaussian, bump:R, builtin.
  std::string test_fn = "gaussian:1";
  OutputFormat format = OutputFormat::table;
  std::optional<std::string> out_path;
  double dim = 3.0;
  /// Empty means mass * {1e2, 1e3, 1e4, 1e5, 1e6}.
  std::vector<double> lambda_grid;
  /// Multiplies the closed-form expected value of an identity check.
  /// Exists so that fixtures can corrupt one constant on purpose.
  std::map<std::string, double> expected_scale;

  QuadratureConfig quadrature() const {
    QuadratureConfig q;
    q.abs_tol = abs_tol;
    q.rel_tol = rel_tol;
    q.max_subdivisions = max_subdivisions;
    return q;
  }

  std::vector<double> resolved_lambda_grid() const {
    if (!lambda_grid.empty()) return lambda_grid;
    return {mass * 1e2, mass * 1e3, mass * 1e4, mass * 1e5, mass * 1e6};
  }

  void validate() const {
    if (!(mass > 0.0) || !std::isfinite(mass)) throw config_error("mass must be positive");
    if (eps_grid.empty()) throw config_error("eps: grid must not be empty");
    for (std::size_t i = 0; i < eps_grid.size(); ++i) {
      if (!(eps_grid[i] > 0.0) || !std::isfinite(eps_grid[i])) throw config_error("eps: values must be positive");
      if (i > 0 && !(eps_grid[i] < eps_grid[i - 1]))
        throw config_error("eps: grid must be strictly decreasing");
    }
    if (!(abs_tol >= 0.0) || !std::isfinite(abs_tol)) throw config_error("abs_tol must be nonnegative");
    if (!(rel_tol >= 0.0) || !std::isfinite(rel_tol)) throw config_error("rel_tol must be nonnegative");
    if (!(abs_tol + rel_tol > 0.0)) throw config_error("abs_tol/rel_tol: at least one tolerance must be positive");
    if (max_subdivisions < 1) throw config_error("max_subdivisions must be positive");
    if (!std::isfinite(dim)) throw config_error("dim must be finite");
    const auto lambdas = lambda_grid;
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
      if (!(lambdas[i] > 0.0) || !std::isfinite(lambdas[i])) throw config_error("lambda: values must be positive");
      if (i > 0 && !(lambdas[i] > lambdas[i - 1])) throw config_error("lambda: grid must be strictly increasing");
    }
    for (const auto& [key, factor] : expected_scale) {
      if (!identity_from_name(key)) throw config_error("expected_scale." + key + ": unknown identity");
      if (!std::isfinite(factor)) throw config_error("expected_scale." + key + ": factor must be finite");
    }
  }
};

namespace detail {

inline std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

inline double parse_real(std::string_view field, std::string_view text) {
  const std::string t = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size())
    throw config_error(std::string(field) + ": not a number: '" + t + "'");
  return v;
}

inline std::vector<double> parse_real_list(std::string_view field, std::string_view text) {
  std::vector<double> out;
  std::string item;
  std::istringstream in{std::string(text)};
  while (std::getline(in, item, ',')) {
    if (trim(item).empty()) continue;
    out.push_back(parse_real(field, item));
  }
  if (out.empty()) throw config_error(std::string(field) + ": empty list");
  return out;
}

}  // namespace detail

/// Applies `key = value` lines from a stream onto cfg. Blank lines and
/// lines starting with '#' are skipped. List values are comma-separated.
inline void apply_config_stream(std::istream& in, RunConfig& cfg) {
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = detail::trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw config_error("config line " + std::to_string(lineno) + ": expected 'key = value'");
    const std::string key = detail::trim(std::string_view(t).substr(0, eq));
    const std::string value = detail::trim(std::string_view(t).substr(eq + 1));
    if (key == "mass") cfg.mass = detail::parse_real(key, value);
    else if (key == "eps") cfg.eps_grid = detail::parse_real_list(key, value);
    else if (key == "abs_tol") cfg.abs_tol = detail::parse_real(key, value);
    else if (key == "rel_tol") cfg.rel_tol = detail::parse_real(key, value);
    else if (key == "max_subdivisions") {
      const double v = detail::parse_real(key, value);
      if (v != std::floor(v) || v < 1 || v > 1e8) throw config_error("max_subdivisions must be a positive integer");
      cfg.max_subdivisions = static_cast<int>(v);
    } else if (key == "test_fn") cfg.test_fn = value;
    else if (key == "format") cfg.format = parse_format(value);
    else if (key == "out") cfg.out_path = value;
    else if (key == "dim") cfg.dim = detail::parse_real(key, value);
    else if (key == "lambda") cfg.lambda_grid = detail::parse_real_list(key, value);
    else if (key.rfind("expected_scale.", 0) == 0) cfg.expected_scale[key.substr(15)] = detail::parse_real(key, value);
    else throw config_error("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
  }
}

inline void apply_config_file(const std::string& path, RunConfig& cfg) {
  std::ifstream in(path);
  if (!in) throw config_error("config: cannot open '" + path + "'");
  apply_config_stream(in, cfg);
}

/// Resolves a selector list such as "gaussian:1,bump:3" or "builtin".
inline std::vector<TestFunction> select_test_functions(std::string_view selector) {
  std::vector<TestFunction> out;
  std::string item;
  std::istringstream in{std::string(selector)};
  while (std::getline(in, item, ',')) {
    const std::string s = detail::trim(item);
    if (s.empty()) continue;
    const auto colon = s.find(':');
    const std::string kind = s.substr(0, colon);
    const std::optional<std::string> arg =
        colon == std::string::npos ? std::nullopt : std::optional<std::string>(s.substr(colon + 1));
    try {
      if (kind == "builtin" && !arg) {
        for (auto& f : builtin_test_functions()) out.push_back(std::move(f));
      } else if (kind == "gaussian") {
        out.push_back(gaussian_test_function(arg ? detail::parse_real("test_fn", *arg) : 1.0));
      } else if (kind == "poly_gaussian" && !arg) {
        out.push_back(poly_gaussian_test_function());
      } else if (kind == "bump") {
        out.push_back(bump_test_function(arg ? detail::parse_real("test_fn", *arg) : 1.0));
      } else {
        throw config_error("test_fn: unknown selector '" + s + "'");
      }
    } catch (const domain_error& e) {
      throw config_error(std::string("test_fn: ") + e.what());
    }
  }
  if (out.empty()) throw config_error("test_fn: no test function selected");
  return out;
}

}  // namespace kgdist
