#pragma once

// Report model shared by every command, and its three renderings: an aligned
// text table, CSV (17 significant digits), and JSON.

#include <cmath>
#include <cstdio>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "config.hpp"
#include "verifier.hpp"

namespace kgdist {

struct CheckRow {
  std::string name;
  std::optional<double> epsilon;
  std::optional<double> mass;
  double computed = 0.0;
  std::optional<double> expected;
  std::optional<double> paper_printed;
  double abs_error_estimate = 0.0;
  bool passed = true;
  /// Free-form qualifier shown in the table (e.g. which convention).
  std::string label;
};

struct SweepBlock {
  std::string test_function;
  std::vector<SweepRow> rows;
  std::optional<double> fitted_order;
  bool passed = false;
  std::string notes;

  static SweepBlock from(const SweepReport& rep) {
    return {rep.test_function, rep.rows, rep.fitted_order, rep.passed, rep.notes};
  }
};

struct Report {
  std::string command;
  RunConfig config;
  std::vector<CheckRow> checks;
  std::vector<SweepBlock> sweeps;
  std::vector<std::string> notes;

  bool passed() const {
    for (const auto& c : checks)
      if (!c.passed) return false;
    for (const auto& s : sweeps)
      if (!s.passed) return false;
    return true;
  }
};

namespace detail {

inline std::string sci17(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", x);
  return buf;
}

inline std::string sci17(const std::optional<double>& x) { return x ? sci17(*x) : std::string(); }

inline nlohmann::json opt_json(const std::optional<double>& x) {
  if (!x || !std::isfinite(*x)) return nullptr;
  return *x;
}

inline std::string short_num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

inline std::string short_num(const std::optional<double>& x) { return x ? short_num(*x) : std::string("-"); }

}  // namespace detail

inline nlohmann::json config_to_json(const RunConfig& cfg) {
  nlohmann::json j;
  j["mass"] = cfg.mass;
  j["eps_grid"] = cfg.eps_grid;
  j["abs_tol"] = cfg.abs_tol;
  j["rel_tol"] = cfg.rel_tol;
  j["max_subdivisions"] = cfg.max_subdivisions;
  j["test_fn"] = cfg.test_fn;
  j["format"] = std::string(format_name(cfg.format));
  j["out"] = cfg.out_path ? nlohmann::json(*cfg.out_path) : nlohmann::json(nullptr);
  j["dim"] = cfg.dim;
  j["lambda_grid"] = cfg.resolved_lambda_grid();
  j["expected_scale"] = nlohmann::json::object();
  for (const auto& [k, v] : cfg.expected_scale) j["expected_scale"][k] = v;
  return j;
}

inline nlohmann::json report_to_json(const Report& rep) {
  nlohmann::json j;
  j["config"] = config_to_json(rep.config);
  j["config"]["command"] = rep.command;
  j["checks"] = nlohmann::json::array();
  for (const auto& c : rep.checks) {
    j["checks"].push_back({{"name", c.label.empty() ? c.name : c.name + ":" + c.label},
                           {"epsilon", detail::opt_json(c.epsilon)},
                           {"mass", detail::opt_json(c.mass)},
                           {"computed", detail::opt_json(c.computed)},
                           {"expected", detail::opt_json(c.expected)},
                           {"paper_printed", detail::opt_json(c.paper_printed)},
                           {"abs_error_estimate", c.abs_error_estimate},
                           {"passed", c.passed}});
  }
  j["sweeps"] = nlohmann::json::array();
  for (const auto& s : rep.sweeps) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : s.rows)
      rows.push_back({{"epsilon", r.epsilon},
                      {"pairing_value", r.pairing_value},
                      {"target", r.pairing_target},
                      {"deviation", r.defect},
                      {"abs_error_estimate", r.error_estimate}});
    j["sweeps"].push_back({{"test_function", s.test_function},
                           {"rows", rows},
                           {"fitted_order", detail::opt_json(s.fitted_order)},
                           {"passed", s.passed},
                           {"notes", s.notes}});
  }
  j["verdict"] = rep.passed() ? "pass" : "fail";
  return j;
}

inline void write_json(std::ostream& os, const Report& rep) { os << report_to_json(rep).dump(2) << '\n'; }

/// CSV. Sweep blocks use the fixed column order
/// epsilon,pairing_value,target,deviation,abs_error_estimate followed by a
/// fitted_order footer row. Check rows, when present, come first in their
/// own block.
inline void write_csv(std::ostream& os, const Report& rep) {
  if (!rep.checks.empty()) {
    os << "name,epsilon,mass,computed,expected,paper_printed,abs_error_estimate,passed\n";
    for (const auto& c : rep.checks)
      os << (c.label.empty() ? c.name : c.name + ":" + c.label) << ',' << detail::sci17(c.epsilon) << ','
         << detail::sci17(c.mass) << ',' << detail::sci17(c.computed) << ',' << detail::sci17(c.expected) << ','
         << detail::sci17(c.paper_printed) << ',' << detail::sci17(c.abs_error_estimate) << ','
         << (c.passed ? "true" : "false") << '\n';
  }
  const bool labelled = rep.sweeps.size() > 1 || !rep.checks.empty();
  for (const auto& s : rep.sweeps) {
    if (labelled) os << "# test_function=" << s.test_function << '\n';
    os << "epsilon,pairing_value,target,deviation,abs_error_estimate\n";
    for (const auto& r : s.rows)
      os << detail::sci17(r.epsilon) << ',' << detail::sci17(r.pairing_value) << ','
         << detail::sci17(r.pairing_target) << ',' << detail::sci17(r.defect) << ','
         << detail::sci17(r.error_estimate) << '\n';
    os << "fitted_order," << detail::sci17(s.fitted_order) << ",,,\n";
  }
}

inline void write_table(std::ostream& os, const Report& rep) {
  char line[512];
  os << "command: " << rep.command << "   mass: " << detail::short_num(rep.config.mass) << '\n';
  if (!rep.checks.empty()) {
    std::snprintf(line, sizeof line, "%-34s %-11s %-19s %-19s %-11s %s\n", "check", "epsilon", "computed",
                  "expected", "err.est", "status");
    os << '\n' << line;
    for (const auto& c : rep.checks) {
      const std::string name = c.label.empty() ? c.name : c.name + " [" + c.label + "]";
      std::snprintf(line, sizeof line, "%-34s %-11s %-19.12g %-19s %-11.3g %s\n", name.c_str(),
                    detail::short_num(c.epsilon).c_str(), c.computed,
                    c.expected ? detail::short_num(*c.expected).c_str() : "-", c.abs_error_estimate,
                    c.passed ? "PASS" : "FAIL");
      os << line;
      if (c.paper_printed)
        os << "    printed constant " << detail::short_num(*c.paper_printed) << " does not match the computed value\n";
    }
  }
  for (const auto& s : rep.sweeps) {
    os << "\nsweep: " << s.test_function << '\n';
    std::snprintf(line, sizeof line, "  %-11s %-19s %-19s %-13s %s\n", "epsilon", "pairing", "target", "deviation",
                  "err.est");
    os << line;
    for (const auto& r : s.rows) {
      std::snprintf(line, sizeof line, "  %-11.4g %-19.12g %-19.12g %-13.4e %.3g\n", r.epsilon, r.pairing_value,
                    r.pairing_target, r.defect, r.error_estimate);
      os << line;
    }
    os << "  fitted order: " << detail::short_num(s.fitted_order) << "   " << (s.passed ? "PASS" : "FAIL") << '\n';
    os << "  " << s.notes << '\n';
  }
  for (const auto& n : rep.notes) os << "note: " << n << '\n';
  os << "\nverdict: " << (rep.passed() ? "pass" : "fail") << '\n';
}

inline void write_report(std::ostream& os, const Report& rep) {
  switch (rep.config.format) {
    case OutputFormat::table: write_table(os, rep); break;
    case OutputFormat::csv: write_csv(os, rep); break;
    case OutputFormat::json: write_json(os, rep); break;
  }
}

}  // namespace kgdist
