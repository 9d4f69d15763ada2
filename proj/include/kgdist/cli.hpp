#pragma once

// Command implementations behind the kgverify executable and the argument
// parser that drives them. run_cli returns the process exit status:
// 0 every check passed, 1 a check failed (or a Gamma pole was hit),
// 2 usage or configuration error.

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "config.hpp"
#include "dimreg.hpp"
#include "kg_fields.hpp"
#include "quad.hpp"
#include "report.hpp"
#include "verifier.hpp"

namespace kgdist {

inline constexpr int exit_pass = 0;
inline constexpr int exit_check_failed = 1;
inline constexpr int exit_usage = 2;

/// Acceptance tolerances for the identity rows of `verify`.
struct IdentityTolerance {
  double value;
  bool relative;
};

inline IdentityTolerance identity_tolerance(Identity which) {
  switch (which) {
    case Identity::TGB1: return {1e-7, false};
    case Identity::SECOND_TERM: return {1e-8, true};
    case Identity::QAZ2:
    case Identity::QAZ3: return {1e-5, true};
  }
  return {0.0, false};
}

inline constexpr double tgb1_spread_tolerance = 1e-7;
inline constexpr double qaz2_order_tolerance = 0.05;
inline constexpr double cutoff_order_tolerance = 0.05;

inline Report cmd_verify(const RunConfig& cfg) {
  cfg.validate();
  const auto tests = select_test_functions(cfg.test_fn);
  const FieldParams p(cfg.mass);
  const auto q = cfg.quadrature();
  Report rep{"verify", cfg, {}, {}, {}};

  std::vector<double> tgb1_values;
  std::vector<double> qaz2_values;
  for (auto id : {Identity::TGB1, Identity::SECOND_TERM, Identity::QAZ2, Identity::QAZ3}) {
    const std::string name(identity_name(id));
    const auto scale_it = cfg.expected_scale.find(name);
    const double scale = scale_it == cfg.expected_scale.end() ? 1.0 : scale_it->second;
    const auto tol = identity_tolerance(id);
    for (double eps : cfg.eps_grid) {
      const auto chk = verify_identity(id, p, Mollification(eps), q);
      const double expected = chk.expected * scale;
      const double allowed = tol.relative ? tol.value * std::abs(expected) : tol.value;
      const bool ok = chk.converged && std::abs(chk.computed - expected) <= allowed;
      rep.checks.push_back({name, eps, cfg.mass, chk.computed, expected, chk.paper_printed, chk.error_estimate, ok, ""});
      if (id == Identity::TGB1) tgb1_values.push_back(chk.computed);
      if (id == Identity::QAZ2) qaz2_values.push_back(chk.computed);
    }
  }

  const auto [lo, hi] = std::minmax_element(tgb1_values.begin(), tgb1_values.end());
  rep.checks.push_back(
      {"TGB1_spread", std::nullopt, cfg.mass, *hi - *lo, 0.0, std::nullopt, 0.0, *hi - *lo < tgb1_spread_tolerance, ""});

  if (cfg.eps_grid.size() >= 3) {
    const double order = fit_convergence_order(cfg.eps_grid, qaz2_values);
    rep.checks.push_back({"QAZ2_order", std::nullopt, cfg.mass, order, 2.0, std::nullopt, 0.0,
                          std::abs(order - 2.0) <= qaz2_order_tolerance, ""});
  } else {
    rep.notes.push_back("insufficient points for order fitting (eps grid has fewer than 3 values)");
  }

  for (const auto& psi : tests) {
    for (double eps : cfg.eps_grid) {
      const auto ibp = check_integration_by_parts(p, Mollification(eps), psi, q);
      rep.checks.push_back({"IBP[" + psi.name + "]", eps, cfg.mass, ibp.residual.value, ibp.adjoint.value,
                            std::nullopt, ibp.allowance, ibp.passed, ""});
    }
  }
  for (const auto& psi : tests) rep.sweeps.push_back(SweepBlock::from(sweep_delta_defect(p, psi, cfg.eps_grid, q)));
  return rep;
}

inline Report cmd_sweep(const RunConfig& cfg) {
  cfg.validate();
  const auto tests = select_test_functions(cfg.test_fn);
  const FieldParams p(cfg.mass);
  Report rep{"sweep", cfg, {}, {}, {}};
  for (const auto& psi : tests)
    rep.sweeps.push_back(SweepBlock::from(sweep_delta_defect(p, psi, cfg.eps_grid, cfg.quadrature())));
  return rep;
}

/// Throws pole_error for D at the Gamma pole; the caller maps that to exit 1.
inline Report cmd_dimreg(const RunConfig& cfg) {
  cfg.validate();
  const FieldParams p(cfg.mass);
  const Dimension dim(cfg.dim);
  const double origin = dimreg_origin(p, dim);
  const bool physical = cfg.dim == 3.0;
  Report rep{"dimreg", cfg, {}, {}, {}};
  rep.checks.push_back({"dimreg_origin", std::nullopt, cfg.mass, origin,
                        physical ? std::optional<double>(-cfg.mass) : std::nullopt, std::nullopt, 0.0,
                        !physical || std::abs(origin + cfg.mass) <= 1e-12 * cfg.mass, ""});

  const auto lambdas = cfg.resolved_lambda_grid();
  std::vector<double> inverse, differences;
  for (double lambda : lambdas) {
    const double sub = cutoff_subtracted(p, lambda);
    const double diff = std::abs(sub - origin);
    // arctan(m/L) <= m/L bounds the leading 2 m^2/(pi L) behaviour.
    const double bound = 2.0 * cfg.mass * cfg.mass / (std::numbers::pi * lambda) * 1.01;
    std::ostringstream label;
    label << "Lambda=" << lambda;
    rep.checks.push_back({"cutoff_subtracted", std::nullopt, cfg.mass, sub, origin, std::nullopt, 0.0,
                          !physical || diff <= bound, label.str()});
    inverse.push_back(1.0 / lambda);
    differences.push_back(diff);
  }
  if (physical) {
    try {
      const double order = fit_convergence_order(inverse, differences);
      rep.checks.push_back({"cutoff_order", std::nullopt, cfg.mass, order, 1.0, std::nullopt, 0.0,
                            std::abs(order - 1.0) <= cutoff_order_tolerance, ""});
    } catch (const insufficient_data&) {
      rep.notes.push_back("insufficient Lambda points for order fitting");
    }
  } else {
    rep.notes.push_back("D != 3: cutoff rows are informational; the cutoff integral is three-dimensional");
  }
  return rep;
}

inline const std::vector<std::string>& eval_fields() {
  static const std::vector<std::string> names = {"yukawa", "yukawa_reg", "phi_dist", "phi_fourier", "residual"};
  return names;
}

/// Single evaluation. Domain violations surface as kgdist::domain_error.
/// The mollification width is the first eps of the grid.
inline Report cmd_eval(const std::string& field, double r, const RunConfig& cfg) {
  cfg.validate();
  const FieldParams p(cfg.mass);
  const Mollification moll(cfg.eps_grid.front());
  const double eps = moll.epsilon();
  Report rep{"eval", cfg, {}, {}, {}};
  auto row = [&](std::string name, double value, std::string label = "") {
    rep.checks.push_back({std::move(name), eps, cfg.mass, value, std::nullopt, std::nullopt, 0.0, true,
                          std::move(label)});
  };
  if (field == "yukawa") {
    row("yukawa", yukawa(r, p));
  } else if (field == "yukawa_reg") {
    row("yukawa_reg", yukawa_reg(r, p, moll));
  } else if (field == "phi_dist") {
    if (r == 0.0) {
      row("phi_dist", phi_origin_paper(p), "limit_prescription");
      row("phi_dist", phi_dist(0.0, p, moll), "smooth_extension");
    } else {
      row("phi_dist", phi_dist(r, p, moll));
    }
  } else if (field == "phi_fourier") {
    row("phi_fourier", phi_fourier(r, p));
  } else if (field == "residual") {
    row("residual", kg_residual_phi_dist(r, p, moll));
  } else {
    throw config_error("field: unknown '" + field + "'");
  }
  return rep;
}

namespace detail {

inline int emit(const Report& rep, std::ostream& out, std::ostream& err) {
  if (rep.config.out_path) {
    std::ofstream file(*rep.config.out_path, std::ios::binary);
    if (!file) {
      err << "error: out: cannot open '" << *rep.config.out_path << "' for writing\n";
      return exit_usage;
    }
    write_report(file, rep);
  } else {
    write_report(out, rep);
  }
  return rep.passed() ? exit_pass : exit_check_failed;
}

}  // namespace detail

inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Numerical verification of the erf-mollified point-source Klein-Gordon solution", "kgverify"};
  app.require_subcommand(1);
  app.fallthrough();

  double mass = 0.0;
  std::vector<double> eps;
  double abs_tol = 0.0, rel_tol = 0.0;
  std::string test_fn, format, out_path, config_path;
  auto* o_mass = app.add_option("--mass", mass, "Klein-Gordon mass m (> 0)");
  auto* o_eps = app.add_option("--eps", eps, "mollification width; repeatable, strictly decreasing")->delimiter(',');
  auto* o_abs = app.add_option("--abs-tol", abs_tol, "quadrature absolute tolerance");
  auto* o_rel = app.add_option("--rel-tol", rel_tol, "quadrature relative tolerance");
  auto* o_fn = app.add_option("--test-fn", test_fn, "gaussian:SIGMA | poly_gaussian | bump:R | builtin (comma list)");
  auto* o_fmt = app.add_option("--format", format, "table | csv | json");
  auto* o_out = app.add_option("--out", out_path, "write the report to PATH");
  app.add_option("--config", config_path, "key = value config file; flags override it");

  auto* verify = app.add_subcommand("verify", "run every identity, pairing and sweep check");
  auto* sweep = app.add_subcommand("sweep", "delta-defect series over the eps grid");
  auto* dimreg = app.add_subcommand("dimreg", "origin value by continuation in D against a momentum cutoff");
  double dim_value = 3.0;
  std::vector<double> lambdas;
  auto* o_dim = dimreg->add_option("--dim", dim_value, "spatial dimension D in (0, 4)");
  auto* o_lambda = dimreg->add_option("--lambda", lambdas, "momentum cutoff; repeatable")->delimiter(',');
  auto* eval = app.add_subcommand("eval", "evaluate one field at one radius");
  std::string field;
  std::string radius_text;
  eval->add_option("field", field, "yukawa | yukawa_reg | phi_dist | phi_fourier | residual")->required();
  eval->add_option("r", radius_text, "radius")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return exit_pass;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return exit_pass;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return exit_usage;
  }

  RunConfig cfg;
  try {
    if (!config_path.empty()) apply_config_file(config_path, cfg);
    if (o_mass->count()) cfg.mass = mass;
    if (o_eps->count()) cfg.eps_grid = eps;
    if (o_abs->count()) cfg.abs_tol = abs_tol;
    if (o_rel->count()) cfg.rel_tol = rel_tol;
    if (o_fn->count()) cfg.test_fn = test_fn;
    if (o_fmt->count()) cfg.format = parse_format(format);
    if (o_out->count()) cfg.out_path = out_path;
    if (o_dim->count()) cfg.dim = dim_value;
    if (o_lambda->count()) cfg.lambda_grid = lambdas;
    cfg.validate();
    select_test_functions(cfg.test_fn);
  } catch (const config_error& e) {
    err << "error: " << e.what() << '\n';
    return exit_usage;
  }

  try {
    if (verify->parsed()) return detail::emit(cmd_verify(cfg), out, err);
    if (sweep->parsed()) return detail::emit(cmd_sweep(cfg), out, err);
    if (dimreg->parsed()) {
      try {
        return detail::emit(cmd_dimreg(cfg), out, err);
      } catch (const pole_error& e) {
        err << "error: " << e.what() << '\n';
        return exit_check_failed;
      }
    }
    if (eval->parsed()) {
      const double r = detail::parse_real("r", radius_text);
      try {
        return detail::emit(cmd_eval(field, r, cfg), out, err);
      } catch (const domain_error& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
      }
    }
  } catch (const config_error& e) {
    err << "error: " << e.what() << '\n';
    return exit_usage;
  } catch (const domain_error& e) {
    err << "error: " << e.what() << '\n';
    return exit_usage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_check_failed;
  }
  return exit_usage;
}

inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv;
  argv.push_back("kgverify");
  for (const auto& a : args) argv.push_back(a.c_str());
  return run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace kgdist
