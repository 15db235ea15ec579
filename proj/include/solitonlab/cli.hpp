#pragma once

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "completeness.hpp"
#include "errors.hpp"
#include "families.hpp"
#include "fd_oracle.hpp"
#include "geometry.hpp"
#include "grid.hpp"
#include "parallel.hpp"
#include "profile.hpp"
#include "soliton.hpp"

// Command front end: every subcommand produces one deterministic report with
// the fixed shape {command, config, verdicts[], values[], errors[], version}.
// Identical configs produce byte-identical JSON.

namespace solitonlab::cli {

using ordered_json = nlohmann::ordered_json;

inline constexpr const char* kVersion = "0.1.0";

struct GridSpec {
  double rmin = 0.1;
  double rmax = 10.0;
  int count = 32;
  std::string spacing = "log";

  std::vector<double> build() const {
    return spacing == "log" ? log_grid(rmin, rmax, count)
                            : linear_grid(rmin, rmax, count);
  }
};

struct RunConfig {
  std::string command;
  int n = 4;
  std::string signature;  // empty -> all '+'
  std::string profile = "family";
  double A = 0.0;
  double k2 = 1.0;
  double rho = 0.0;
  double lambda = 0.0;
  GridSpec grid;
  double tol = -1.0;  // negative -> per-command default
  double fd_step = 1e-4;
  std::string target = "family";
  std::string reference = "cylinder";
  bool swapped_exponents = false;
  std::string out;            // empty -> stdout
  std::string format = "json";
};

struct RunResult {
  ordered_json report;
  bool ok = false;
};

namespace detail {

inline bool known_profile(const std::string& name) {
  return name == "family" || name == "cylinder" || name == "kazdan-negative";
}

inline Signature make_signature(const RunConfig& cfg) {
  if (cfg.signature.empty()) return Signature::euclidean(cfg.n);
  return Signature::parse(cfg.signature);
}

inline RadialProfile make_profile(const std::string& name,
                                  const RunConfig& cfg) {
  if (name == "family") {
    return family_profile(ZeroCurvatureFamily(cfg.A, cfg.k2, cfg.n));
  }
  if (name == "cylinder") {
    return cylinder_profile();
  }
  if (name == "kazdan-negative") {
    return kazdan_negative_profile(cfg.n, cfg.swapped_exponents
                                              ? KazdanVariant::swapped_exponents
                                              : KazdanVariant::standard);
  }
  throw ConfigError("unknown profile '" + name + "'");
}

inline ordered_json grid_json(const GridSpec& g) {
  return ordered_json{{"rmin", g.rmin},
                      {"rmax", g.rmax},
                      {"count", g.count},
                      {"spacing", g.spacing}};
}

inline ordered_json error_entry(const std::string& context,
                                const std::string& message) {
  return ordered_json{{"context", context}, {"message", message}};
}

inline std::string r_context(double r) {
  std::ostringstream s;
  s.precision(17);
  s << "r=" << r;
  return s.str();
}

// Per-index sweep with deterministic result slots; evaluation errors land in
// the slot instead of aborting the run.
struct SweepSlot {
  ordered_json row;
  std::optional<std::string> error;
  double r = 0.0;
};

template <class F>
inline std::vector<SweepSlot> sweep(const std::vector<double>& rs, F&& eval) {
  std::vector<SweepSlot> slots(rs.size());
  parallel_for(rs.size(), [&](std::size_t i) {
    slots[i].r = rs[i];
    try {
      slots[i].row = eval(rs[i]);
    } catch (const EvalError& e) {
      slots[i].error = e.what();
    }
  });
  return slots;
}

inline void emit_sweep(const std::vector<SweepSlot>& slots,
                       ordered_json& values, ordered_json& errors) {
  for (const auto& slot : slots) {
    if (slot.error) {
      errors.push_back(error_entry(r_context(slot.r), *slot.error));
    } else {
      values.push_back(slot.row);
    }
  }
}

}  // namespace detail

inline void validate(const RunConfig& cfg) {
  std::vector<std::string> problems;
  if (cfg.command.empty()) problems.push_back("missing command");
  if (cfg.n < 3) problems.push_back("n must be >= 3");
  if (!cfg.signature.empty()) {
    if (static_cast<int>(cfg.signature.size()) != cfg.n) {
      problems.push_back("signature length must equal n");
    }
    for (char c : cfg.signature) {
      if (c != '+' && c != '-') {
        problems.push_back("signature may contain only '+' and '-'");
        break;
      }
    }
  }
  if (!(cfg.grid.rmin > 0.0)) problems.push_back("grid rmin must be > 0");
  if (!(cfg.grid.rmax > cfg.grid.rmin)) {
    problems.push_back("grid rmax must exceed rmin");
  }
  if (cfg.grid.count < 2) problems.push_back("grid count must be >= 2");
  if (cfg.grid.spacing != "log" && cfg.grid.spacing != "linear") {
    problems.push_back("grid spacing must be 'log' or 'linear'");
  }
  if (!(cfg.k2 > 0.0)) problems.push_back("k2 must be > 0");
  if (!(cfg.fd_step > 0.0)) problems.push_back("fd step must be > 0");
  if (cfg.format != "json" && cfg.format != "csv") {
    problems.push_back("format must be 'json' or 'csv'");
  }
  if ((cfg.command == "curvature" || cfg.command == "oracle-compare") &&
      !detail::known_profile(cfg.profile)) {
    problems.push_back("unknown profile '" + cfg.profile + "'");
  }
  if (cfg.command == "completeness") {
    if (cfg.target != "family" && cfg.target != "kazdan-negative") {
      problems.push_back("completeness target must be 'family' or 'kazdan-negative'");
    }
    if (cfg.reference != "cylinder" && cfg.reference != "family") {
      problems.push_back("completeness reference must be 'cylinder' or 'family'");
    }
  }
  if (cfg.command == "kazdan" && !(cfg.A > 0.0)) {
    problems.push_back("kazdan zero leg requires A > 0");
  }
  if (!problems.empty()) {
    std::string joined = "invalid configuration:";
    for (const auto& p : problems) joined += "\n  - " + p;
    throw ConfigError(joined);
  }
}

namespace detail {

inline RunResult run_curvature(const RunConfig& cfg) {
  const Signature sig = make_signature(cfg);
  const RadialProfile prof = make_profile(cfg.profile, cfg);
  const double tol =
      cfg.tol > 0.0 ? cfg.tol : (cfg.profile == "cylinder" ? 1e-9 : 1e-8);
  const std::vector<double> rs = cfg.grid.build();

  ordered_json report;
  report["command"] = cfg.command;
  report["config"] = {{"n", cfg.n},
                      {"signature", sig.str()},
                      {"profile", prof.id()},
                      {"A", cfg.A},
                      {"k2", cfg.k2},
                      {"grid", grid_json(cfg.grid)},
                      {"tolerance", tol}};

  ordered_json values = ordered_json::array();
  ordered_json errors = ordered_json::array();
  const auto slots = sweep(rs, [&](double r) {
    const PointN p = point_with_invariant(r, sig, 0);
    const double k = scalar_curvature(prof, sig, p);
    const double k_radial = radial_scalar_curvature(prof, cfg.n, r);
    return ordered_json{{"r", r}, {"K", k}, {"K_radial", k_radial}};
  });
  emit_sweep(slots, values, errors);

  double max_abs = 0.0, k_min = 0.0, k_max = 0.0;
  bool first = true;
  for (const auto& row : values) {
    const double k = row["K"].get<double>();
    max_abs = std::max(max_abs, std::abs(k));
    k_min = first ? k : std::min(k_min, k);
    k_max = first ? k : std::max(k_max, k);
    first = false;
  }

  ordered_json verdicts = ordered_json::array();
  bool pass = false;
  if (cfg.profile == "family") {
    pass = !values.empty() && max_abs < tol;
    verdicts.push_back({{"name", "scalar_curvature_vanishes"},
                        {"pass", pass},
                        {"max_abs_K", max_abs},
                        {"tolerance", tol}});
  } else if (cfg.profile == "cylinder") {
    const double target = static_cast<double>((cfg.n - 1) * (cfg.n - 2));
    const double dev =
        std::max(std::abs(k_min - target), std::abs(k_max - target));
    pass = !values.empty() && dev < tol;
    verdicts.push_back({{"name", "scalar_curvature_constant"},
                        {"pass", pass},
                        {"expected", target},
                        {"max_deviation", dev},
                        {"tolerance", tol}});
  } else {
    pass = !values.empty() && k_max < 0.0;
    verdicts.push_back({{"name", "scalar_curvature_negative"},
                        {"pass", pass},
                        {"max_K", k_max}});
  }

  report["verdicts"] = verdicts;
  report["values"] = values;
  report["errors"] = errors;
  report["version"] = kVersion;
  return {report, pass};
}

inline RunResult run_verify_soliton(const RunConfig& cfg) {
  const Signature sig = make_signature(cfg);
  const RadialProfile psi = make_profile("family", cfg);
  const RadialProfile h = constant_profile(0.0);
  const SolitonParams sp(cfg.rho, cfg.lambda, sig);
  const double tol = cfg.tol > 0.0 ? cfg.tol : 1e-10;
  const std::vector<double> rs = cfg.grid.build();

  ordered_json report;
  report["command"] = cfg.command;
  report["config"] = {{"n", cfg.n},
                      {"signature", sig.str()},
                      {"psi", psi.id()},
                      {"h", h.id()},
                      {"A", cfg.A},
                      {"k2", cfg.k2},
                      {"rho", cfg.rho},
                      {"lambda", cfg.lambda},
                      {"grid", grid_json(cfg.grid)},
                      {"tolerance", tol}};

  ordered_json values = ordered_json::array();
  ordered_json errors = ordered_json::array();
  const auto slots = sweep(rs, [&](double r) {
    const auto [e1, e2] = ode_residual(psi, h, sp, r);
    double offdiag = 0.0, diag = 0.0;
    for (int v = 0; v < 2; ++v) {
      const PdeResidual res =
          pde_residual(psi, h, sp, point_with_invariant(r, sig, v));
      offdiag = std::max(offdiag, res.offdiag_max());
      diag = std::max(diag, res.diag_max());
    }
    return ordered_json{{"r", r},
                        {"pde_offdiag_max", offdiag},
                        {"pde_diag_max", diag},
                        {"ode_eq1", e1},
                        {"ode_eq2", e2}};
  });
  emit_sweep(slots, values, errors);

  double offdiag = 0.0, diag = 0.0, ode1 = 0.0, ode2 = 0.0;
  for (const auto& row : values) {
    offdiag = std::max(offdiag, row["pde_offdiag_max"].get<double>());
    diag = std::max(diag, row["pde_diag_max"].get<double>());
    ode1 = std::max(ode1, std::abs(row["ode_eq1"].get<double>()));
    ode2 = std::max(ode2, std::abs(row["ode_eq2"].get<double>()));
  }
  const bool pass = !values.empty() && offdiag < tol && diag < tol &&
                    ode1 < tol && ode2 < tol;

  report["verdicts"] = ordered_json::array(
      {{{"name", "soliton_residuals_within_tol"},
        {"pass", pass},
        {"pde_offdiag_max", offdiag},
        {"pde_diag_max", diag},
        {"ode_eq1_max", ode1},
        {"ode_eq2_max", ode2},
        {"tolerance", tol}}});
  report["values"] = values;
  report["errors"] = errors;
  report["version"] = kVersion;
  return {report, pass};
}

inline RunResult run_family(const RunConfig& cfg) {
  const ZeroCurvatureFamily fam(cfg.A, cfg.k2, cfg.n);
  const RadialProfile prof = family_profile(fam);
  const double tol = cfg.tol > 0.0 ? cfg.tol : 1e-8;
  const std::vector<double> rs = cfg.grid.build();

  ordered_json report;
  report["command"] = cfg.command;
  report["config"] = {{"n", cfg.n},
                      {"A", cfg.A},
                      {"k2", cfg.k2},
                      {"grid", grid_json(cfg.grid)},
                      {"tolerance", tol}};

  ordered_json values = ordered_json::array();
  ordered_json errors = ordered_json::array();
  const auto slots = sweep(rs, [&](double r) {
    const Jet2 j = family_psi(fam, r);
    return ordered_json{{"r", r},
                        {"psi", j.v},
                        {"psi_d1", j.d1},
                        {"psi_d2", j.d2},
                        {"K", radial_scalar_curvature(prof, cfg.n, r)}};
  });
  emit_sweep(slots, values, errors);

  double max_abs = 0.0;
  for (const auto& row : values) {
    max_abs = std::max(max_abs, std::abs(row["K"].get<double>()));
  }
  const bool curv_ok = !values.empty() && max_abs < tol;

  const SingularSet set = singular_set(fam);
  ordered_json verdicts = ordered_json::array();
  verdicts.push_back({{"name", "scalar_curvature_vanishes"},
                      {"pass", curv_ok},
                      {"max_abs_K", max_abs},
                      {"tolerance", tol}});
  ordered_json singular{{"name", "singular_set"},
                        {"pass", true},
                        {"has_origin", set.has_origin}};
  if (set.sphere_radius) {
    singular["sphere_radius"] = *set.sphere_radius;
  } else {
    singular["sphere_radius"] = nullptr;
  }
  verdicts.push_back(singular);

  report["verdicts"] = verdicts;
  report["values"] = values;
  report["errors"] = errors;
  report["version"] = kVersion;
  return {report, curv_ok};
}

inline RunResult run_rigidity_scan(const RunConfig& cfg) {
  const std::vector<double> rs = cfg.grid.build();
  const double tol = cfg.tol > 0.0 ? cfg.tol : 1e-9;
  const RigidityVerdict v = rigidity_scan(cfg.A, cfg.k2, cfg.n, rs, tol);

  ordered_json report;
  report["command"] = cfg.command;
  report["config"] = {{"n", cfg.n},
                      {"A", cfg.A},
                      {"k2", cfg.k2},
                      {"grid", grid_json(cfg.grid)},
                      {"tolerance", tol}};

  const bool pass = v.is_constant == (cfg.A == 0.0) &&
                    v.polynomial_vanishes == (cfg.A == 0.0);
  ordered_json verdict{{"name", "rigidity"},
                       {"pass", pass},
                       {"is_constant", v.is_constant},
                       {"lambda_spread", v.lambda_spread},
                       {"polynomial_max_abs", v.polynomial_max_abs},
                       {"polynomial_vanishes", v.polynomial_vanishes}};
  if (v.forced_lambda) {
    verdict["forced_lambda"] = *v.forced_lambda;
  } else {
    verdict["forced_lambda"] = nullptr;
  }
  report["verdicts"] = ordered_json::array({verdict});

  ordered_json values = ordered_json::array();
  for (const auto& [r, lam] : v.lambda_samples) {
    values.push_back({{"r", r}, {"lambda", lam}});
  }
  ordered_json errors = ordered_json::array();
  for (const auto& [r, why] : v.skipped) {
    errors.push_back(error_entry(r_context(r), why));
  }
  report["values"] = values;
  report["errors"] = errors;
  report["version"] = kVersion;
  return {report, pass};
}

inline RunResult run_completeness(const RunConfig& cfg) {
  CompletenessRegistry reg;
  reg.add_known_complete("cylinder");

  const RadialProfile cyl = cylinder_profile();
  const RadialProfile fam_ref =
      family_profile(ZeroCurvatureFamily(cfg.A, cfg.k2, cfg.n));

  ordered_json errors = ordered_json::array();
  if (cfg.reference == "family") {
    // extend the chain from the cylinder first
    const CompletenessCertificate link = reg.certify_chained(fam_ref, cyl);
    if (!link.certified) {
      errors.push_back(error_entry(
          "chain", "reference family member could not be certified against "
                   "the cylinder"));
    }
  }

  const RadialProfile target = make_profile(cfg.target, cfg);
  const RadialProfile& reference = cfg.reference == "family" ? fam_ref : cyl;

  const CertifyOptions opt;
  ordered_json report;
  report["command"] = cfg.command;
  report["config"] = {{"n", cfg.n},
                      {"A", cfg.A},
                      {"k2", cfg.k2},
                      {"target", target.id()},
                      {"reference", reference.id()},
                      {"scan_lo", opt.scan_lo},
                      {"scan_hi", opt.scan_hi},
                      {"scan_points", opt.scan_points},
                      {"probe_r", opt.probe_r},
                      {"grid_slack", opt.grid_slack}};

  CompletenessCertificate cert;
  bool pass = false;
  try {
    cert = reg.certify_chained(target, reference, opt);
    pass = cert.certified;
  } catch (const NotKnownComplete& e) {
    errors.push_back(error_entry("chain", e.what()));
  }

  ordered_json verdict{{"name", "completeness_certificate"},
                       {"pass", pass},
                       {"certified", cert.certified},
                       {"bound_c", cert.bound_c},
                       {"attained", cert.attained},
                       {"infimum_location", cert.infimum_location},
                       {"grid_points_checked", cert.grid_points_checked},
                       {"grid_verified", cert.grid_verified}};
  if (cert.minimizer_r) {
    verdict["minimizer_r"] = *cert.minimizer_r;
  } else {
    verdict["minimizer_r"] = nullptr;
  }
  verdict["notes"] = cert.notes;
  report["verdicts"] = ordered_json::array({verdict});

  // ratio samples for plotting
  ordered_json values = ordered_json::array();
  for (double r : log_grid(1e-3, 1e3, 25)) {
    try {
      values.push_back(
          {{"r", r}, {"ratio", comparison_ratio(target, reference, r)}});
    } catch (const EvalError& e) {
      errors.push_back(error_entry(r_context(r), e.what()));
    }
  }
  report["values"] = values;
  report["errors"] = errors;
  report["version"] = kVersion;
  return {report, pass};
}

inline RunResult run_kazdan(const RunConfig& cfg) {
  const ZeroCurvatureFamily zero_leg(cfg.A, cfg.k2, cfg.n);
  const std::vector<double> rs = cfg.grid.build();
  const double zero_tol = cfg.tol > 0.0 ? cfg.tol : 1e-8;
  const double positive_tol = 1e-9;
  const KazdanTriple triple =
      kazdan_triple(cfg.n, zero_leg, rs, zero_tol, positive_tol);

  ordered_json report;
  report["command"] = cfg.command;
  report["config"] = {{"n", cfg.n},
                      {"A", cfg.A},
                      {"k2", cfg.k2},
                      {"grid", grid_json(cfg.grid)},
                      {"zero_tolerance", zero_tol},
                      {"positive_tolerance", positive_tol}};

  const auto leg_json = [](const LegReport& leg) {
    return ordered_json{{"name", leg.profile_id},
                        {"pass", leg.pass},
                        {"expectation", leg.expectation},
                        {"K_min", leg.k_min},
                        {"K_max", leg.k_max},
                        {"points_tested", leg.points_tested}};
  };
  report["verdicts"] = ordered_json::array({leg_json(triple.positive),
                                            leg_json(triple.zero),
                                            leg_json(triple.negative)});

  ordered_json values = ordered_json::array();
  ordered_json errors = ordered_json::array();
  const RadialProfile cyl = cylinder_profile();
  const RadialProfile zero_prof = family_profile(zero_leg);
  const RadialProfile neg = kazdan_negative_profile(cfg.n);
  const auto slots = sweep(rs, [&](double r) {
    ordered_json row{{"r", r}};
    row["K_positive"] = radial_scalar_curvature(cyl, cfg.n, r);
    row["K_zero"] = zero_prof.domain().contains(r)
                        ? ordered_json(radial_scalar_curvature(zero_prof, cfg.n, r))
                        : ordered_json(nullptr);
    row["K_negative"] = radial_scalar_curvature(neg, cfg.n, r);
    return row;
  });
  emit_sweep(slots, values, errors);

  report["values"] = values;
  report["errors"] = errors;
  report["version"] = kVersion;
  return {report, triple.all_pass};
}

inline RunResult run_oracle_compare(const RunConfig& cfg) {
  const Signature sig = make_signature(cfg);
  const RadialProfile prof = make_profile(cfg.profile, cfg);
  const double rel_tol = cfg.tol > 0.0 ? cfg.tol : 1e-4;
  const double abs_tol = 1e-6;
  const std::vector<double> rs = cfg.grid.build();
  const MetricField mf = conformal_metric_field(prof, sig, cfg.fd_step);

  ordered_json report;
  report["command"] = cfg.command;
  report["config"] = {{"n", cfg.n},
                      {"signature", sig.str()},
                      {"profile", prof.id()},
                      {"A", cfg.A},
                      {"k2", cfg.k2},
                      {"grid", grid_json(cfg.grid)},
                      {"fd_step", cfg.fd_step},
                      {"rel_tolerance", rel_tol},
                      {"abs_tolerance", abs_tol}};

  ordered_json values = ordered_json::array();
  ordered_json errors = ordered_json::array();
  const auto slots = sweep(rs, [&](double r) {
    const PointN p = point_with_invariant(r, sig, 0);
    const double closed = scalar_curvature(prof, sig, p);
    const double fd = fd_scalar_curvature(mf, p, cfg.fd_step);
    return ordered_json{{"r", r},
                        {"K_closed", closed},
                        {"K_fd", fd},
                        {"abs_diff", std::abs(fd - closed)}};
  });
  emit_sweep(slots, values, errors);

  bool pass = !values.empty();
  double worst = 0.0;
  for (const auto& row : values) {
    const double closed = row["K_closed"].get<double>();
    const double diff = row["abs_diff"].get<double>();
    const double allowed = std::max(abs_tol, rel_tol * std::abs(closed));
    worst = std::max(worst, diff / allowed);
    if (diff > allowed) pass = false;
  }

  report["verdicts"] =
      ordered_json::array({{{"name", "oracle_agreement"},
                            {"pass", pass},
                            {"worst_ratio_to_allowance", worst}}});
  report["values"] = values;
  report["errors"] = errors;
  report["version"] = kVersion;
  return {report, pass};
}

}  // namespace detail

inline RunResult run(const RunConfig& cfg) {
  validate(cfg);
  if (cfg.command == "curvature") return detail::run_curvature(cfg);
  if (cfg.command == "verify-soliton") return detail::run_verify_soliton(cfg);
  if (cfg.command == "family") return detail::run_family(cfg);
  if (cfg.command == "rigidity-scan") return detail::run_rigidity_scan(cfg);
  if (cfg.command == "completeness") return detail::run_completeness(cfg);
  if (cfg.command == "kazdan") return detail::run_kazdan(cfg);
  if (cfg.command == "oracle-compare") return detail::run_oracle_compare(cfg);
  throw ConfigError("unknown command '" + cfg.command + "'");
}

// CSV rendering flattens values[] only: header from the first row's keys.
inline std::string to_csv(const ordered_json& report) {
  std::ostringstream out;
  const auto& values = report.at("values");
  if (values.empty()) return "";
  bool first_col = true;
  for (const auto& [key, val] : values.front().items()) {
    (void)val;
    if (!first_col) out << ',';
    out << key;
    first_col = false;
  }
  out << '\n';
  for (const auto& row : values) {
    first_col = true;
    for (const auto& [key, val] : row.items()) {
      (void)key;
      if (!first_col) out << ',';
      if (val.is_null()) {
        // empty cell
      } else if (val.is_string()) {
        out << val.get<std::string>();
      } else {
        out << val.dump();
      }
      first_col = false;
    }
    out << '\n';
  }
  return out.str();
}

inline std::string render(const RunConfig& cfg, const ordered_json& report) {
  if (cfg.format == "csv") return to_csv(report);
  return report.dump(2) + "\n";
}

inline void write_output(const RunConfig& cfg, const std::string& text) {
  if (cfg.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(cfg.out, std::ios::binary);
  if (!f) throw ConfigError("cannot open output file '" + cfg.out + "'");
  f << text;
}

}  // namespace solitonlab::cli
