#include <exception>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "solitonlab/cli.hpp"

using solitonlab::cli::RunConfig;

namespace {

void add_common_options(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--n", cfg.n, "dimension (>= 3)");
  sub->add_option("--signature", cfg.signature,
                  "signature string like '+++-' (default: all '+')");
  sub->add_option("--rmin", cfg.grid.rmin, "grid minimum radius");
  sub->add_option("--rmax", cfg.grid.rmax, "grid maximum radius");
  sub->add_option("--count", cfg.grid.count, "grid point count");
  sub->add_option("--spacing", cfg.grid.spacing, "grid spacing: log|linear");
  sub->add_option("--tol", cfg.tol, "primary tolerance override");
  sub->add_option("--out", cfg.out, "output file (default: stdout)");
  sub->add_option("--format", cfg.format, "output format: json|csv");
}

void add_family_options(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--A", cfg.A, "family parameter A");
  sub->add_option("--k2", cfg.k2, "family scale k2 (> 0)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "solitonlab: scalar curvature, soliton residuals, rigidity scans and "
      "completeness certificates for radial conformal metrics"};
  app.require_subcommand(1);

  RunConfig cfg;

  CLI::App* curvature =
      app.add_subcommand("curvature", "scalar curvature of a profile on a grid");
  add_common_options(curvature, cfg);
  add_family_options(curvature, cfg);
  curvature->add_option("--profile", cfg.profile,
                        "family|cylinder|kazdan-negative");
  curvature->add_flag("--swapped-exponents", cfg.swapped_exponents,
                      "swap the inner and outer exponents of the damping profile");

  CLI::App* verify = app.add_subcommand(
      "verify-soliton", "PDE and ODE residuals of a soliton candidate");
  add_common_options(verify, cfg);
  add_family_options(verify, cfg);
  verify->add_option("--rho", cfg.rho, "soliton parameter rho");
  verify->add_option("--lambda", cfg.lambda, "soliton constant lambda");

  CLI::App* family =
      app.add_subcommand("family", "zero-curvature family values and singular set");
  add_common_options(family, cfg);
  add_family_options(family, cfg);

  CLI::App* rigidity = app.add_subcommand(
      "rigidity-scan", "lambda(r) constancy scan for the rigidity property");
  add_common_options(rigidity, cfg);
  add_family_options(rigidity, cfg);

  CLI::App* completeness = app.add_subcommand(
      "completeness", "comparison-ratio completeness certificate");
  add_common_options(completeness, cfg);
  add_family_options(completeness, cfg);
  completeness->add_option("--target", cfg.target,
                           "family|kazdan-negative");
  completeness->add_option("--reference", cfg.reference, "cylinder|family");
  completeness->add_flag("--swapped-exponents", cfg.swapped_exponents,
                         "swap the inner and outer exponents of the damping profile");

  CLI::App* kazdan = app.add_subcommand(
      "kazdan", "positive/zero/negative curvature triple report");
  add_common_options(kazdan, cfg);
  add_family_options(kazdan, cfg);

  CLI::App* oracle = app.add_subcommand(
      "oracle-compare", "closed-form vs finite-difference curvature table");
  add_common_options(oracle, cfg);
  add_family_options(oracle, cfg);
  oracle->add_option("--profile", cfg.profile,
                     "family|cylinder|kazdan-negative");
  oracle->add_option("--fd-step", cfg.fd_step, "finite-difference base step");
  oracle->add_flag("--swapped-exponents", cfg.swapped_exponents,
                   "swap the inner and outer exponents of the damping profile");

  CLI11_PARSE(app, argc, argv);

  CLI::App* chosen = app.get_subcommands().front();
  cfg.command = chosen->get_name();
  if (cfg.command == "kazdan" && chosen->count("--A") == 0) {
    cfg.A = 1.0;  // the zero leg needs A > 0
  }

  try {
    solitonlab::cli::validate(cfg);
    const solitonlab::cli::RunResult result = solitonlab::cli::run(cfg);
    solitonlab::cli::write_output(cfg,
                                  solitonlab::cli::render(cfg, result.report));
    return result.ok ? 0 : 1;
  } catch (const solitonlab::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }
}
