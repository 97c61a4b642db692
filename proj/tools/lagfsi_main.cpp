// lagfsi: penalized Lagrangian fluid-structure interaction driver.
//
//   lagfsi run <cfg>           full pipeline (ledger, fixed-point report,
//                              compat residuals, field snapshots)
//   lagfsi check-compat <cfg>  evaluate the data compatibility residuals
//   lagfsi verify              run the oracle registry
//   lagfsi sweep --param p <cfg>   parameter sweep over eps|dt|n|T
//
// The config argument accepts the literal token `reference` for the
// shipped reference problem.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "lagfsi/pipeline.hpp"
#include "lagfsi/verify.hpp"

namespace {

lagfsi::SimulationConfig load_config(const std::string& arg) {
  if (arg == "reference") return lagfsi::reference_config();
  return lagfsi::parse_config(arg);
}

std::vector<double> default_sweep_values(const std::string& param,
                                         const lagfsi::SimulationConfig& cfg) {
  if (param == "eps") return {1e-2, 1e-3, 1e-4, 1e-5};
  if (param == "n") return {1, 2, 4, 8};
  if (param == "dt") {
    const double dt = cfg.fixed_point.stepper.dt;
    return {dt, dt / 2.0, dt / 4.0};
  }
  const double T = cfg.fixed_point.stepper.T;
  return {2.0 * T, T, T / 2.0};
}

int cmd_run(const std::string& cfg_arg, const std::string& emit_iterates) {
  const lagfsi::SimulationConfig cfg = load_config(cfg_arg);
  const lagfsi::PipelineResult result = lagfsi::run_pipeline(cfg, emit_iterates);

  std::cout << "config hash      " << cfg.hash << "\n";
  std::cout << "horizon T        " << result.report.T
            << (result.report.halvings
                    ? " (after " + std::to_string(result.report.halvings) + " halvings)"
                    : "")
            << "\n";
  std::cout << "iterations       " << result.report.iterations << "\n";
  std::cout << "converged        " << (result.report.converged ? "yes" : "no") << "\n";
  if (!result.report.iterate_distances.empty())
    std::cout << "final distance   " << result.report.iterate_distances.back() << "\n";
  std::cout << "collision trip   "
            << (result.collision.tripped
                    ? "yes (t = " + std::to_string(result.collision.trip_time) + ")"
                    : "no")
            << "\n";
  std::cout << "artifacts in     " << cfg.output_dir << "\n";
  std::cout << (result.guards_green ? "guards: green" : "guards: RED") << "\n";
  return result.exit_code;
}

int cmd_check_compat(const std::string& cfg_arg, double tol) {
  const lagfsi::SimulationConfig cfg = load_config(cfg_arg);
  const lagfsi::Problem prob = lagfsi::setup_problem(cfg);
  bool ok = true;
  std::cout.precision(6);
  for (const auto& [name, value] : prob.data.compat_residuals) {
    const bool pass = value <= tol;
    ok = ok && pass;
    std::cout << "compat " << name << ": " << (pass ? "PASS" : "FAIL")
              << " residual=" << value << " tol=" << tol << "\n";
  }
  std::cout << "compat: " << (ok ? "ALL PASS" : "VIOLATED") << "\n";
  return ok ? 0 : 1;
}

int cmd_verify() {
  const lagfsi::VerifyReport report = lagfsi::run_verification(std::cout);
  return report.all_passed ? 0 : 1;
}

int cmd_sweep(const std::string& cfg_arg, const std::string& param,
              std::vector<double> values) {
  const lagfsi::SimulationConfig cfg = load_config(cfg_arg);
  if (values.empty()) values = default_sweep_values(param, cfg);
  const std::vector<lagfsi::SweepRow> rows = lagfsi::run_sweep(cfg, param, values);

  std::filesystem::create_directories(cfg.output_dir);
  const std::filesystem::path path =
      std::filesystem::path(cfg.output_dir) / ("sweep_" + param + ".csv");
  {
    std::ofstream os(path);
    lagfsi::write_sweep_csv(os, param, rows, cfg.hash);
  }
  lagfsi::write_sweep_csv(std::cout, param, rows, cfg.hash);
  std::cout << "sweep written to " << path.string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"penalized Lagrangian fluid-structure interaction"};
  app.require_subcommand(1);

  std::string cfg_arg;
  std::string emit_iterates;
  double compat_tol = 1e-8;
  std::string sweep_param;
  std::vector<double> sweep_values;

  CLI::App* run = app.add_subcommand("run", "run the full pipeline");
  run->add_option("config", cfg_arg, "config file, or `reference`")->required();
  run->add_option("--emit-iterates", emit_iterates,
                  "dump every fixed-point iterate into this directory");

  CLI::App* compat = app.add_subcommand("check-compat", "data compatibility check");
  compat->add_option("config", cfg_arg, "config file, or `reference`")->required();
  compat->add_option("--tol", compat_tol, "residual tolerance");

  app.add_subcommand("verify", "run the oracle registry");

  CLI::App* sweep = app.add_subcommand("sweep", "parameter sweep");
  sweep->add_option("--param", sweep_param, "one of eps|dt|n|T")
      ->required()
      ->check(CLI::IsMember({"eps", "dt", "n", "T"}));
  sweep->add_option("--values", sweep_values, "override the sweep values");
  sweep->add_option("config", cfg_arg, "config file, or `reference`")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand("run")) return cmd_run(cfg_arg, emit_iterates);
    if (app.got_subcommand("check-compat")) return cmd_check_compat(cfg_arg, compat_tol);
    if (app.got_subcommand("verify")) return cmd_verify();
    if (app.got_subcommand("sweep")) return cmd_sweep(cfg_arg, sweep_param, sweep_values);
  } catch (const std::exception& e) {
    std::cerr << "lagfsi: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
