#pragma once

// Run orchestration: builds the reference configuration, constructs the
// compatibility data, iterates to a fixed point, and emits the artifacts
// (compat residual CSV, per-step ledger CSV, fixed-point report JSON,
// field snapshots). Also hosts the parameter sweeps.

#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "lagfsi/config.hpp"
#include "lagfsi/diagnostics.hpp"
#include "lagfsi/fixed_point.hpp"

namespace lagfsi {

/// Everything assembled from a config, before time integration.
struct Problem {
  SimulationConfig config;
  Mesh mesh;
  std::unique_ptr<VelocitySpace> space;
  std::unique_ptr<FluidScalarSpace> scalar;
  DataSpec spec;
  InitialData data;
};

Problem setup_problem(const SimulationConfig& config);

struct PipelineResult {
  FixedPointReport report;
  CollisionReport collision;
  std::vector<std::pair<std::string, double>> compat_residuals;
  bool guards_green = false;  // converged, no collision trip, det >= 1/2
  int exit_code = 1;
};

/// Full pipeline; artifacts land in config.output_dir. If emit_iterates is
/// nonempty every Picard iterate's trajectory is dumped there too.
PipelineResult run_pipeline(const SimulationConfig& config,
                            const std::string& emit_iterates = "");

void write_compat_csv(std::ostream& os,
                      const std::vector<std::pair<std::string, double>>& residuals,
                      const std::string& config_hash);

void write_fixed_point_json(std::ostream& os, const FixedPointReport& report,
                            const std::string& config_hash);

struct SweepRow {
  double parameter = 0.0;
  double div_residual = 0.0;   // final-step divergence residual (eps sweep)
  double total_defect = 0.0;   // summed |defect| (dt sweep)
  double distance = 0.0;       // mollified-vs-raw output distance (n sweep)
  double mean_ratio = 0.0;     // mean contraction ratio (T sweep)
};

/// param in {"eps", "dt", "n", "T"}; values override the config per row.
std::vector<SweepRow> run_sweep(const SimulationConfig& config, const std::string& param,
                                const std::vector<double>& values);

void write_sweep_csv(std::ostream& os, const std::string& param,
                     const std::vector<SweepRow>& rows, const std::string& config_hash);

/// The shipped reference problem: concentric solid disk, ramp forcing.
SimulationConfig reference_config();

}  // namespace lagfsi
