#include "lagfsi/pipeline.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include "lagfsi/snapshot.hpp"

namespace lagfsi {

namespace {

void dump_trajectory(const Problem& prob, const Trajectory& traj,
                     const std::string& path) {
  std::ofstream os(path);
  const std::vector<FieldBlock> fields = {{"w", 2, traj.w.back()},
                                          {"d", 2, traj.d.back()},
                                          {"q_eps", 1, traj.q.back()}};
  write_field_snapshot(os, prob.mesh, fields, prob.config.hash);
}

}  // namespace

Problem setup_problem(const SimulationConfig& config) {
  Problem prob;
  prob.config = config;
  prob.mesh = build_reference_config(config.geometry);
  prob.space = std::make_unique<VelocitySpace>(prob.mesh);
  prob.scalar = std::make_unique<FluidScalarSpace>(prob.mesh);
  prob.spec.u0 = initial_catalog(config.initial);
  prob.spec.f = forcing_catalog(config.forcing);
  prob.data = build_initial_data(prob.spec, *prob.space, *prob.scalar, config.material);
  return prob;
}

void write_compat_csv(std::ostream& os,
                      const std::vector<std::pair<std::string, double>>& residuals,
                      const std::string& config_hash) {
  os << "# config_hash=" << config_hash << "\n";
  os << "residual,value\n";
  os.precision(17);
  for (const auto& [name, value] : residuals) os << name << ',' << value << '\n';
}

void write_fixed_point_json(std::ostream& os, const FixedPointReport& report,
                            const std::string& config_hash) {
  os.precision(17);
  os << "{\n  \"config_hash\": \"" << config_hash << "\",\n";
  os << "  \"converged\": " << (report.converged ? "true" : "false") << ",\n";
  os << "  \"iterations\": " << report.iterations << ",\n";
  os << "  \"tolerance\": " << report.tolerance << ",\n";
  os << "  \"T\": " << report.T << ",\n";
  os << "  \"halvings\": " << report.halvings << ",\n";
  os << "  \"M\": " << report.m_bound << ",\n";
  auto array = [&os](const char* name, const std::vector<double>& v, bool last = false) {
    os << "  \"" << name << "\": [";
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v[i];
    os << "]" << (last ? "\n" : ",\n");
  };
  array("iterate_distances", report.iterate_distances);
  array("contraction_ratios", report.contraction_ratios);
  os << "  \"m_bound_ok\": [";
  for (std::size_t i = 0; i < report.m_bound_ok.size(); ++i)
    os << (i ? ", " : "") << (report.m_bound_ok[i] ? "true" : "false");
  os << "]\n}\n";
}

PipelineResult run_pipeline(const SimulationConfig& config,
                            const std::string& emit_iterates) {
  Problem prob = setup_problem(config);
  const std::filesystem::path out(config.output_dir);
  std::filesystem::create_directories(out);
  if (!emit_iterates.empty()) std::filesystem::create_directories(emit_iterates);

  PipelineResult result;
  result.compat_residuals = prob.data.compat_residuals;
  {
    std::ofstream os(out / "compat_residuals.csv");
    write_compat_csv(os, result.compat_residuals, config.hash);
  }

  std::size_t iterate_index = 0;
  FixedPointConfig fp = config.fixed_point;
  fp.on_iterate = [&](const Trajectory& traj) {
    if (emit_iterates.empty()) return;
    std::ostringstream name;
    name << "iterate_" << iterate_index++ << ".snap";
    dump_trajectory(prob, traj, (std::filesystem::path(emit_iterates) / name.str()).string());
  };

  const FixedPointResult fpr = iterate_to_fixed_point(
      *prob.space, *prob.scalar, prob.data, prob.spec.f, config.material, fp);
  result.report = fpr.report;

  const std::vector<double> speeds =
      trajectory_max_speeds(*prob.space, fpr.solution.w);
  result.collision =
      collision_margin(fpr.solution.times, speeds, prob.mesh.separation);

  {
    std::ofstream os(out / "ledger.csv");
    write_ledger_csv(os, fpr.solution, config.hash);
  }
  {
    std::ofstream os(out / "fixed_point.json");
    write_fixed_point_json(os, result.report, config.hash);
  }
  if (config.emit_snapshots)
    dump_trajectory(prob, fpr.solution, (out / "final.snap").string());

  result.guards_green = result.report.converged && !result.collision.tripped;
  result.exit_code = result.guards_green ? 0 : 1;
  return result;
}

std::vector<SweepRow> run_sweep(const SimulationConfig& config, const std::string& param,
                                const std::vector<double>& values) {
  Problem prob = setup_problem(config);
  std::vector<SweepRow> rows;
  for (double value : values) {
    SweepRow row;
    row.parameter = value;
    StepperConfig sc = config.fixed_point.stepper;
    if (param == "eps") {
      sc.penalty.epsilon = value;
      const IterateSeries seed = seed_iterate(*prob.space, prob.data, sc);
      const Trajectory traj = theta_map(*prob.space, *prob.scalar, prob.data,
                                        prob.spec.f, config.material, sc, seed);
      row.div_residual = traj.ledger.back().div_residual;
    } else if (param == "dt") {
      sc.dt = value;
      const IterateSeries seed = seed_iterate(*prob.space, prob.data, sc);
      const Trajectory traj = theta_map(*prob.space, *prob.scalar, prob.data,
                                        prob.spec.f, config.material, sc, seed);
      for (std::size_t k = 1; k < traj.ledger.size(); ++k)
        row.total_defect += std::abs(traj.ledger[k].defect);
    } else if (param == "n") {
      const std::size_t n = static_cast<std::size_t>(std::llround(value));
      if (n == 0) throw std::runtime_error("sweep: n values must be >= 1");
      const IterateSeries seed = seed_iterate(*prob.space, prob.data, sc);
      Vec u0 = prob.data.u0, w1 = prob.data.w1;
      prob.space->zero_boundary(u0);
      prob.space->zero_boundary(w1);
      const IterateSeries smooth = mollify_velocity(*prob.space, seed, n, u0, w1);
      const Trajectory raw = theta_map(*prob.space, *prob.scalar, prob.data,
                                       prob.spec.f, config.material, sc, seed);
      const Trajectory mol = theta_map(*prob.space, *prob.scalar, prob.data,
                                       prob.spec.f, config.material, sc, smooth);
      row.distance = trajectory_distance(*prob.space, raw.times, raw.w, mol.w);
    } else if (param == "T") {
      FixedPointConfig fp = config.fixed_point;
      fp.stepper.T = value;
      const FixedPointResult r = iterate_to_fixed_point(
          *prob.space, *prob.scalar, prob.data, prob.spec.f, config.material, fp);
      double mean = 0.0;
      for (double c : r.report.contraction_ratios) mean += c;
      if (!r.report.contraction_ratios.empty())
        mean /= static_cast<double>(r.report.contraction_ratios.size());
      row.mean_ratio = mean;
    } else {
      throw std::runtime_error("sweep: unknown parameter '" + param +
                               "' (expected eps|dt|n|T)");
    }
    rows.push_back(row);
  }
  return rows;
}

void write_sweep_csv(std::ostream& os, const std::string& param,
                     const std::vector<SweepRow>& rows, const std::string& config_hash) {
  os << "# config_hash=" << config_hash << "\n";
  os << param << ",div_residual,total_defect,distance,mean_ratio\n";
  os.precision(17);
  for (const SweepRow& r : rows)
    os << r.parameter << ',' << r.div_residual << ',' << r.total_defect << ','
       << r.distance << ',' << r.mean_ratio << '\n';
}

SimulationConfig reference_config() {
  return parse_config_text(R"(# shipped reference problem
geometry.container_radius = 1
geometry.h = 0.25
geometry.solid = 0 0 0.5
material.nu = 1
material.lambda = 1
material.mu = 1
numerics.dt = 0.0125
numerics.T = 0.05
numerics.eps = 0.001
numerics.tol = 1e-7
numerics.max_iterations = 25
forcing.name = ramp-radial
initial.name = zero
)");
}

}  // namespace lagfsi
