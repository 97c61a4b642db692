#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "lagfsi/pipeline.hpp"
#include "lagfsi/snapshot.hpp"
#include "lagfsi/verify.hpp"

using namespace lagfsi;

namespace {

SimulationConfig small_config(const std::string& out) {
  SimulationConfig cfg = parse_config_text(R"(
geometry.container_radius = 1
geometry.h = 0.35
geometry.solid = 0 0 0.5
numerics.dt = 0.0125
numerics.T = 0.025
numerics.eps = 0.001
numerics.tol = 1e-7
forcing.name = ramp-radial
)");
  cfg.output_dir = out;
  return cfg;
}

}  // namespace

TEST_CASE("reference config is valid and hashes stably") {
  const SimulationConfig cfg = reference_config();
  CHECK(cfg.geometry.solids.size() == 1);
  CHECK(cfg.hash.size() == 16);
  CHECK(cfg.fixed_point.stepper.dt <= cfg.fixed_point.stepper.T);
  CHECK(reference_config().hash == cfg.hash);
}

TEST_CASE("pipeline emits the full artifact set") {
  const std::filesystem::path out =
      std::filesystem::temp_directory_path() / "lagfsi-test-pipeline";
  std::filesystem::remove_all(out);
  const SimulationConfig cfg = small_config(out.string());
  const PipelineResult result = run_pipeline(cfg, (out / "iters").string());

  CHECK(result.report.converged);
  CHECK(!result.collision.tripped);
  CHECK(result.guards_green);
  CHECK(result.exit_code == 0);
  REQUIRE(result.compat_residuals.size() == 4);

  CHECK(std::filesystem::exists(out / "ledger.csv"));
  CHECK(std::filesystem::exists(out / "compat_residuals.csv"));
  CHECK(std::filesystem::exists(out / "fixed_point.json"));
  CHECK(std::filesystem::exists(out / "final.snap"));
  CHECK(std::filesystem::exists(out / "iters" / "iterate_0.snap"));

  // the snapshot carries the config hash and the solution fields
  std::ifstream is(out / "final.snap");
  const FieldSnapshot snap = read_field_snapshot(is);
  CHECK(snap.config_hash == cfg.hash);
  REQUIRE(snap.fields.size() == 3);
  CHECK(snap.fields[0].name == "w");
  CHECK(snap.fields[1].name == "d");
  CHECK(snap.fields[2].name == "q_eps");

  // the fixed-point report references the same hash
  std::ifstream js(out / "fixed_point.json");
  std::ostringstream buf;
  buf << js.rdbuf();
  CHECK(buf.str().find(cfg.hash) != std::string::npos);
  CHECK(buf.str().find("\"converged\": true") != std::string::npos);
}

TEST_CASE("eps sweep shows the penalty scaling") {
  const SimulationConfig cfg = small_config(
      (std::filesystem::temp_directory_path() / "lagfsi-test-sweep").string());
  const std::vector<SweepRow> rows = run_sweep(cfg, "eps", {1e-2, 1e-3, 1e-4});
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].div_residual > rows[1].div_residual);
  CHECK(rows[1].div_residual > rows[2].div_residual);

  std::ostringstream os;
  write_sweep_csv(os, "eps", rows, cfg.hash);
  CHECK(os.str().rfind("# config_hash=" + cfg.hash, 0) == 0);
  CHECK(os.str().find("eps,div_residual") != std::string::npos);

  CHECK_THROWS_AS(run_sweep(cfg, "bogus", {1.0}), std::runtime_error);
}

TEST_CASE("oracle registry passes end to end") {
  std::ostringstream os;
  const VerifyReport report = run_verification(os);
  CHECK(report.all_passed);
  CHECK(report.checks.size() >= required_oracle_names().size());
  CHECK(os.str().find("verify: ALL PASS") != std::string::npos);
}
