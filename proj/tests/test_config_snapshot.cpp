#include <doctest.h>

#include <sstream>

#include "lagfsi/config.hpp"
#include "lagfsi/snapshot.hpp"

using namespace lagfsi;

TEST_CASE("config parsing round trip") {
  const SimulationConfig cfg = parse_config_text(R"(
# a comment
geometry.container_radius = 2
geometry.h = 0.2
geometry.solid = 0.1 -0.2 0.5
material.nu = 0.5
numerics.dt = 0.01
numerics.T = 0.1
numerics.eps = 1e-5
numerics.integrator = midpoint
forcing.name = ramp-radial
output.snapshots = off
)");
  CHECK(cfg.geometry.container_radius == 2.0);
  REQUIRE(cfg.geometry.solids.size() == 1);
  CHECK(cfg.geometry.solids[0].cy == -0.2);
  CHECK(cfg.material.nu == 0.5);
  CHECK(cfg.fixed_point.stepper.integrator == Integrator::Midpoint);
  CHECK(cfg.fixed_point.stepper.penalty.epsilon == 1e-5);
  CHECK(cfg.forcing == "ramp-radial");
  CHECK(!cfg.emit_snapshots);
  CHECK(cfg.hash.size() == 16);
}

TEST_CASE("epsilon defaults to 1e-4 h^2 when unset") {
  const SimulationConfig cfg = parse_config_text("geometry.h = 0.2\n");
  CHECK(cfg.fixed_point.stepper.penalty.epsilon == doctest::Approx(1e-4 * 0.04));
}

TEST_CASE("violations are collected and reported together") {
  try {
    parse_config_text(R"(
material.nu = -1
numerics.dt = 0.2
numerics.T = 0.1
bogus.key = 3
forcing.name = no-such-entry
)");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.violations.size() == 4);
    bool saw_nu = false, saw_dt = false, saw_unknown = false, saw_forcing = false;
    for (const std::string& v : e.violations) {
      saw_nu = saw_nu || v.find("material.nu") != std::string::npos;
      saw_dt = saw_dt || v.find("dt must not exceed T") != std::string::npos;
      saw_unknown = saw_unknown || v.find("unknown key") != std::string::npos;
      saw_forcing = saw_forcing || v.find("forcing.name") != std::string::npos;
    }
    CHECK(saw_nu);
    CHECK(saw_dt);
    CHECK(saw_unknown);
    CHECK(saw_forcing);
  }
}

TEST_CASE("hash ignores comments and spacing but tracks values") {
  const SimulationConfig a = parse_config_text("geometry.h = 0.2\n");
  const SimulationConfig b = parse_config_text("# note\ngeometry.h   =   0.2\n");
  const SimulationConfig c = parse_config_text("geometry.h = 0.25\n");
  CHECK(a.hash == b.hash);
  CHECK(a.hash != c.hash);
  CHECK(fnv1a_hex("") == "cbf29ce484222325");
}

TEST_CASE("field snapshot roundtrip") {
  GeometryConfig g;
  g.container_radius = 1.0;
  g.h = 0.35;
  g.solids.push_back({0.0, 0.0, 0.5});
  const Mesh mesh = build_reference_config(g);

  Vec scalar_field(mesh.num_nodes());
  Vec vector_field(mesh.num_nodes() * 2);
  for (std::size_t i = 0; i < mesh.num_nodes(); ++i) {
    scalar_field[i] = 0.25 * static_cast<double>(i);
    vector_field[2 * i] = mesh.nodes[i][0];
    vector_field[2 * i + 1] = mesh.nodes[i][1];
  }

  std::stringstream ss;
  write_field_snapshot(ss, mesh,
                       {{"pos", 2, vector_field}, {"ramp", 1, scalar_field}},
                       "0123456789abcdef");
  const FieldSnapshot snap = read_field_snapshot(ss);
  CHECK(snap.config_hash == "0123456789abcdef");
  CHECK(snap.mesh.num_nodes() == mesh.num_nodes());
  REQUIRE(snap.fields.size() == 2);
  CHECK(snap.fields[0].name == "pos");
  CHECK(snap.fields[0].components == 2);
  for (std::size_t i = 0; i < vector_field.size(); ++i)
    CHECK(snap.fields[0].values[i] == doctest::Approx(vector_field[i]));
  CHECK(snap.fields[1].values.back() ==
        doctest::Approx(scalar_field.back()).epsilon(1e-15));
}
