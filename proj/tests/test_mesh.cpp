#include <doctest.h>

#include <cmath>
#include <sstream>

#include "lagfsi/mesh.hpp"

using namespace lagfsi;

namespace {

GeometryConfig concentric(double h = 0.25) {
  GeometryConfig g;
  g.container_radius = 1.0;
  g.h = h;
  g.solids.push_back({0.0, 0.0, 0.5});
  return g;
}

}  // namespace

TEST_CASE("concentric reference configuration") {
  const Mesh mesh = build_reference_config(concentric());
  CHECK(mesh.num_elements() > 0);
  CHECK(!mesh.interface_facets.empty());
  CHECK(!mesh.outer_facets.empty());
  CHECK(mesh.separation == doctest::Approx(0.5));

  // polygonal areas approach the disk areas from below
  const double pi = std::acos(-1.0);
  CHECK(mesh.solid_volume() == doctest::Approx(pi * 0.25).epsilon(0.02));
  CHECK(mesh.fluid_volume() == doctest::Approx(pi * 0.75).epsilon(0.02));
  CHECK(mesh.boundary_shoelace_area() ==
        doctest::Approx(mesh.fluid_volume() + mesh.solid_volume()).epsilon(1e-12));

  // interface vertices sit exactly on the solid circle
  for (const auto& f : mesh.interface_facets)
    for (int n : {f.n0, f.n1}) {
      const Vec3& x = mesh.nodes[n];
      CHECK(std::hypot(x[0], x[1]) == doctest::Approx(0.5).epsilon(1e-12));
    }
}

TEST_CASE("interface normals point from fluid into solid") {
  const Mesh mesh = build_reference_config(concentric());
  for (std::size_t i = 0; i < mesh.interface_facets.size(); ++i) {
    const Vec3 n = mesh.interface_normal(i);
    const Vec3 mid = mesh.facet_midpoint(mesh.interface_facets[i]);
    // the solid is the inner disk, so the normal points toward the origin
    CHECK(n[0] * mid[0] + n[1] * mid[1] < 0.0);
    CHECK(std::hypot(n[0], n[1]) == doctest::Approx(1.0));
  }
  for (std::size_t i = 0; i < mesh.outer_facets.size(); ++i) {
    const Vec3 n = mesh.outer_normal(i);
    const auto& f = mesh.outer_facets[i];
    const Vec3& a = mesh.nodes[f.n0];
    CHECK(n[0] * a[0] + n[1] * a[1] > 0.0);  // outward
  }
}

TEST_CASE("solids touching the wall are rejected") {
  GeometryConfig g;
  g.container_radius = 1.0;
  g.h = 0.25;
  g.solids.push_back({0.6, 0.0, 0.4});  // touches the container
  CHECK_THROWS_AS(build_reference_config(g), std::runtime_error);

  GeometryConfig g2 = concentric();
  g2.solids.push_back({0.0, 0.0, 0.3});  // overlaps the first solid
  CHECK_THROWS_AS(build_reference_config(g2), std::runtime_error);
}

TEST_CASE("auxiliary meshes finalize") {
  const Mesh strip = build_strip_mesh(1.0, 0.5, 0.25);
  CHECK(strip.num_elements() > 0);
  CHECK(!strip.interface_facets.empty());

  const Mesh disk = build_solid_disk_mesh(0.5, 0.2);
  CHECK(disk.num_elements() > 0);
  for (Subdomain tag : disk.tags) CHECK(tag == Subdomain::Solid);
  CHECK(!disk.outer_facets.empty());
}

TEST_CASE("mesh snapshot roundtrip") {
  const Mesh mesh = build_reference_config(concentric(0.35));
  std::stringstream ss;
  write_mesh_snapshot(ss, mesh);

  // header must match the fixed format
  std::string magic, version;
  std::stringstream header(ss.str());
  header >> magic >> version;
  CHECK(magic == "lagfsi-mesh");
  CHECK(version == "v1");

  const Mesh back = read_mesh_snapshot(ss);
  REQUIRE(back.num_nodes() == mesh.num_nodes());
  REQUIRE(back.num_elements() == mesh.num_elements());
  for (std::size_t n = 0; n < mesh.num_nodes(); ++n)
    for (int d = 0; d < 2; ++d)
      CHECK(back.nodes[n][d] == doctest::Approx(mesh.nodes[n][d]).epsilon(1e-15));
  CHECK(back.tags == mesh.tags);
  CHECK(back.interface_facets.size() == mesh.interface_facets.size());
}
