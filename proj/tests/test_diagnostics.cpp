#include <doctest.h>

#include <cmath>
#include <sstream>

#include "lagfsi/diagnostics.hpp"
#include "lagfsi/mesh.hpp"

using namespace lagfsi;

namespace {

const Mesh& test_mesh() {
  static const Mesh mesh = [] {
    GeometryConfig g;
    g.container_radius = 1.0;
    g.h = 0.3;
    g.solids.push_back({0.0, 0.0, 0.5});
    return build_reference_config(g);
  }();
  return mesh;
}

}  // namespace

TEST_CASE("collision margin trips when the travel budget is spent") {
  std::vector<double> times, speed;
  for (int k = 0; k <= 10; ++k) {
    times.push_back(0.01 * k);
    speed.push_back(2.0);
  }
  const CollisionReport rep = collision_margin(times, speed, 0.1);
  // margin = 0.05 - 2 t hits zero at t = 0.025
  CHECK(rep.tripped);
  CHECK(rep.trip_time == doctest::Approx(0.03).epsilon(1e-12));
  CHECK(rep.margin.front() == doctest::Approx(0.05));

  const CollisionReport calm =
      collision_margin(times, std::vector<double>(times.size(), 0.1), 0.1);
  CHECK(!calm.tripped);
  for (double m : calm.margin) CHECK(m > 0.0);
}

TEST_CASE("difference quotients are exact on quadratics") {
  auto f = [](const Vec3& x) { return x[0] * x[0] + 2.0 * x[0] * x[1]; };
  const Vec3 x{{0.3, -0.2, 0.0}};
  const Vec3 h{{0.05, 0.0, 0.0}};
  // D_h f = (f(x+h) - f(x)) / |h| = df/dx + O(h) for the one-sided quotient
  const double d1 = first_difference_quotient(f, x, h);
  CHECK(d1 == doctest::Approx((f({{0.35, -0.2, 0.0}}) - f(x)) / 0.05));
  const double d2 = second_difference_quotient(f, x, h);
  CHECK(d2 == doctest::Approx(2.0).epsilon(1e-9));  // d2f/dx2 exactly
  CHECK_THROWS_AS(first_difference_quotient(f, x, {{0.0, 0.0, 0.0}}),
                  std::runtime_error);
}

TEST_CASE("norms and distances on nodal fields") {
  const VelocitySpace space(test_mesh());
  const Vec ones(space.num_dofs(), 1.0);
  const double area = test_mesh().fluid_volume() + test_mesh().solid_volume();
  CHECK(l2_norm2(space, ones) == doctest::Approx(2.0 * area).epsilon(1e-12));
  CHECK(h1_norm2(space, ones) == doctest::Approx(2.0 * area).epsilon(1e-12));
  CHECK(l2_norm2(space, ones, Subdomain::Solid) ==
        doctest::Approx(2.0 * test_mesh().solid_volume()).epsilon(1e-12));

  const std::vector<double> times = {0.0, 0.1, 0.2};
  const std::vector<Vec> a(3, ones), b(3, Vec(space.num_dofs(), 0.0));
  CHECK(trajectory_distance(space, times, a, a) == doctest::Approx(0.0));
  // constant-in-time H1 distance: sqrt(T * ||1||_H1^2)
  CHECK(trajectory_distance(space, times, a, b) ==
        doctest::Approx(std::sqrt(0.2 * 2.0 * area)).epsilon(1e-10));
}

TEST_CASE("norm surrogates vanish on the zero trajectory") {
  const VelocitySpace space(test_mesh());
  Trajectory traj;
  traj.times = {0.0, 0.05, 0.1};
  traj.w.assign(3, Vec(space.num_dofs(), 0.0));
  traj.d.assign(3, Vec(space.num_dofs(), 0.0));
  const NormSurrogates s = compute_norm_surrogates(space, traj);
  CHECK(s.xt_total() == doctest::Approx(0.0));
  CHECK(s.wt_total() == doctest::Approx(0.0));
  CHECK(std::string(NormSurrogates::surrogate_note()).find("surrogate") !=
        std::string::npos);
}

TEST_CASE("data norm equals one on zero data") {
  const VelocitySpace space(test_mesh());
  DataSpec spec;
  spec.u0 = initial_catalog("zero");
  spec.f = forcing_catalog("zero");
  CHECK(data_norm_n_squared(spec, space, 0.1) == doctest::Approx(1.0));

  DataSpec loaded;
  loaded.u0 = initial_catalog("swirl");
  loaded.f = forcing_catalog("constant-x");
  CHECK(data_norm_n_squared(loaded, space, 0.1) > 1.0);
}

TEST_CASE("ledger csv carries the hash header and schema") {
  Trajectory traj;
  traj.times = {0.0};
  traj.ledger.push_back(StepRecord{});
  std::ostringstream os;
  write_ledger_csv(os, traj, "deadbeef00000000");
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  CHECK(line == "# config_hash=deadbeef00000000");
  std::getline(is, line);
  CHECK(line ==
        "t,kinetic,elastic,viscous_cum,penalty_cum,offset_work_cum,"
        "external_work_cum,defect,div_residual,min_det");
}
