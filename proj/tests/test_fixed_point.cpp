#include <doctest.h>

#include <cmath>

#include "lagfsi/fixed_point.hpp"
#include "lagfsi/mesh.hpp"

using namespace lagfsi;

namespace {

struct Fixture {
  Mesh mesh;
  VelocitySpace space;
  FluidScalarSpace scalar;
  DataSpec spec;
  InitialData data;
  MaterialParams params;

  explicit Fixture(const std::string& initial = "swirl")
      : mesh([] {
          GeometryConfig g;
          g.container_radius = 1.0;
          g.h = 0.3;
          g.solids.push_back({0.0, 0.0, 0.5});
          return build_reference_config(g);
        }()),
        space(mesh),
        scalar(mesh) {
    spec.u0 = initial_catalog(initial);
    spec.f = forcing_catalog("zero");
    data = build_initial_data(spec, space, scalar, params);
  }
};

StepperConfig small_stepper() {
  StepperConfig cfg;
  cfg.dt = 0.0125;
  cfg.T = 0.05;
  cfg.penalty.epsilon = 1e-3;
  return cfg;
}

}  // namespace

TEST_CASE("seed iterate is u0 + t w1 with boundary rows zeroed") {
  const Fixture fx;
  const IterateSeries seed = seed_iterate(fx.space, fx.data, small_stepper());
  REQUIRE(seed.times.size() == 5);
  CHECK(seed.times.front() == 0.0);
  CHECK(seed.times.back() == doctest::Approx(0.05));

  Vec u0 = fx.data.u0, w1 = fx.data.w1;
  fx.space.zero_boundary(u0);
  fx.space.zero_boundary(w1);
  for (std::size_t k = 0; k < seed.times.size(); ++k)
    for (std::size_t i = 0; i < u0.size(); ++i)
      CHECK(seed.w[k][i] ==
            doctest::Approx(u0[i] + seed.times[k] * w1[i]).epsilon(1e-14));
}

TEST_CASE("mollifier reproduces affine fields and pins the initial data") {
  const Fixture fx;
  // an affine-in-space, linear-in-time series is a fixed point of the
  // smoothing sweeps and of the initial-data correction
  IterateSeries v;
  v.times = {0.0, 0.01, 0.02, 0.03, 0.04};
  Vec u0 = fx.space.interpolate(
      [](const Vec3& x) { return Vec3{{0.2 * x[0] - 0.1 * x[1], 0.3 * x[1], 0.0}}; });
  Vec w1 = fx.space.interpolate(
      [](const Vec3& x) { return Vec3{{0.05 * x[1], -0.04 * x[0], 0.0}}; });
  for (double t : v.times) {
    Vec w(u0.size());
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = u0[i] + t * w1[i];
    v.w.push_back(std::move(w));
  }
  for (std::size_t n : {std::size_t(1), std::size_t(4)}) {
    const IterateSeries out = mollify_velocity(fx.space, v, n, u0, w1);
    for (std::size_t k = 0; k < v.times.size(); ++k)
      for (std::size_t i = 0; i < u0.size(); ++i)
        CHECK(out.w[k][i] == doctest::Approx(v.w[k][i]).epsilon(1e-10));
  }
  CHECK_THROWS_AS(mollify_velocity(fx.space, v, 0, u0, w1), std::runtime_error);
}

TEST_CASE("theta map rejects iterates off the step grid") {
  const Fixture fx;
  const StepperConfig cfg = small_stepper();
  IterateSeries bad = seed_iterate(fx.space, fx.data, cfg);
  bad.times.pop_back();
  bad.w.pop_back();
  CHECK_THROWS_AS(
      theta_map(fx.space, fx.scalar, fx.data, fx.spec.f, fx.params, cfg, bad),
      std::runtime_error);
}

TEST_CASE("picard iteration converges and reports its history") {
  const Fixture fx;
  FixedPointConfig fp;
  fp.stepper = small_stepper();
  fp.tol = 1e-8;
  fp.max_iterations = 20;

  std::size_t observed = 0;
  fp.on_iterate = [&observed](const Trajectory&) { ++observed; };

  const FixedPointResult r =
      iterate_to_fixed_point(fx.space, fx.scalar, fx.data, fx.spec.f, fx.params, fp);
  CHECK(r.report.converged);
  CHECK(r.report.halvings == 0);
  CHECK(r.report.iterations >= 2);
  CHECK(observed == r.report.iterations);
  REQUIRE(!r.report.iterate_distances.empty());
  CHECK(r.report.iterate_distances.back() <= fp.tol);
  for (double ratio : r.report.contraction_ratios) CHECK(ratio < 1.0);
  CHECK(r.report.m_bound > 0.0);
  for (bool ok : r.report.m_bound_ok) CHECK(ok);

  // the solution is a trajectory on the step grid with matching metadata
  CHECK(r.solution.times.size() == fp.stepper.T / fp.stepper.dt + 1);
  const CtmReport ctm = ctm_membership(fx.space, r.solution, r.report.m_bound, fx.data);
  CHECK(ctm.ok);
  CHECK(ctm.initial_value_mismatch <= 1e-10);
}

TEST_CASE("mollified picard path also converges") {
  const Fixture fx;
  FixedPointConfig fp;
  fp.stepper = small_stepper();
  fp.stepper.penalty.mollify_n = 4;
  fp.tol = 1e-6;
  fp.max_iterations = 25;
  const FixedPointResult r =
      iterate_to_fixed_point(fx.space, fx.scalar, fx.data, fx.spec.f, fx.params, fp);
  CHECK(r.report.converged);
}
