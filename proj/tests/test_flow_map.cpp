#include <doctest.h>

#include <cmath>

#include "lagfsi/flow_map.hpp"
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

TEST_CASE("coefficient matrix inverts the gradient") {
  Mat F(2);
  F(0, 0) = 1.1; F(0, 1) = 0.2; F(1, 0) = -0.1; F(1, 1) = 0.95;
  const CoefficientSample s = coefficient_matrix(F);
  CHECK(s.det == doctest::Approx(det(F)));
  const Mat id = s.a.matmul(F);
  CHECK(id(0, 0) == doctest::Approx(1.0));
  CHECK(id(1, 0) == doctest::Approx(0.0));

  Mat singular(2);  // rank one
  singular(0, 0) = 1.0; singular(0, 1) = 2.0;
  singular(1, 0) = 0.5; singular(1, 1) = 1.0;
  CHECK_THROWS_AS(coefficient_matrix(singular), std::runtime_error);
}

TEST_CASE("flow map state at the identity") {
  const VelocitySpace space(test_mesh());
  FlowMapState state(space);
  const InvertibilityReport rep = state.invertibility_check();
  CHECK(rep.valid);
  CHECK(rep.min_det == doctest::Approx(1.0));
  const CoefficientSample& s = state.coeff(0, 0);
  CHECK(s.a(0, 0) == doctest::Approx(1.0));
  CHECK(s.a(0, 1) == doctest::Approx(0.0));
  const Vec3 pos = state.position_at_qp(2, 3);
  const Vec3& ref = space.quad(2, 3).x;
  CHECK(pos[0] == doctest::Approx(ref[0]));
  CHECK(pos[1] == doctest::Approx(ref[1]));
}

TEST_CASE("advance composes displacement increments") {
  const VelocitySpace space(test_mesh());
  FlowMapState state(space);
  const Vec v = space.interpolate(
      [](const Vec3& x) { return Vec3{{0.1 * x[0], -0.05 * x[1], 0.0}}; });
  state.advance(v, 0.5);
  state.advance(v, 0.5);
  // displacement = v * 1.0, so grad eta = I + grad(v) = diag(1.1, 0.95)
  const CoefficientSample& s = state.coeff(0, 0);
  CHECK(s.det == doctest::Approx(1.1 * 0.95).epsilon(1e-10));
  CHECK(s.a(0, 0) == doctest::Approx(1.0 / 1.1).epsilon(1e-10));
  CHECK(state.time() == doctest::Approx(1.0));
}

TEST_CASE("invertibility guard trips under strong compression") {
  const VelocitySpace space(test_mesh());
  FlowMapState state(space);
  // displacement -0.6 x compresses det(grad eta) to 0.16 < 1/2
  const Vec d = space.interpolate(
      [](const Vec3& x) { return Vec3{{-0.6 * x[0], -0.6 * x[1], 0.0}}; });
  state.set_displacement(d, 0.0);
  const InvertibilityReport rep = state.invertibility_check();
  CHECK(!rep.valid);
  CHECK(rep.min_det == doctest::Approx(0.16).epsilon(1e-9));
}
