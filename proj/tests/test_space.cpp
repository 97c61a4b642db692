#include <doctest.h>

#include <cmath>

#include "lagfsi/mesh.hpp"
#include "lagfsi/space.hpp"

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

Vec3 quadratic_field(const Vec3& x) {
  return {{1.0 + 2.0 * x[0] + x[0] * x[1], x[1] * x[1] - 3.0 * x[0], 0.0}};
}

}  // namespace

TEST_CASE("p2 interpolation reproduces quadratics exactly") {
  const VelocitySpace space(test_mesh());
  const Vec field = space.interpolate(quadratic_field);

  for (std::size_t e = 0; e < test_mesh().num_elements(); e += 7)
    for (std::size_t q = 0; q < space.quad_per_element(); ++q) {
      const Vec3& x = space.quad(e, q).x;
      const Vec3 v = space.value_at_qp(field, e, q);
      const Vec3 ref = quadratic_field(x);
      CHECK(v[0] == doctest::Approx(ref[0]).epsilon(1e-12));
      CHECK(v[1] == doctest::Approx(ref[1]).epsilon(1e-12));

      const Mat g = space.grad_at_qp(field, e, q);
      CHECK(g(0, 0) == doctest::Approx(2.0 + x[1]).epsilon(1e-11));
      CHECK(g(0, 1) == doctest::Approx(x[0]).epsilon(1e-10));
      CHECK(g(1, 0) == doctest::Approx(-3.0).epsilon(1e-11));
      CHECK(g(1, 1) == doctest::Approx(2.0 * x[1]).epsilon(1e-10));
    }

  // elementwise laplacian of the quadratic is (0, 2)
  const Vec3 lap = space.laplacian_on(field, 3);
  CHECK(lap[0] == doctest::Approx(0.0).epsilon(1e-10));
  CHECK(lap[1] == doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("mass matrix integrates constants to the domain area") {
  const VelocitySpace space(test_mesh());
  const CsrMatrix M = space.mass_matrix();
  Vec ones(space.num_dofs(), 1.0);
  const Vec My = M.multiply(ones);
  double total = 0.0;
  for (double v : My) total += v;
  const double area = test_mesh().fluid_volume() + test_mesh().solid_volume();
  CHECK(total == doctest::Approx(2.0 * area).epsilon(1e-12));  // two components
}

TEST_CASE("boundary handling and free dof maps") {
  const VelocitySpace space(test_mesh());
  Vec field(space.num_dofs(), 1.0);
  space.zero_boundary(field);
  std::size_t boundary_nodes = 0;
  for (std::size_t n = 0; n < space.num_scalar_nodes(); ++n)
    if (space.is_boundary_node(n)) {
      ++boundary_nodes;
      CHECK(field[n * 2] == 0.0);
      CHECK(field[n * 2 + 1] == 0.0);
    }
  CHECK(boundary_nodes > 0);
  CHECK(space.num_free_dofs() == space.num_dofs() - 2 * boundary_nodes);

  const Vec red = space.restrict_free(field);
  CHECK(red.size() == space.num_free_dofs());
  const Vec full = space.prolong_free(red);
  for (std::size_t i = 0; i < full.size(); ++i) CHECK(full[i] == field[i]);
}

TEST_CASE("point evaluation searches the mesh") {
  const VelocitySpace space(test_mesh());
  const Vec field = space.interpolate(quadratic_field);
  const Vec3 p{{0.31, -0.42, 0.0}};
  const Vec3 v = space.evaluate(field, p);
  const Vec3 ref = quadratic_field(p);
  CHECK(v[0] == doctest::Approx(ref[0]).epsilon(1e-11));
  CHECK(v[1] == doctest::Approx(ref[1]).epsilon(1e-11));
  CHECK_THROWS_AS(space.evaluate(field, {{5.0, 5.0, 0.0}}), std::runtime_error);
}

TEST_CASE("fluid scalar space is p1 exact on linears") {
  const FluidScalarSpace scalar(test_mesh());
  CHECK(scalar.num_nodes() > 0);
  const Vec field =
      scalar.interpolate([](const Vec3& x) { return 2.0 - x[0] + 3.0 * x[1]; });
  for (std::size_t e : scalar.fluid_elements()) {
    const Vec3 c = test_mesh().element_centroid(e);
    CHECK(scalar.value_at(field, e, c) ==
          doctest::Approx(2.0 - c[0] + 3.0 * c[1]).epsilon(1e-12));
    const Vec3 g = scalar.gradient_on(field, e);
    CHECK(g[0] == doctest::Approx(-1.0).epsilon(1e-11));
    CHECK(g[1] == doctest::Approx(3.0).epsilon(1e-11));
  }

  // constant 1: ||1||_{L2(fluid)} = sqrt(fluid area)
  const Vec ones(scalar.num_nodes(), 1.0);
  CHECK(scalar.l2_norm(ones) ==
        doctest::Approx(std::sqrt(test_mesh().fluid_volume())).epsilon(1e-12));
}

TEST_CASE("segment quadrature integrates cubics") {
  const Vec3 a{{0.0, 0.0, 0.0}}, b{{2.0, 0.0, 0.0}};
  const SegmentQuad sq = segment_quadrature(a, b);
  double integral = 0.0;
  for (int q = 0; q < 2; ++q) {
    const double x = sq.points[q][0];
    integral += sq.weights[q] * (x * x * x - x);
  }
  CHECK(integral == doctest::Approx(2.0).epsilon(1e-13));  // int_0^2 x^3 - x
}
