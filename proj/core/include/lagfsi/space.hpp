#pragma once

// Discretization: continuous piecewise-quadratic velocity over the whole of
// Omega (one space for fluid and solid, so trace continuity across Gamma_0
// holds identically) and piecewise-linear scalars on the fluid elements for
// the recovered pressure and the elliptic data solves.

#include <array>
#include <functional>
#include <vector>

#include "lagfsi/la.hpp"
#include "lagfsi/mesh.hpp"
#include "lagfsi/tensor.hpp"

namespace lagfsi {

/// Degree-4 Dunavant rule on the reference triangle (6 points).
struct TriQuadRule {
  std::array<std::array<double, 2>, 6> points;  // reference coords
  std::array<double, 6> weights;                // sum to 1/2
};

const TriQuadRule& tri_quadrature();

/// Values/gradients of the six P2 shape functions at a reference point.
void p2_shapes(double x, double y, std::array<double, 6>& val,
               std::array<std::array<double, 2>, 6>& grad);

/// Per-element, per-quadrature-point geometry cache.
struct ElementQuadData {
  Vec3 x;             // world position of the quadrature point
  double w;           // weight including |det J|
  std::array<double, 6> shape;
  std::array<Vec3, 6> dshape;  // world gradients
};

class VelocitySpace {
public:
  explicit VelocitySpace(const Mesh& mesh);

  const Mesh& mesh() const { return *mesh_; }
  std::size_t dim() const { return mesh_->dim; }
  std::size_t num_scalar_nodes() const { return node_coords_.size(); }
  std::size_t num_dofs() const { return node_coords_.size() * dim(); }
  std::size_t num_free_dofs() const { return num_free_; }
  std::size_t quad_per_element() const { return 6; }

  const Vec3& node_coord(std::size_t n) const { return node_coords_[n]; }
  const std::array<int, 6>& element_nodes(std::size_t e) const { return elem_nodes_[e]; }
  bool is_boundary_node(std::size_t n) const { return boundary_node_[n] != 0; }
  int free_index(std::size_t dof) const { return free_index_[dof]; }

  const ElementQuadData& quad(std::size_t e, std::size_t q) const {
    return quad_[e * 6 + q];
  }

  Vec3 value_at_qp(const Vec& field, std::size_t e, std::size_t q) const;
  Mat grad_at_qp(const Vec& field, std::size_t e, std::size_t q) const;

  /// Evaluation at an arbitrary point of a known element.
  Vec3 value_at_point(const Vec& field, std::size_t e, const Vec3& p) const;
  Mat grad_at_point(const Vec& field, std::size_t e, const Vec3& p) const;
  /// Componentwise Laplacian; constant per element for quadratic shapes.
  Vec3 laplacian_on(const Vec& field, std::size_t e) const;

  /// Nodal interpolation of an analytic vector field (full dof vector).
  Vec interpolate(const std::function<Vec3(const Vec3&)>& f) const;

  void zero_boundary(Vec& field) const;
  Vec restrict_free(const Vec& full) const;
  Vec prolong_free(const Vec& free) const;

  /// L2 mass and H1 (mass + stiffness) quadratic forms over full dofs.
  CsrMatrix mass_matrix() const;
  CsrMatrix h1_matrix() const;

  /// Pointwise evaluation anywhere in the mesh (linear element search).
  /// Throws if the point lies outside every element.
  Vec3 evaluate(const Vec& field, const Vec3& p) const;

  /// Max nodal |v| over vertex and midpoint nodes (L-infinity surrogate).
  double nodal_max_norm(const Vec& field) const;

private:
  const Mesh* mesh_;
  std::vector<Vec3> node_coords_;
  std::vector<std::array<int, 6>> elem_nodes_;
  std::vector<char> boundary_node_;
  std::vector<int> free_index_;
  std::size_t num_free_ = 0;
  std::vector<ElementQuadData> quad_;
};

/// P1 scalars on the fluid elements, Dirichlet nodes on Gamma_0.
class FluidScalarSpace {
public:
  explicit FluidScalarSpace(const Mesh& mesh);

  const Mesh& mesh() const { return *mesh_; }
  std::size_t num_nodes() const { return vertex_of_node_.size(); }
  std::size_t num_free() const { return num_free_; }
  const std::vector<std::size_t>& fluid_elements() const { return fluid_elems_; }

  int node_of_vertex(std::size_t v) const { return node_of_vertex_[v]; }
  std::size_t vertex_of_node(std::size_t n) const { return vertex_of_node_[n]; }
  bool is_interface_node(std::size_t n) const { return interface_node_[n] != 0; }
  int free_index(std::size_t n) const { return free_index_[n]; }

  Vec interpolate(const std::function<double(const Vec3&)>& f) const;
  double value_at(const Vec& field, std::size_t elem, const Vec3& p) const;
  /// Piecewise-constant gradient of the P1 field on a fluid element.
  Vec3 gradient_on(const Vec& field, std::size_t elem) const;

  CsrMatrix mass_matrix() const;

  double l2_norm(const Vec& field) const;

private:
  const Mesh* mesh_;
  std::vector<int> node_of_vertex_;
  std::vector<std::size_t> vertex_of_node_;
  std::vector<char> interface_node_;
  std::vector<int> free_index_;
  std::size_t num_free_ = 0;
  std::vector<std::size_t> fluid_elems_;
};

/// Two-point Gauss rule on the segment [a, b].
struct SegmentQuad {
  std::array<Vec3, 2> points;
  std::array<double, 2> weights;
};
SegmentQuad segment_quadrature(const Vec3& a, const Vec3& b);

}  // namespace lagfsi
