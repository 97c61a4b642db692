#include "lagfsi/space.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace lagfsi {

const TriQuadRule& tri_quadrature() {
  static const TriQuadRule rule = [] {
    TriQuadRule r;
    const double a1 = 0.445948490915965;
    const double w1 = 0.223381589678011;
    const double a2 = 0.091576213509771;
    const double w2 = 0.109951743655322;
    r.points = {{{a1, a1},
                 {1.0 - 2.0 * a1, a1},
                 {a1, 1.0 - 2.0 * a1},
                 {a2, a2},
                 {1.0 - 2.0 * a2, a2},
                 {a2, 1.0 - 2.0 * a2}}};
    r.weights = {0.5 * w1, 0.5 * w1, 0.5 * w1, 0.5 * w2, 0.5 * w2, 0.5 * w2};
    return r;
  }();
  return rule;
}

void p2_shapes(double x, double y, std::array<double, 6>& val,
               std::array<std::array<double, 2>, 6>& grad) {
  const double l0 = 1.0 - x - y;
  const double l1 = x;
  const double l2 = y;
  val[0] = l0 * (2.0 * l0 - 1.0);
  val[1] = l1 * (2.0 * l1 - 1.0);
  val[2] = l2 * (2.0 * l2 - 1.0);
  val[3] = 4.0 * l0 * l1;
  val[4] = 4.0 * l1 * l2;
  val[5] = 4.0 * l2 * l0;
  // d l0 = (-1,-1), d l1 = (1,0), d l2 = (0,1)
  grad[0] = {1.0 - 4.0 * l0, 1.0 - 4.0 * l0};
  grad[1] = {4.0 * l1 - 1.0, 0.0};
  grad[2] = {0.0, 4.0 * l2 - 1.0};
  grad[3] = {4.0 * (l0 - l1), -4.0 * l1};
  grad[4] = {4.0 * l2, 4.0 * l1};
  grad[5] = {-4.0 * l2, 4.0 * (l0 - l2)};
}

namespace {

using EdgeKey = std::pair<int, int>;

EdgeKey edge_key(int a, int b) { return {std::min(a, b), std::max(a, b)}; }

}  // namespace

VelocitySpace::VelocitySpace(const Mesh& mesh) : mesh_(&mesh) {
  if (mesh.dim != 2) throw std::runtime_error("velocity space: only dim 2 supported");
  const std::size_t nv = mesh.num_nodes();
  node_coords_.assign(mesh.nodes.begin(), mesh.nodes.end());

  std::map<EdgeKey, int> edge_node;
  elem_nodes_.resize(mesh.num_elements());
  for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
    const auto& el = mesh.elements[e];
    std::array<int, 6> nodes{el[0], el[1], el[2], -1, -1, -1};
    const std::array<std::pair<int, int>, 3> edges{
        {{el[0], el[1]}, {el[1], el[2]}, {el[2], el[0]}}};
    for (std::size_t k = 0; k < 3; ++k) {
      const EdgeKey key = edge_key(edges[k].first, edges[k].second);
      auto it = edge_node.find(key);
      int id;
      if (it == edge_node.end()) {
        id = static_cast<int>(node_coords_.size());
        node_coords_.push_back((mesh.nodes[edges[k].first] + mesh.nodes[edges[k].second]) * 0.5);
        edge_node.emplace(key, id);
      } else {
        id = it->second;
      }
      nodes[3 + k] = id;
    }
    elem_nodes_[e] = nodes;
  }

  boundary_node_.assign(node_coords_.size(), 0);
  for (const auto& f : mesh.outer_facets) {
    boundary_node_[f.n0] = 1;
    boundary_node_[f.n1] = 1;
    boundary_node_[edge_node.at(edge_key(f.n0, f.n1))] = 1;
  }

  free_index_.assign(num_dofs(), -1);
  for (std::size_t n = 0; n < node_coords_.size(); ++n)
    if (!boundary_node_[n])
      for (std::size_t c = 0; c < dim(); ++c)
        free_index_[n * dim() + c] = static_cast<int>(num_free_++);

  // geometry cache
  const TriQuadRule& rule = tri_quadrature();
  quad_.resize(mesh.num_elements() * 6);
  (void)nv;
  for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
    const auto& el = mesh.elements[e];
    const Vec3& p0 = mesh.nodes[el[0]];
    const Vec3& p1 = mesh.nodes[el[1]];
    const Vec3& p2 = mesh.nodes[el[2]];
    // Jacobian of the affine reference map; columns p1-p0, p2-p0
    const double j00 = p1[0] - p0[0], j01 = p2[0] - p0[0];
    const double j10 = p1[1] - p0[1], j11 = p2[1] - p0[1];
    const double detj = j00 * j11 - j01 * j10;
    // J^{-T}
    const double t00 = j11 / detj, t01 = -j10 / detj;
    const double t10 = -j01 / detj, t11 = j00 / detj;
    for (std::size_t q = 0; q < 6; ++q) {
      ElementQuadData& d = quad_[e * 6 + q];
      const double x = rule.points[q][0];
      const double y = rule.points[q][1];
      d.x = Vec3{{p0[0] + j00 * x + j01 * y, p0[1] + j10 * x + j11 * y, 0.0}};
      d.w = rule.weights[q] * std::abs(detj);
      std::array<std::array<double, 2>, 6> gref;
      p2_shapes(x, y, d.shape, gref);
      for (std::size_t a = 0; a < 6; ++a)
        d.dshape[a] = Vec3{{t00 * gref[a][0] + t01 * gref[a][1],
                            t10 * gref[a][0] + t11 * gref[a][1], 0.0}};
    }
  }
}

Vec3 VelocitySpace::value_at_qp(const Vec& field, std::size_t e, std::size_t q) const {
  const ElementQuadData& d = quad(e, q);
  const auto& nodes = elem_nodes_[e];
  Vec3 v;
  for (std::size_t a = 0; a < 6; ++a)
    for (std::size_t c = 0; c < dim(); ++c)
      v[c] += field[nodes[a] * dim() + c] * d.shape[a];
  return v;
}

Mat VelocitySpace::grad_at_qp(const Vec& field, std::size_t e, std::size_t q) const {
  const ElementQuadData& d = quad(e, q);
  const auto& nodes = elem_nodes_[e];
  Mat g(dim());
  for (std::size_t a = 0; a < 6; ++a)
    for (std::size_t i = 0; i < dim(); ++i) {
      const double u = field[nodes[a] * dim() + i];
      for (std::size_t j = 0; j < dim(); ++j) g(i, j) += u * d.dshape[a][j];
    }
  return g;
}

Vec3 VelocitySpace::value_at_point(const Vec& field, std::size_t e, const Vec3& p) const {
  const auto& el = mesh_->elements[e];
  const Vec3& p0 = mesh_->nodes[el[0]];
  const Vec3& p1 = mesh_->nodes[el[1]];
  const Vec3& p2 = mesh_->nodes[el[2]];
  const double j00 = p1[0] - p0[0], j01 = p2[0] - p0[0];
  const double j10 = p1[1] - p0[1], j11 = p2[1] - p0[1];
  const double detj = j00 * j11 - j01 * j10;
  const double rx = p[0] - p0[0], ry = p[1] - p0[1];
  const double x = (j11 * rx - j01 * ry) / detj;
  const double y = (-j10 * rx + j00 * ry) / detj;
  std::array<double, 6> val;
  std::array<std::array<double, 2>, 6> gref;
  p2_shapes(x, y, val, gref);
  const auto& nodes = elem_nodes_[e];
  Vec3 v;
  for (std::size_t a = 0; a < 6; ++a)
    for (std::size_t c = 0; c < dim(); ++c)
      v[c] += field[nodes[a] * dim() + c] * val[a];
  return v;
}

Mat VelocitySpace::grad_at_point(const Vec& field, std::size_t e, const Vec3& p) const {
  const auto& el = mesh_->elements[e];
  const Vec3& p0 = mesh_->nodes[el[0]];
  const Vec3& p1 = mesh_->nodes[el[1]];
  const Vec3& p2 = mesh_->nodes[el[2]];
  const double j00 = p1[0] - p0[0], j01 = p2[0] - p0[0];
  const double j10 = p1[1] - p0[1], j11 = p2[1] - p0[1];
  const double detj = j00 * j11 - j01 * j10;
  const double rx = p[0] - p0[0], ry = p[1] - p0[1];
  const double x = (j11 * rx - j01 * ry) / detj;
  const double y = (-j10 * rx + j00 * ry) / detj;
  std::array<double, 6> val;
  std::array<std::array<double, 2>, 6> gref;
  p2_shapes(x, y, val, gref);
  const double t00 = j11 / detj, t01 = -j10 / detj;
  const double t10 = -j01 / detj, t11 = j00 / detj;
  const auto& nodes = elem_nodes_[e];
  Mat g(dim());
  for (std::size_t a = 0; a < 6; ++a) {
    const double gx = t00 * gref[a][0] + t01 * gref[a][1];
    const double gy = t10 * gref[a][0] + t11 * gref[a][1];
    for (std::size_t i = 0; i < dim(); ++i) {
      const double u = field[nodes[a] * dim() + i];
      g(i, 0) += u * gx;
      g(i, 1) += u * gy;
    }
  }
  return g;
}

Vec3 VelocitySpace::laplacian_on(const Vec& field, std::size_t e) const {
  // Reference Hessians of the six quadratic shapes are constant.
  static const std::array<std::array<double, 4>, 6> href = {{
      {4.0, 4.0, 4.0, 4.0},
      {4.0, 0.0, 0.0, 0.0},
      {0.0, 0.0, 0.0, 4.0},
      {-8.0, -4.0, -4.0, 0.0},
      {0.0, 4.0, 4.0, 0.0},
      {0.0, -4.0, -4.0, -8.0},
  }};
  const auto& el = mesh_->elements[e];
  const Vec3& p0 = mesh_->nodes[el[0]];
  const Vec3& p1 = mesh_->nodes[el[1]];
  const Vec3& p2 = mesh_->nodes[el[2]];
  const double j00 = p1[0] - p0[0], j01 = p2[0] - p0[0];
  const double j10 = p1[1] - p0[1], j11 = p2[1] - p0[1];
  const double detj = j00 * j11 - j01 * j10;
  // rows of J^{-1}
  const double i00 = j11 / detj, i01 = -j01 / detj;
  const double i10 = -j10 / detj, i11 = j00 / detj;
  const auto& nodes = elem_nodes_[e];
  Vec3 lap;
  for (std::size_t a = 0; a < 6; ++a) {
    const double hxx = href[a][0], hxy = href[a][1], hyy = href[a][3];
    // trace(J^{-T} H_ref J^{-1})
    const double t = hxx * (i00 * i00 + i01 * i01) +
                     2.0 * hxy * (i00 * i10 + i01 * i11) +
                     hyy * (i10 * i10 + i11 * i11);
    for (std::size_t c = 0; c < dim(); ++c)
      lap[c] += field[nodes[a] * dim() + c] * t;
  }
  return lap;
}

Vec VelocitySpace::interpolate(const std::function<Vec3(const Vec3&)>& f) const {
  Vec out(num_dofs(), 0.0);
  for (std::size_t n = 0; n < node_coords_.size(); ++n) {
    const Vec3 v = f(node_coords_[n]);
    for (std::size_t c = 0; c < dim(); ++c) out[n * dim() + c] = v[c];
  }
  return out;
}

void VelocitySpace::zero_boundary(Vec& field) const {
  for (std::size_t n = 0; n < node_coords_.size(); ++n)
    if (boundary_node_[n])
      for (std::size_t c = 0; c < dim(); ++c) field[n * dim() + c] = 0.0;
}

Vec VelocitySpace::restrict_free(const Vec& full) const {
  Vec out(num_free_, 0.0);
  for (std::size_t d = 0; d < num_dofs(); ++d)
    if (free_index_[d] >= 0) out[free_index_[d]] = full[d];
  return out;
}

Vec VelocitySpace::prolong_free(const Vec& free) const {
  Vec out(num_dofs(), 0.0);
  for (std::size_t d = 0; d < num_dofs(); ++d)
    if (free_index_[d] >= 0) out[d] = free[free_index_[d]];
  return out;
}

CsrMatrix VelocitySpace::mass_matrix() const {
  TripletList trip(num_dofs());
  for (std::size_t e = 0; e < mesh_->num_elements(); ++e) {
    const auto& nodes = elem_nodes_[e];
    for (std::size_t q = 0; q < 6; ++q) {
      const ElementQuadData& d = quad(e, q);
      for (std::size_t a = 0; a < 6; ++a)
        for (std::size_t b = 0; b < 6; ++b) {
          const double m = d.w * d.shape[a] * d.shape[b];
          for (std::size_t c = 0; c < dim(); ++c)
            trip.add(nodes[a] * dim() + c, nodes[b] * dim() + c, m);
        }
    }
  }
  return trip.to_csr();
}

CsrMatrix VelocitySpace::h1_matrix() const {
  TripletList trip(num_dofs());
  for (std::size_t e = 0; e < mesh_->num_elements(); ++e) {
    const auto& nodes = elem_nodes_[e];
    for (std::size_t q = 0; q < 6; ++q) {
      const ElementQuadData& d = quad(e, q);
      for (std::size_t a = 0; a < 6; ++a)
        for (std::size_t b = 0; b < 6; ++b) {
          const double m = d.w * (d.shape[a] * d.shape[b] +
                                  dot(d.dshape[a], d.dshape[b], dim()));
          for (std::size_t c = 0; c < dim(); ++c)
            trip.add(nodes[a] * dim() + c, nodes[b] * dim() + c, m);
        }
    }
  }
  return trip.to_csr();
}

Vec3 VelocitySpace::evaluate(const Vec& field, const Vec3& p) const {
  const double tol = 1e-10 * (1.0 + mesh_->h);
  for (std::size_t e = 0; e < mesh_->num_elements(); ++e) {
    const auto& el = mesh_->elements[e];
    const Vec3& p0 = mesh_->nodes[el[0]];
    const Vec3& p1 = mesh_->nodes[el[1]];
    const Vec3& p2 = mesh_->nodes[el[2]];
    const double j00 = p1[0] - p0[0], j01 = p2[0] - p0[0];
    const double j10 = p1[1] - p0[1], j11 = p2[1] - p0[1];
    const double detj = j00 * j11 - j01 * j10;
    const double rx = p[0] - p0[0], ry = p[1] - p0[1];
    const double x = (j11 * rx - j01 * ry) / detj;
    const double y = (-j10 * rx + j00 * ry) / detj;
    if (x < -tol || y < -tol || x + y > 1.0 + tol) continue;
    std::array<double, 6> val;
    std::array<std::array<double, 2>, 6> gref;
    p2_shapes(x, y, val, gref);
    const auto& nodes = elem_nodes_[e];
    Vec3 v;
    for (std::size_t a = 0; a < 6; ++a)
      for (std::size_t c = 0; c < dim(); ++c)
        v[c] += field[nodes[a] * dim() + c] * val[a];
    return v;
  }
  throw std::runtime_error("velocity space: evaluation point outside mesh");
}

double VelocitySpace::nodal_max_norm(const Vec& field) const {
  double m = 0.0;
  for (std::size_t n = 0; n < node_coords_.size(); ++n) {
    Vec3 v;
    for (std::size_t c = 0; c < dim(); ++c) v[c] = field[n * dim() + c];
    m = std::max(m, norm(v, dim()));
  }
  return m;
}

FluidScalarSpace::FluidScalarSpace(const Mesh& mesh) : mesh_(&mesh) {
  node_of_vertex_.assign(mesh.num_nodes(), -1);
  for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
    if (mesh.tags[e] != Subdomain::Fluid) continue;
    fluid_elems_.push_back(e);
    for (int v : mesh.elements[e])
      if (node_of_vertex_[v] < 0) {
        node_of_vertex_[v] = static_cast<int>(vertex_of_node_.size());
        vertex_of_node_.push_back(v);
      }
  }
  interface_node_.assign(vertex_of_node_.size(), 0);
  for (const auto& f : mesh.interface_facets)
    for (int v : {f.n0, f.n1}) {
      const int n = node_of_vertex_[v];
      if (n >= 0) interface_node_[n] = 1;
    }
  free_index_.assign(vertex_of_node_.size(), -1);
  for (std::size_t n = 0; n < vertex_of_node_.size(); ++n)
    if (!interface_node_[n]) free_index_[n] = static_cast<int>(num_free_++);
}

Vec FluidScalarSpace::interpolate(const std::function<double(const Vec3&)>& f) const {
  Vec out(num_nodes(), 0.0);
  for (std::size_t n = 0; n < vertex_of_node_.size(); ++n)
    out[n] = f(mesh_->nodes[vertex_of_node_[n]]);
  return out;
}

double FluidScalarSpace::value_at(const Vec& field, std::size_t elem, const Vec3& p) const {
  const auto& el = mesh_->elements[elem];
  const Vec3& p0 = mesh_->nodes[el[0]];
  const Vec3& p1 = mesh_->nodes[el[1]];
  const Vec3& p2 = mesh_->nodes[el[2]];
  const double j00 = p1[0] - p0[0], j01 = p2[0] - p0[0];
  const double j10 = p1[1] - p0[1], j11 = p2[1] - p0[1];
  const double detj = j00 * j11 - j01 * j10;
  const double rx = p[0] - p0[0], ry = p[1] - p0[1];
  const double x = (j11 * rx - j01 * ry) / detj;
  const double y = (-j10 * rx + j00 * ry) / detj;
  const double l0 = 1.0 - x - y;
  return l0 * field[node_of_vertex_[el[0]]] + x * field[node_of_vertex_[el[1]]] +
         y * field[node_of_vertex_[el[2]]];
}

Vec3 FluidScalarSpace::gradient_on(const Vec& field, std::size_t elem) const {
  const auto& el = mesh_->elements[elem];
  const Vec3& p0 = mesh_->nodes[el[0]];
  const Vec3& p1 = mesh_->nodes[el[1]];
  const Vec3& p2 = mesh_->nodes[el[2]];
  const double j00 = p1[0] - p0[0], j01 = p2[0] - p0[0];
  const double j10 = p1[1] - p0[1], j11 = p2[1] - p0[1];
  const double detj = j00 * j11 - j01 * j10;
  const double u0 = field[node_of_vertex_[el[0]]];
  const double u1 = field[node_of_vertex_[el[1]]];
  const double u2 = field[node_of_vertex_[el[2]]];
  // grad = J^{-T} * (u1-u0, u2-u0)
  const double gx = (j11 * (u1 - u0) - j10 * (u2 - u0)) / detj;
  const double gy = (-j01 * (u1 - u0) + j00 * (u2 - u0)) / detj;
  return Vec3{{gx, gy, 0.0}};
}

CsrMatrix FluidScalarSpace::mass_matrix() const {
  TripletList trip(num_nodes());
  for (std::size_t e : fluid_elems_) {
    const auto& el = mesh_->elements[e];
    const double area = mesh_->element_volume(e);
    for (std::size_t a = 0; a < 3; ++a)
      for (std::size_t b = 0; b < 3; ++b)
        trip.add(node_of_vertex_[el[a]], node_of_vertex_[el[b]],
                 (area / 12.0) * (a == b ? 2.0 : 1.0));
  }
  return trip.to_csr();
}

double FluidScalarSpace::l2_norm(const Vec& field) const {
  const Vec mf = mass_matrix().multiply(field);
  return std::sqrt(std::max(0.0, lagfsi::dot(field, mf)));
}

SegmentQuad segment_quadrature(const Vec3& a, const Vec3& b) {
  SegmentQuad q;
  const Vec3 mid = (a + b) * 0.5;
  const Vec3 half = (b - a) * 0.5;
  const double g = 1.0 / std::sqrt(3.0);
  q.points[0] = mid - half * g;
  q.points[1] = mid + half * g;
  const double len = norm(b - a, 2);
  q.weights[0] = 0.5 * len;
  q.weights[1] = 0.5 * len;
  return q;
}

}  // namespace lagfsi
