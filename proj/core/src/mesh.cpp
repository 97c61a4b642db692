#include "lagfsi/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace lagfsi {

namespace {

constexpr double kPi = 3.14159265358979323846;

struct EdgeKey {
  int a, b;
  bool operator<(const EdgeKey& o) const {
    return a != o.a ? a < o.a : b < o.b;
  }
};

EdgeKey make_edge(int i, int j) { return {std::min(i, j), std::max(i, j)}; }

}  // namespace

double Mesh::element_volume(std::size_t e) const {
  const auto& el = elements[e];
  const Vec3& p0 = nodes[el[0]];
  const Vec3& p1 = nodes[el[1]];
  const Vec3& p2 = nodes[el[2]];
  return 0.5 * ((p1[0] - p0[0]) * (p2[1] - p0[1]) - (p2[0] - p0[0]) * (p1[1] - p0[1]));
}

Vec3 Mesh::element_centroid(std::size_t e) const {
  const auto& el = elements[e];
  Vec3 c;
  for (int k = 0; k < 3; ++k) c += nodes[el[k]] * (1.0 / 3.0);
  return c;
}

double Mesh::fluid_volume() const {
  double s = 0.0;
  for (std::size_t e = 0; e < elements.size(); ++e)
    if (tags[e] == Subdomain::Fluid) s += element_volume(e);
  return s;
}

double Mesh::solid_volume() const {
  double s = 0.0;
  for (std::size_t e = 0; e < elements.size(); ++e)
    if (tags[e] == Subdomain::Solid) s += element_volume(e);
  return s;
}

double Mesh::boundary_shoelace_area() const {
  double s = 0.0;
  for (const auto& f : outer_facets) {
    const Vec3& p = nodes[f.n0];
    const Vec3& q = nodes[f.n1];
    s += 0.5 * (p[0] * q[1] - q[0] * p[1]);
  }
  return s;
}

Vec3 Mesh::facet_midpoint(const InterfaceFacet& f) const {
  return (nodes[f.n0] + nodes[f.n1]) * 0.5;
}

double Mesh::facet_length(int n0, int n1) const {
  return norm(nodes[n1] - nodes[n0], dim);
}

Vec3 Mesh::interface_normal(FacetId f) const {
  if (f.kind != FacetId::Kind::Interface)
    throw std::runtime_error("interface_normal: facet is not an interface facet");
  return interface_normal(static_cast<std::size_t>(f.index));
}

Vec3 Mesh::interface_normal(std::size_t i) const {
  if (i >= interface_facets.size())
    throw std::runtime_error("interface_normal: facet index out of range");
  const InterfaceFacet& f = interface_facets[i];
  const Vec3 t = nodes[f.n1] - nodes[f.n0];
  const double len = norm(t, dim);
  Vec3 n{{t[1] / len, -t[0] / len, 0.0}};
  // orient from fluid into solid
  const Vec3 to_solid = element_centroid(f.solid_elem) - facet_midpoint(f);
  if (dot(n, to_solid, dim) < 0.0) n = n * -1.0;
  return n;
}

Vec3 Mesh::outer_normal(std::size_t i) const {
  const OuterFacet& f = outer_facets[i];
  const Vec3 t = nodes[f.n1] - nodes[f.n0];
  const double len = norm(t, dim);
  Vec3 n{{t[1] / len, -t[0] / len, 0.0}};
  const Vec3 inward = element_centroid(f.elem) - (nodes[f.n0] + nodes[f.n1]) * 0.5;
  if (dot(n, inward, dim) > 0.0) n = n * -1.0;
  return n;
}

void Mesh::finalize(bool allow_solid_boundary) {
  for (std::size_t e = 0; e < elements.size(); ++e) {
    double v = element_volume(e);
    if (v < 0.0) {  // enforce counterclockwise orientation
      std::swap(elements[e][1], elements[e][2]);
      v = -v;
    }
    if (v <= 0.0) throw std::runtime_error("mesh: degenerate element " + std::to_string(e));
  }
  if (tags.size() != elements.size())
    throw std::runtime_error("mesh: element tags missing");

  std::map<EdgeKey, std::vector<int>> edge_elems;
  for (std::size_t e = 0; e < elements.size(); ++e)
    for (int k = 0; k < 3; ++k)
      edge_elems[make_edge(elements[e][k], elements[e][(k + 1) % 3])].push_back(
          static_cast<int>(e));

  interface_facets.clear();
  outer_facets.clear();
  for (const auto& [edge, els] : edge_elems) {
    if (els.size() > 2)
      throw std::runtime_error("mesh: non-conforming edge (shared by >2 elements)");
    if (els.size() == 2) {
      if (tags[els[0]] != tags[els[1]]) {
        InterfaceFacet f;
        f.n0 = edge.a;
        f.n1 = edge.b;
        f.fluid_elem = tags[els[0]] == Subdomain::Fluid ? els[0] : els[1];
        f.solid_elem = tags[els[0]] == Subdomain::Solid ? els[0] : els[1];
        interface_facets.push_back(f);
      }
      continue;
    }
    const int e = els[0];
    if (tags[e] == Subdomain::Solid) {
      if (!allow_solid_boundary)
        throw std::runtime_error("mesh: solid element touches the outer boundary");
      continue;
    }
    OuterFacet f;
    f.n0 = edge.a;
    f.n1 = edge.b;
    f.elem = e;
    // orient counterclockwise: element interior to the left of n0->n1
    const Vec3 t = nodes[f.n1] - nodes[f.n0];
    const Vec3 inward = element_centroid(e) - (nodes[f.n0] + nodes[f.n1]) * 0.5;
    if (t[0] * inward[1] - t[1] * inward[0] < 0.0) std::swap(f.n0, f.n1);
    outer_facets.push_back(f);
  }
}

double solid_separation(const GeometryConfig& config) {
  double d = std::numeric_limits<double>::infinity();
  const auto& s = config.solids;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double rc = std::hypot(s[i].cx, s[i].cy);
    d = std::min(d, config.container_radius - rc - s[i].r);
    for (std::size_t j = i + 1; j < s.size(); ++j) {
      const double c2c = std::hypot(s[i].cx - s[j].cx, s[i].cy - s[j].cy);
      d = std::min(d, c2c - s[i].r - s[j].r);
    }
  }
  return d;
}

namespace {

bool inside_any_solid(const GeometryConfig& cfg, const Vec3& p) {
  for (const auto& s : cfg.solids) {
    const double dx = p[0] - s.cx, dy = p[1] - s.cy;
    if (dx * dx + dy * dy < s.r * s.r) return true;
  }
  return false;
}

/// Structured polar mesh of a disk of radius R; radii_marks are radii that
/// must appear exactly as node rings (e.g. the solid interface circle).
Mesh polar_disk_mesh(double R, double h, const std::vector<double>& radii_marks) {
  std::vector<double> radii{0.0};
  double prev = 0.0;
  auto fill_to = [&](double r) {
    const int n = std::max(1, static_cast<int>(std::ceil((r - prev) / h)));
    for (int k = 1; k <= n; ++k) radii.push_back(prev + (r - prev) * k / n);
    prev = r;
  };
  for (double rm : radii_marks) fill_to(rm);
  fill_to(R);

  const int m = std::max(8, static_cast<int>(std::lround(2.0 * kPi * R / h)));

  Mesh mesh;
  mesh.h = h;
  mesh.nodes.push_back(Vec3{});  // center
  std::vector<int> ring_start(radii.size(), 0);
  for (std::size_t k = 1; k < radii.size(); ++k) {
    ring_start[k] = static_cast<int>(mesh.nodes.size());
    for (int j = 0; j < m; ++j) {
      const double th = 2.0 * kPi * j / m;
      mesh.nodes.push_back(Vec3{{radii[k] * std::cos(th), radii[k] * std::sin(th), 0.0}});
    }
  }

  // innermost ring: fan around the center node
  for (int j = 0; j < m; ++j)
    mesh.elements.push_back({0, ring_start[1] + j, ring_start[1] + (j + 1) % m});
  // ring-to-ring quads split into two triangles
  for (std::size_t k = 1; k + 1 < radii.size(); ++k) {
    const int a = ring_start[k], b = ring_start[k + 1];
    for (int j = 0; j < m; ++j) {
      const int j1 = (j + 1) % m;
      mesh.elements.push_back({a + j, b + j, b + j1});
      mesh.elements.push_back({a + j, b + j1, a + j1});
    }
  }
  return mesh;
}

Mesh snapped_lattice_mesh(const GeometryConfig& cfg) {
  const double R = cfg.container_radius;
  const double s = cfg.h;
  const double row_h = s * std::sqrt(3.0) / 2.0;
  const int nj = static_cast<int>(std::ceil(R / row_h)) + 2;
  const int ni = static_cast<int>(std::ceil(R / s)) + 2;

  std::vector<Vec3> pts;
  std::map<std::pair<int, int>, int> index;
  for (int j = -nj; j <= nj; ++j)
    for (int i = -ni; i <= ni; ++i) {
      Vec3 p{{i * s + (j & 1 ? 0.5 * s : 0.0), j * row_h, 0.0}};
      index[{i, j}] = static_cast<int>(pts.size());
      pts.push_back(p);
    }

  // snap nodes onto circles (container first, then solids)
  const double snap = 0.45 * s;
  auto snap_circle = [&](double cx, double cy, double r) {
    for (auto& p : pts) {
      const double d = std::hypot(p[0] - cx, p[1] - cy);
      if (d > 1e-12 && std::abs(d - r) < snap) {
        p[0] = cx + (p[0] - cx) * r / d;
        p[1] = cy + (p[1] - cy) * r / d;
      }
    }
  };
  snap_circle(0.0, 0.0, R);
  for (const auto& sd : cfg.solids) snap_circle(sd.cx, sd.cy, sd.r);

  Mesh mesh;
  mesh.h = s;
  std::vector<int> remap(pts.size(), -1);
  auto keep_node = [&](int id) {
    if (remap[id] < 0) {
      remap[id] = static_cast<int>(mesh.nodes.size());
      mesh.nodes.push_back(pts[id]);
    }
    return remap[id];
  };

  auto add_tri = [&](int a, int b, int c) {
    const Vec3 cen = (pts[a] + pts[b] + pts[c]) * (1.0 / 3.0);
    if (std::hypot(cen[0], cen[1]) >= R) return;
    const double tol = R + 1e-9;
    for (int id : {a, b, c})
      if (std::hypot(pts[id][0], pts[id][1]) > tol) return;
    const double area =
        0.5 * std::abs((pts[b][0] - pts[a][0]) * (pts[c][1] - pts[a][1]) -
                       (pts[c][0] - pts[a][0]) * (pts[b][1] - pts[a][1]));
    if (area < 1e-3 * s * s) return;  // degenerate after snapping
    mesh.elements.push_back({keep_node(a), keep_node(b), keep_node(c)});
    mesh.tags.push_back(inside_any_solid(cfg, Vec3{{cen[0], cen[1], 0.0}})
                            ? Subdomain::Solid
                            : Subdomain::Fluid);
  };

  for (int j = -nj; j < nj; ++j)
    for (int i = -ni; i < ni; ++i) {
      const int p00 = index[{i, j}], p10 = index[{i + 1, j}];
      const int p01 = index[{i, j + 1}], p11 = index[{i + 1, j + 1}];
      if (j & 1) {
        add_tri(p00, p10, p01);
        add_tri(p10, p11, p01);
      } else {
        add_tri(p00, p10, p11);
        add_tri(p00, p11, p01);
      }
    }
  return mesh;
}

}  // namespace

Mesh build_reference_config(const GeometryConfig& config) {
  if (config.solids.empty())
    throw std::runtime_error("geometry: at least one solid is required");
  if (config.h <= 0.0) throw std::runtime_error("geometry: h must be positive");
  const double d = solid_separation(config);
  if (d <= 0.0)
    throw std::runtime_error("geometry: solid not strictly interior (separation " +
                             std::to_string(d) + " <= 0)");

  Mesh mesh;
  const bool concentric = config.solids.size() == 1 &&
                          std::hypot(config.solids[0].cx, config.solids[0].cy) < 1e-12;
  if (concentric) {
    mesh = polar_disk_mesh(config.container_radius, config.h, {config.solids[0].r});
    const double r_s = config.solids[0].r;
    mesh.tags.resize(mesh.elements.size());
    for (std::size_t e = 0; e < mesh.elements.size(); ++e) {
      const Vec3 c = mesh.element_centroid(e);
      mesh.tags[e] =
          std::hypot(c[0], c[1]) < r_s ? Subdomain::Solid : Subdomain::Fluid;
    }
  } else {
    mesh = snapped_lattice_mesh(config);
  }
  mesh.separation = d;
  mesh.finalize();
  if (mesh.interface_facets.empty())
    throw std::runtime_error("geometry: mesh resolves no interface facets (h too coarse?)");
  return mesh;
}

Mesh build_strip_mesh(double lx, double ly, double h) {
  const int nx = std::max(2, static_cast<int>(std::lround(lx / h)));
  const int ny = std::max(2, static_cast<int>(std::lround(2.0 * ly / h)));
  if (ny % 2 != 0)
    throw std::runtime_error("strip mesh: resolution does not place a node row at y=0");

  Mesh mesh;
  mesh.h = h;
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i)
      mesh.nodes.push_back(Vec3{{lx * i / nx, -ly + 2.0 * ly * j / ny, 0.0}});
  auto id = [&](int i, int j) { return j * (nx + 1) + i; };
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      mesh.elements.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      mesh.elements.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
      const Subdomain tag = (j < ny / 2) ? Subdomain::Solid : Subdomain::Fluid;
      mesh.tags.push_back(tag);
      mesh.tags.push_back(tag);
    }
  mesh.separation = 0.0;
  mesh.finalize(/*allow_solid_boundary=*/true);
  return mesh;
}

Mesh build_solid_disk_mesh(double r, double h) {
  Mesh mesh = polar_disk_mesh(r, h, {});
  mesh.tags.assign(mesh.elements.size(), Subdomain::Solid);
  mesh.separation = 0.0;
  mesh.finalize(/*allow_solid_boundary=*/true);
  // clamped boundary: record the boundary edges as outer facets by hand
  std::map<EdgeKey, std::vector<int>> edge_elems;
  for (std::size_t e = 0; e < mesh.elements.size(); ++e)
    for (int k = 0; k < 3; ++k)
      edge_elems[make_edge(mesh.elements[e][k], mesh.elements[e][(k + 1) % 3])]
          .push_back(static_cast<int>(e));
  for (const auto& [edge, els] : edge_elems)
    if (els.size() == 1)
      mesh.outer_facets.push_back({edge.a, edge.b, els[0]});
  return mesh;
}

void write_mesh_snapshot(std::ostream& os, const Mesh& mesh) {
  os << "lagfsi-mesh v1 dim=" << mesh.dim << " nodes=" << mesh.num_nodes()
     << " elems=" << mesh.num_elements() << "\n";
  os.precision(17);
  for (const auto& p : mesh.nodes) {
    for (std::size_t k = 0; k < mesh.dim; ++k) os << (k ? " " : "") << p[k];
    os << "\n";
  }
  for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
    const auto& el = mesh.elements[e];
    os << el[0] << " " << el[1] << " " << el[2] << " "
       << (mesh.tags[e] == Subdomain::Solid ? 1 : 0) << "\n";
  }
}

Mesh read_mesh_snapshot(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw std::runtime_error("mesh snapshot: empty stream");
  std::istringstream hdr(line);
  std::string magic, ver, kdim, knodes, kelems;
  hdr >> magic >> ver >> kdim >> knodes >> kelems;
  if (magic != "lagfsi-mesh" || ver != "v1")
    throw std::runtime_error("mesh snapshot: bad header '" + line + "'");
  auto value_of = [](const std::string& kv) {
    return std::stoul(kv.substr(kv.find('=') + 1));
  };
  Mesh mesh;
  mesh.dim = value_of(kdim);
  const std::size_t n = value_of(knodes), m = value_of(kelems);
  mesh.nodes.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < mesh.dim; ++k) is >> mesh.nodes[i][k];
  mesh.elements.resize(m);
  mesh.tags.resize(m);
  for (std::size_t e = 0; e < m; ++e) {
    int tag = 0;
    is >> mesh.elements[e][0] >> mesh.elements[e][1] >> mesh.elements[e][2] >> tag;
    mesh.tags[e] = tag ? Subdomain::Solid : Subdomain::Fluid;
  }
  if (!is) throw std::runtime_error("mesh snapshot: truncated data");
  mesh.finalize(/*allow_solid_boundary=*/true);
  return mesh;
}

}  // namespace lagfsi
