#pragma once

// Reference configuration: container, solid inclusions, interface facets.
// Meshes are immutable once built; all builders finish through finalize(),
// which derives facet connectivity and checks the structural invariants.

#include <array>
#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "lagfsi/tensor.hpp"

namespace lagfsi {

enum class Subdomain { Fluid = 0, Solid = 1 };

struct Disk {
  double cx = 0.0, cy = 0.0, r = 0.0;
};

/// Facet between a fluid and a solid element (on Gamma_0), or on the outer
/// boundary. node ids are endpoint vertices; elem ids index Mesh::elements.
struct InterfaceFacet {
  int n0 = -1, n1 = -1;
  int fluid_elem = -1, solid_elem = -1;
};

struct OuterFacet {
  int n0 = -1, n1 = -1;  // oriented counterclockwise around the domain
  int elem = -1;
};

struct FacetId {
  enum class Kind { Interface, Outer };
  Kind kind = Kind::Interface;
  int index = 0;
};

class Mesh {
public:
  std::size_t dim = 2;
  std::vector<Vec3> nodes;
  std::vector<std::array<int, 3>> elements;
  std::vector<Subdomain> tags;
  std::vector<InterfaceFacet> interface_facets;
  std::vector<OuterFacet> outer_facets;

  /// Infimum distance between distinct solid components and solid-to-wall.
  double separation = 0.0;
  double h = 0.0;  // nominal resolution the mesher was asked for

  std::size_t num_nodes() const { return nodes.size(); }
  std::size_t num_elements() const { return elements.size(); }

  double element_volume(std::size_t e) const;
  Vec3 element_centroid(std::size_t e) const;
  double fluid_volume() const;
  double solid_volume() const;

  /// Domain area from the oriented outer boundary (shoelace); independent
  /// route against the sum of element volumes.
  double boundary_shoelace_area() const;

  Vec3 facet_midpoint(const InterfaceFacet& f) const;
  double facet_length(int n0, int n1) const;

  /// Unit normal on Gamma_0 pointing from the fluid into the solid.
  /// Throws if the facet id does not name an interface facet.
  Vec3 interface_normal(FacetId f) const;
  Vec3 interface_normal(std::size_t interface_index) const;

  /// Outward unit normal of an outer facet.
  Vec3 outer_normal(std::size_t outer_index) const;

  /// Derives facets from element adjacency and checks invariants:
  /// positive volumes, conforming adjacency, interface fluid/solid pairing,
  /// outer facets fluid-only (unless allow_solid_boundary).
  void finalize(bool allow_solid_boundary = false);
};

struct GeometryConfig {
  double container_radius = 1.0;
  std::vector<Disk> solids;
  double h = 0.1;
};

/// Builds the reference configuration. Rejects solids that touch each other
/// or the container (separation <= 0). A single solid centered at the origin
/// uses a structured polar mesh (interface nodes exactly on the circle);
/// general placements use a snapped triangular lattice.
Mesh build_reference_config(const GeometryConfig& config);

/// Infimum of solid-solid and solid-wall distances for a configuration.
double solid_separation(const GeometryConfig& config);

/// Rectangle [0,lx] x [-ly,ly] with a flat interface at y=0, solid below.
/// Used by the flat-interface diagnostics; the solid touches the boundary,
/// so only fluid boundary edges are recorded as outer facets.
Mesh build_strip_mesh(double lx, double ly, double h);

/// Disk of radius r meshed entirely as solid with a clamped outer boundary.
Mesh build_solid_disk_mesh(double r, double h);

void write_mesh_snapshot(std::ostream& os, const Mesh& mesh);
Mesh read_mesh_snapshot(std::istream& is);

}  // namespace lagfsi
