#pragma once

// Field snapshots: the mesh snapshot format extended with named field
// blocks. Layout:
//   lagfsi-mesh v1 dim=<d> nodes=<n> elems=<m>
//   ... mesh payload ...
//   field <name> components=<c> size=<k>
//   <k lines of c values>

#include <iosfwd>
#include <string>
#include <vector>

#include "lagfsi/la.hpp"
#include "lagfsi/mesh.hpp"

namespace lagfsi {

struct FieldBlock {
  std::string name;
  std::size_t components = 1;
  Vec values;  // size = components * sample count
};

void write_field_snapshot(std::ostream& os, const Mesh& mesh,
                          const std::vector<FieldBlock>& fields,
                          const std::string& config_hash);

struct FieldSnapshot {
  Mesh mesh;
  std::vector<FieldBlock> fields;
  std::string config_hash;
};

FieldSnapshot read_field_snapshot(std::istream& is);

}  // namespace lagfsi
