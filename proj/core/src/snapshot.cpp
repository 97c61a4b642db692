#include "lagfsi/snapshot.hpp"

#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace lagfsi {

void write_field_snapshot(std::ostream& os, const Mesh& mesh,
                          const std::vector<FieldBlock>& fields,
                          const std::string& config_hash) {
  os << "# config_hash=" << config_hash << "\n";
  write_mesh_snapshot(os, mesh);
  os.precision(17);
  for (const FieldBlock& f : fields) {
    if (f.components == 0 || f.values.size() % f.components != 0)
      throw std::runtime_error("field snapshot: bad block shape for '" + f.name + "'");
    const std::size_t n = f.values.size() / f.components;
    os << "field " << f.name << " components=" << f.components << " size=" << n << "\n";
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t c = 0; c < f.components; ++c)
        os << (c ? " " : "") << f.values[i * f.components + c];
      os << "\n";
    }
  }
}

FieldSnapshot read_field_snapshot(std::istream& is) {
  FieldSnapshot snap;
  std::string line;
  if (!std::getline(is, line) || line.rfind("# config_hash=", 0) != 0)
    throw std::runtime_error("field snapshot: missing config hash header");
  snap.config_hash = line.substr(std::string("# config_hash=").size());
  snap.mesh = read_mesh_snapshot(is);

  std::string tok;
  while (is >> tok) {
    if (tok != "field")
      throw std::runtime_error("field snapshot: expected 'field', got '" + tok + "'");
    FieldBlock f;
    std::string kcomp, ksize;
    if (!(is >> f.name >> kcomp >> ksize))
      throw std::runtime_error("field snapshot: truncated field header");
    auto value_of = [](const std::string& kv) {
      return std::stoul(kv.substr(kv.find('=') + 1));
    };
    f.components = value_of(kcomp);
    const std::size_t n = value_of(ksize);
    f.values.resize(n * f.components);
    for (double& v : f.values)
      if (!(is >> v)) throw std::runtime_error("field snapshot: truncated field data");
    snap.fields.push_back(std::move(f));
  }
  return snap;
}

}  // namespace lagfsi
