#include "lagfsi/catalogs.hpp"

#include <cmath>
#include <stdexcept>

namespace lagfsi {

double profile_value(TimeProfile p, double t) {
  switch (p) {
    case TimeProfile::One: return 1.0;
    case TimeProfile::Linear: return t;
    case TimeProfile::SinT: return std::sin(t);
    case TimeProfile::CosT: return std::cos(t);
  }
  throw std::runtime_error("catalog: bad time profile");
}

double profile_derivative(TimeProfile p, double t) {
  switch (p) {
    case TimeProfile::One: return 0.0;
    case TimeProfile::Linear: return 1.0;
    case TimeProfile::SinT: return std::cos(t);
    case TimeProfile::CosT: return -std::sin(t);
  }
  throw std::runtime_error("catalog: bad time profile");
}

double profile_second_derivative(TimeProfile p, double t) {
  switch (p) {
    case TimeProfile::One:
    case TimeProfile::Linear: return 0.0;
    case TimeProfile::SinT: return -std::sin(t);
    case TimeProfile::CosT: return -std::cos(t);
  }
  throw std::runtime_error("catalog: bad time profile");
}

ForcingSpec forcing_catalog(const std::string& name) {
  const Poly2 x = Poly2::x();
  const Poly2 y = Poly2::y();
  if (name == "zero") return {PolyField2{Poly2(), Poly2()}, TimeProfile::One};
  if (name == "constant-x") return {PolyField2{Poly2(1.0), Poly2()}, TimeProfile::One};
  // f(0) = 0 for all ramp entries, so zero initial velocity stays compatible.
  if (name == "ramp-uniform-y") return {PolyField2{Poly2(), Poly2(1.0)}, TimeProfile::Linear};
  if (name == "ramp-radial") return {PolyField2{x, y}, TimeProfile::Linear};
  if (name == "ramp-swirl") return {PolyField2{y * -1.0, x}, TimeProfile::Linear};
  if (name == "oscillate-radial") return {PolyField2{x, y}, TimeProfile::SinT};
  throw std::runtime_error("catalog: unknown forcing '" + name + "'");
}

PolyField2 initial_catalog(const std::string& name) {
  const Poly2 x = Poly2::x();
  const Poly2 y = Poly2::y();
  if (name == "zero") return {Poly2(), Poly2()};
  // (1 - |x|^2) (-y, x): divergence-free, vanishes on the unit circle.
  if (name == "swirl") {
    const Poly2 bump = Poly2(1.0) - x * x - y * y;
    return {bump * y * -1.0, bump * x};
  }
  throw std::runtime_error("catalog: unknown initial velocity '" + name + "'");
}

std::vector<std::string> forcing_catalog_names() {
  return {"zero", "constant-x", "ramp-uniform-y", "ramp-radial", "ramp-swirl",
          "oscillate-radial"};
}

std::vector<std::string> initial_catalog_names() { return {"zero", "swirl"}; }

}  // namespace lagfsi
