#pragma once

// Named closed-form forcing and initial-velocity catalogs. Configs select
// entries by name; keeping the data polynomial (with a separable time
// profile) makes every derivative the data construction needs exact.

#include <string>
#include <vector>

#include "lagfsi/poly2.hpp"
#include "lagfsi/tensor.hpp"

namespace lagfsi {

enum class TimeProfile { One, Linear, SinT, CosT };

double profile_value(TimeProfile p, double t);
double profile_derivative(TimeProfile p, double t);
double profile_second_derivative(TimeProfile p, double t);

/// f(x, t) = profile(t) * space(x), defined on all of R^2.
struct ForcingSpec {
  PolyField2 space;
  TimeProfile profile = TimeProfile::One;

  Vec3 eval(const Vec3& x, double t) const { return space.eval(x) * profile_value(profile, t); }
  Vec3 value0(const Vec3& x) const { return space.eval(x) * profile_value(profile, 0.0); }
  Vec3 dt0(const Vec3& x) const { return space.eval(x) * profile_derivative(profile, 0.0); }
  Mat grad(const Vec3& x, double t) const { return space.grad(x) * profile_value(profile, t); }
};

/// Throws on unknown names; the name lists back the config validator.
ForcingSpec forcing_catalog(const std::string& name);
PolyField2 initial_catalog(const std::string& name);
std::vector<std::string> forcing_catalog_names();
std::vector<std::string> initial_catalog_names();

}  // namespace lagfsi
