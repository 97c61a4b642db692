#pragma once

// Exact bivariate polynomials. The forcing and initial-velocity catalogs are
// built from these so that every derivative the data construction needs
// (gradients, Laplacians, bilaplacians) is available in closed form.

#include <cstddef>
#include <map>
#include <utility>

#include "lagfsi/tensor.hpp"

namespace lagfsi {

class Poly2 {
public:
  Poly2() = default;
  Poly2(double c) {
    if (c != 0.0) coeffs_[{0, 0}] = c;
  }

  static Poly2 monomial(unsigned px, unsigned py, double c = 1.0) {
    Poly2 p;
    if (c != 0.0) p.coeffs_[{px, py}] = c;
    return p;
  }
  static Poly2 x() { return monomial(1, 0); }
  static Poly2 y() { return monomial(0, 1); }

  Poly2 operator+(const Poly2& o) const;
  Poly2 operator-(const Poly2& o) const;
  Poly2 operator*(const Poly2& o) const;
  Poly2 operator*(double s) const;

  Poly2 dx() const;
  Poly2 dy() const;
  Poly2 laplacian() const { return dx().dx() + dy().dy(); }

  double eval(double px, double py) const;
  double eval(const Vec3& p) const { return eval(p[0], p[1]); }

  bool is_zero() const { return coeffs_.empty(); }

private:
  // (degree in x, degree in y) -> coefficient
  std::map<std::pair<unsigned, unsigned>, double> coeffs_;
};

/// Plane vector field with polynomial components.
struct PolyField2 {
  Poly2 u, v;

  Vec3 eval(const Vec3& p) const { return Vec3{{u.eval(p), v.eval(p), 0.0}}; }

  Mat grad(const Vec3& p) const {
    Mat g(2);
    g(0, 0) = u.dx().eval(p);
    g(0, 1) = u.dy().eval(p);
    g(1, 0) = v.dx().eval(p);
    g(1, 1) = v.dy().eval(p);
    return g;
  }

  Poly2 divergence() const { return u.dx() + v.dy(); }
  PolyField2 laplacian() const { return {u.laplacian(), v.laplacian()}; }
};

}  // namespace lagfsi
