#include "lagfsi/poly2.hpp"

#include <cmath>

namespace lagfsi {

Poly2 Poly2::operator+(const Poly2& o) const {
  Poly2 r(*this);
  for (const auto& [k, c] : o.coeffs_) {
    r.coeffs_[k] += c;
    if (r.coeffs_[k] == 0.0) r.coeffs_.erase(k);
  }
  return r;
}

Poly2 Poly2::operator-(const Poly2& o) const { return *this + o * (-1.0); }

Poly2 Poly2::operator*(const Poly2& o) const {
  Poly2 r;
  for (const auto& [ka, ca] : coeffs_)
    for (const auto& [kb, cb] : o.coeffs_) {
      const std::pair<unsigned, unsigned> k{ka.first + kb.first, ka.second + kb.second};
      r.coeffs_[k] += ca * cb;
      if (r.coeffs_[k] == 0.0) r.coeffs_.erase(k);
    }
  return r;
}

Poly2 Poly2::operator*(double s) const {
  Poly2 r;
  if (s == 0.0) return r;
  for (const auto& [k, c] : coeffs_) r.coeffs_[k] = c * s;
  return r;
}

Poly2 Poly2::dx() const {
  Poly2 r;
  for (const auto& [k, c] : coeffs_)
    if (k.first > 0) r.coeffs_[{k.first - 1, k.second}] = c * k.first;
  return r;
}

Poly2 Poly2::dy() const {
  Poly2 r;
  for (const auto& [k, c] : coeffs_)
    if (k.second > 0) r.coeffs_[{k.first, k.second - 1}] = c * k.second;
  return r;
}

double Poly2::eval(double px, double py) const {
  double s = 0.0;
  for (const auto& [k, c] : coeffs_)
    s += c * std::pow(px, static_cast<int>(k.first)) * std::pow(py, static_cast<int>(k.second));
  return s;
}

}  // namespace lagfsi
