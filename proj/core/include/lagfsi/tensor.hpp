#pragma once

// Fixed-size vector/matrix algebra for spatial dimension 2 or 3.
// Storage is always 3x3 / length-3; the active dimension is carried at runtime.

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>

namespace lagfsi {

struct Vec3 {
  std::array<double, 3> v{0.0, 0.0, 0.0};

  double& operator[](std::size_t i) { return v[i]; }
  double operator[](std::size_t i) const { return v[i]; }

  Vec3 operator+(const Vec3& o) const { return {{v[0] + o.v[0], v[1] + o.v[1], v[2] + o.v[2]}}; }
  Vec3 operator-(const Vec3& o) const { return {{v[0] - o.v[0], v[1] - o.v[1], v[2] - o.v[2]}}; }
  Vec3 operator*(double s) const { return {{v[0] * s, v[1] * s, v[2] * s}}; }
  Vec3& operator+=(const Vec3& o) {
    v[0] += o.v[0];
    v[1] += o.v[1];
    v[2] += o.v[2];
    return *this;
  }
};

inline double dot(const Vec3& a, const Vec3& b, std::size_t dim) {
  double s = 0.0;
  for (std::size_t i = 0; i < dim; ++i) s += a[i] * b[i];
  return s;
}

inline double norm(const Vec3& a, std::size_t dim) { return std::sqrt(dot(a, a, dim)); }

/// dim x dim matrix, entry (i,j) = row i, column j.
struct Mat {
  std::size_t dim = 2;
  std::array<double, 9> m{};

  Mat() = default;
  explicit Mat(std::size_t d) : dim(d) {}

  static Mat identity(std::size_t d) {
    Mat I(d);
    for (std::size_t i = 0; i < d; ++i) I(i, i) = 1.0;
    return I;
  }

  double& operator()(std::size_t i, std::size_t j) { return m[i * 3 + j]; }
  double operator()(std::size_t i, std::size_t j) const { return m[i * 3 + j]; }

  Mat operator+(const Mat& o) const {
    Mat r(dim);
    for (std::size_t k = 0; k < 9; ++k) r.m[k] = m[k] + o.m[k];
    return r;
  }
  Mat operator-(const Mat& o) const {
    Mat r(dim);
    for (std::size_t k = 0; k < 9; ++k) r.m[k] = m[k] - o.m[k];
    return r;
  }
  Mat operator*(double s) const {
    Mat r(dim);
    for (std::size_t k = 0; k < 9; ++k) r.m[k] = m[k] * s;
    return r;
  }

  Mat matmul(const Mat& o) const {
    Mat r(dim);
    for (std::size_t i = 0; i < dim; ++i)
      for (std::size_t j = 0; j < dim; ++j) {
        double s = 0.0;
        for (std::size_t k = 0; k < dim; ++k) s += (*this)(i, k) * o(k, j);
        r(i, j) = s;
      }
    return r;
  }

  Vec3 apply(const Vec3& x) const {
    Vec3 y;
    for (std::size_t i = 0; i < dim; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < dim; ++j) s += (*this)(i, j) * x[j];
      y[i] = s;
    }
    return y;
  }

  Mat transpose() const {
    Mat r(dim);
    for (std::size_t i = 0; i < dim; ++i)
      for (std::size_t j = 0; j < dim; ++j) r(i, j) = (*this)(j, i);
    return r;
  }

  double trace() const {
    double s = 0.0;
    for (std::size_t i = 0; i < dim; ++i) s += (*this)(i, i);
    return s;
  }

  double max_abs() const {
    double s = 0.0;
    for (std::size_t i = 0; i < dim; ++i)
      for (std::size_t j = 0; j < dim; ++j) s = std::max(s, std::abs((*this)(i, j)));
    return s;
  }
};

inline double det(const Mat& F) {
  if (F.dim == 2) return F(0, 0) * F(1, 1) - F(0, 1) * F(1, 0);
  return F(0, 0) * (F(1, 1) * F(2, 2) - F(1, 2) * F(2, 1)) -
         F(0, 1) * (F(1, 0) * F(2, 2) - F(1, 2) * F(2, 0)) +
         F(0, 2) * (F(1, 0) * F(2, 1) - F(1, 1) * F(2, 0));
}

/// Cofactor matrix: Cof(F)(i,j) = signed minor; det(F) F^{-T} = Cof(F).
inline Mat cofactor(const Mat& F) {
  Mat C(F.dim);
  if (F.dim == 2) {
    C(0, 0) = F(1, 1);
    C(0, 1) = -F(1, 0);
    C(1, 0) = -F(0, 1);
    C(1, 1) = F(0, 0);
    return C;
  }
  C(0, 0) = F(1, 1) * F(2, 2) - F(1, 2) * F(2, 1);
  C(0, 1) = -(F(1, 0) * F(2, 2) - F(1, 2) * F(2, 0));
  C(0, 2) = F(1, 0) * F(2, 1) - F(1, 1) * F(2, 0);
  C(1, 0) = -(F(0, 1) * F(2, 2) - F(0, 2) * F(2, 1));
  C(1, 1) = F(0, 0) * F(2, 2) - F(0, 2) * F(2, 0);
  C(1, 2) = -(F(0, 0) * F(2, 1) - F(0, 1) * F(2, 0));
  C(2, 0) = F(0, 1) * F(1, 2) - F(0, 2) * F(1, 1);
  C(2, 1) = -(F(0, 0) * F(1, 2) - F(0, 2) * F(1, 0));
  C(2, 2) = F(0, 0) * F(1, 1) - F(0, 1) * F(1, 0);
  return C;
}

/// Inverse via cofactor / determinant. Throws on |det| < 1e-14.
inline Mat inverse(const Mat& F) {
  const double d = det(F);
  if (std::abs(d) < 1e-14) throw std::runtime_error("singular map: |det F| < 1e-14");
  return cofactor(F).transpose() * (1.0 / d);
}

}  // namespace lagfsi
