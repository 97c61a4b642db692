#pragma once

// Lagrangian kinematics: the flow map eta = Id + integral of v, its gradient,
// the coefficient matrix a = (grad eta)^{-1}, and the invertibility guard
// det(grad eta) >= 1/2 from the short-time theory.

#include <cstddef>
#include <vector>

#include "lagfsi/space.hpp"
#include "lagfsi/tensor.hpp"

namespace lagfsi {

struct CoefficientSample {
  Mat a;
  Mat cof;       // Cof(grad eta); columns of det*a^T, divergence-free rows
  double det = 0.0;
};

/// a = F^{-1} via cofactor/determinant; throws on |det F| < 1e-14.
CoefficientSample coefficient_matrix(const Mat& F);

/// a_t = -a (grad v) a.
Mat coefficient_first_derivative(const Mat& a, const Mat& grad_v);

/// a_tt = -a_t (grad v) a - a (grad v_t) a - a (grad v) a_t.
Mat coefficient_second_derivative(const Mat& a, const Mat& a_t, const Mat& grad_v,
                                  const Mat& grad_vt);

struct InvertibilityReport {
  bool valid = true;
  double min_det = 1.0;
  std::size_t argmin_element = 0;
  std::size_t argmin_qp = 0;
};

/// Flow-map state: nodal displacement eta - Id on the velocity space, with
/// coefficient samples cached at every element quadrature point.
class FlowMapState {
public:
  explicit FlowMapState(const VelocitySpace& space);

  const VelocitySpace& space() const { return *space_; }
  const Vec& displacement() const { return displacement_; }
  double time() const { return time_; }

  const CoefficientSample& coeff(std::size_t e, std::size_t q) const {
    return coeff_[e * space_->quad_per_element() + q];
  }

  /// eta(x) = x + displacement(x) at a quadrature point.
  Vec3 position_at_qp(std::size_t e, std::size_t q) const;

  /// Replaces the displacement directly (e.g. from an integrated iterate).
  void set_displacement(const Vec& disp, double time);

  /// Midpoint update: displacement += dt * v_mid, then refresh the cache.
  void advance(const Vec& v_mid, double dt);

  InvertibilityReport invertibility_check(double threshold = 0.5) const;

private:
  void refresh();

  const VelocitySpace* space_;
  Vec displacement_;
  double time_ = 0.0;
  std::vector<CoefficientSample> coeff_;
};

}  // namespace lagfsi
