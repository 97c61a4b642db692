#include "lagfsi/flow_map.hpp"

#include <stdexcept>

namespace lagfsi {

CoefficientSample coefficient_matrix(const Mat& F) {
  CoefficientSample s;
  s.det = det(F);
  if (std::abs(s.det) < 1e-14)
    throw std::runtime_error("coefficient_matrix: singular flow-map gradient");
  s.cof = cofactor(F);
  s.a = s.cof.transpose() * (1.0 / s.det);
  return s;
}

Mat coefficient_first_derivative(const Mat& a, const Mat& grad_v) {
  return (a.matmul(grad_v).matmul(a)) * -1.0;
}

Mat coefficient_second_derivative(const Mat& a, const Mat& a_t, const Mat& grad_v,
                                  const Mat& grad_vt) {
  const Mat t1 = a_t.matmul(grad_v).matmul(a);
  const Mat t2 = a.matmul(grad_vt).matmul(a);
  const Mat t3 = a.matmul(grad_v).matmul(a_t);
  return (t1 + t2 + t3) * -1.0;
}

FlowMapState::FlowMapState(const VelocitySpace& space)
    : space_(&space), displacement_(space.num_dofs(), 0.0) {
  coeff_.resize(space.mesh().num_elements() * space.quad_per_element());
  refresh();
}

Vec3 FlowMapState::position_at_qp(std::size_t e, std::size_t q) const {
  return space_->quad(e, q).x + space_->value_at_qp(displacement_, e, q);
}

void FlowMapState::set_displacement(const Vec& disp, double time) {
  if (disp.size() != displacement_.size())
    throw std::runtime_error("flow map: displacement size mismatch");
  displacement_ = disp;
  time_ = time;
  refresh();
}

void FlowMapState::advance(const Vec& v_mid, double dt) {
  axpy(dt, v_mid, displacement_);
  time_ += dt;
  refresh();
}

void FlowMapState::refresh() {
  const std::size_t dim = space_->dim();
  const std::size_t nq = space_->quad_per_element();
  for (std::size_t e = 0; e < space_->mesh().num_elements(); ++e)
    for (std::size_t q = 0; q < nq; ++q) {
      Mat F = space_->grad_at_qp(displacement_, e, q);
      for (std::size_t i = 0; i < dim; ++i) F(i, i) += 1.0;
      coeff_[e * nq + q] = coefficient_matrix(F);
    }
}

InvertibilityReport FlowMapState::invertibility_check(double threshold) const {
  InvertibilityReport rep;
  const std::size_t nq = space_->quad_per_element();
  for (std::size_t e = 0; e < space_->mesh().num_elements(); ++e)
    for (std::size_t q = 0; q < nq; ++q) {
      const double d = coeff_[e * nq + q].det;
      if (d < rep.min_det) {
        rep.min_det = d;
        rep.argmin_element = e;
        rep.argmin_qp = q;
      }
    }
  rep.valid = rep.min_det >= threshold;
  return rep;
}

}  // namespace lagfsi
