#include "lagfsi/material.hpp"

namespace lagfsi {

Mat fluid_stress(const Mat& grad_u, double p, const MaterialParams& params) {
  Mat T(grad_u.dim);
  if (params.constitutive == FluidConstitutive::Grad) {
    T = grad_u * params.nu;
  } else {
    T = (grad_u + grad_u.transpose()) * params.nu;
  }
  for (std::size_t i = 0; i < T.dim; ++i) T(i, i) -= p;
  return T;
}

ElasticityTensor::ElasticityTensor(const MaterialParams& params, std::size_t dim)
    : dim_(dim), c_(dim * dim * dim * dim, 0.0) {
  if (dim != 2 && dim != 3) throw std::runtime_error("elasticity tensor: dim must be 2 or 3");
  auto kron = [](std::size_t a, std::size_t b) { return a == b ? 1.0 : 0.0; };
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j)
      for (std::size_t k = 0; k < dim; ++k)
        for (std::size_t l = 0; l < dim; ++l)
          c_[((i * dim + j) * dim + k) * dim + l] =
              params.lambda * kron(i, j) * kron(k, l) +
              params.mu * (kron(i, k) * kron(j, l) + kron(i, l) * kron(j, k));
}

Mat ElasticityTensor::contract(const Mat& g) const {
  Mat s(dim_);
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = 0; j < dim_; ++j) {
      double v = 0.0;
      for (std::size_t k = 0; k < dim_; ++k)
        for (std::size_t l = 0; l < dim_; ++l) v += (*this)(i, j, k, l) * g(k, l);
      s(i, j) = v;
    }
  return s;
}

Mat elastic_stress_from_displacement_gradient(const Mat& grad_d,
                                              const MaterialParams& params) {
  Mat s = (grad_d + grad_d.transpose()) * params.mu;
  const double tr = grad_d.trace() * params.lambda;
  for (std::size_t i = 0; i < grad_d.dim; ++i) s(i, i) += tr;
  return s;
}

double elastic_energy_density(const Mat& grad_d, const MaterialParams& params) {
  const Mat s = elastic_stress_from_displacement_gradient(grad_d, params);
  double e = 0.0;
  for (std::size_t i = 0; i < grad_d.dim; ++i)
    for (std::size_t j = 0; j < grad_d.dim; ++j) e += s(i, j) * grad_d(i, j);
  return 0.5 * e;
}

}  // namespace lagfsi
