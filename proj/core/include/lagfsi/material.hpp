#pragma once

// Constitutive laws: simplified fluid stress nu*grad(u) - p*I (optionally the
// symmetric-gradient variant) and the linear Kirchhoff elasticity tensor
//   c^{ijkl} = lambda d^{ij} d^{kl} + mu (d^{ik} d^{jl} + d^{il} d^{jk}).

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "lagfsi/tensor.hpp"

namespace lagfsi {

enum class FluidConstitutive { Grad, Def };

struct MaterialParams {
  double nu = 1.0;      // kinematic viscosity
  double lambda = 1.0;  // Lame lambda
  double mu = 1.0;      // Lame mu
  FluidConstitutive constitutive = FluidConstitutive::Grad;

  void validate() const {
    if (nu <= 0.0) throw std::runtime_error("material: nu must be > 0");
    if (lambda <= 0.0) throw std::runtime_error("material: lambda must be > 0");
    if (mu <= 0.0) throw std::runtime_error("material: mu must be > 0");
  }
};

/// T^f = nu grad(u) - p I  (or nu Def(u) - p I in Def mode).
Mat fluid_stress(const Mat& grad_u, double p, const MaterialParams& params);

/// Dense rank-4 tensor with both minor symmetries and the major symmetry.
class ElasticityTensor {
public:
  ElasticityTensor(const MaterialParams& params, std::size_t dim);

  std::size_t dim() const { return dim_; }
  double operator()(std::size_t i, std::size_t j, std::size_t k, std::size_t l) const {
    return c_[((i * dim_ + j) * dim_ + k) * dim_ + l];
  }

  /// sigma^{ij} = c^{ijkl} g^k,_l  (full index contraction).
  Mat contract(const Mat& g) const;

private:
  std::size_t dim_;
  std::vector<double> c_;
};

/// Closed form of the contraction: lambda tr(g) I + mu (g + g^T).
Mat elastic_stress_from_displacement_gradient(const Mat& grad_d,
                                              const MaterialParams& params);

/// 1/2 c^{ijkl} g^k,_l g^i,_j
double elastic_energy_density(const Mat& grad_d, const MaterialParams& params);

}  // namespace lagfsi
