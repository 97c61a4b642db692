#pragma once

// Independent verification routes. Element matrices are integrated in closed
// form from the barycentric factorial formula (no quadrature rule shared
// with the assembly); sparse solves are cross-checked against a dense
// Cholesky; the elastic eigenmode period comes from inverse iteration on
// the generalized pair (K, M).

#include <cstddef>

#include "lagfsi/la.hpp"
#include "lagfsi/material.hpp"
#include "lagfsi/tensor.hpp"

namespace lagfsi {

enum class ElementForm {
  MassP2,            // (phi, psi), componentwise
  ViscousIdentity,   // nu (grad phi, grad psi), the a = I viscous form
  Elastic,           // lambda + mu linear elasticity
  PenaltyIdentity,   // (1/eps)(div phi, div psi), the a = I penalty form
};

/// Closed-form 12x12 element matrix of the vector P2 form on the triangle
/// (p0, p1, p2). Local dof = node*2 + component with node order
/// {v0, v1, v2, m01, m12, m20}. Throws on degenerate triangles.
DenseMatrix symbolic_element_oracle(ElementForm form, const Vec3& p0, const Vec3& p1,
                                    const Vec3& p2, const MaterialParams& params,
                                    double eps);

/// Closed-form P1 scalar mass matrix (area/12) [[2,1,1],[1,2,1],[1,1,2]].
DenseMatrix p1_mass_oracle(const Vec3& p0, const Vec3& p1, const Vec3& p2);

/// Exact integral of lam0^a lam1^b lam2^c over a triangle of the given area.
double barycentric_integral(int a, int b, int c, double area);

/// Dense Cholesky route for SPD systems, independent of the CG path.
/// Refuses systems larger than 5000 unknowns.
Vec dense_oracle_solve(const CsrMatrix& A, const Vec& b);

struct EigenmodeOracle {
  double lambda_min = 0.0;
  double period = 0.0;  // 2 pi / sqrt(lambda_min)
  std::size_t iterations = 0;
  Vec mode;  // M-normalized eigenvector
};

/// Smallest generalized eigenvalue of K x = lambda M x (both SPD) by inverse
/// iteration with a dense factorization of K.
EigenmodeOracle eigenmode_oracle(const CsrMatrix& K, const CsrMatrix& M,
                                 double tol = 1e-12, std::size_t max_iter = 500);

}  // namespace lagfsi
