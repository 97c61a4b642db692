#pragma once

// Compatibility data construction: q0, w1, q1, w2 from elliptic solves and
// L2 projections, plus the compatibility residual table. Analytic inputs
// (u0, f) come from the polynomial catalogs so their derivatives are exact;
// derivatives of the discrete fields q0/w1 are taken elementwise.

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "lagfsi/catalogs.hpp"
#include "lagfsi/la.hpp"
#include "lagfsi/material.hpp"
#include "lagfsi/space.hpp"

namespace lagfsi {

struct DataSpec {
  PolyField2 u0;
  ForcingSpec f;
};

struct InitialData {
  Vec u0;  // velocity-space nodal field
  Vec q0;  // fluid scalar field
  Vec w1;  // velocity-space nodal field
  Vec q1;  // fluid scalar field
  Vec w2;  // velocity-space nodal field
  std::vector<std::pair<std::string, double>> compat_residuals;
};

struct PoissonSolveInfo {
  std::size_t iterations = 0;
  double relative_residual = 0.0;
};

/// Mixed Dirichlet (Gamma_0) / Neumann (outer fluid boundary) Poisson data
/// for  laplace(q) = div(flux) + source. The weak form integrates the flux
/// term by parts, so `neumann` must carry the boundary flux net of flux.N
/// (pass the full dq/dN when flux is absent).
struct MixedPoissonData {
  std::function<double(std::size_t elem, const Vec3&)> source;  // may be null
  std::function<Vec3(std::size_t elem, const Vec3&)> flux;      // may be null
  std::function<double(const Vec3&)> dirichlet;                 // may be null (0)
  // (outer facet index, point) -> flux value; may be null (0)
  std::function<double(std::size_t, const Vec3&)> neumann;
};

struct MixedPoissonSystem {
  CsrMatrix A;  // reduced (free-node) stiffness
  Vec b;        // reduced right-hand side
  Vec lifted;   // full-length field holding the Dirichlet values
};

MixedPoissonSystem assemble_mixed_poisson(const FluidScalarSpace& space,
                                          const MixedPoissonData& data);

Vec solve_mixed_poisson(const FluidScalarSpace& space, const MixedPoissonData& data,
                        PoissonSolveInfo* info = nullptr);

/// L2 projection onto the velocity space of a per-element integrand.
Vec l2_project(const VelocitySpace& space,
               const std::function<Vec3(std::size_t elem, const Vec3&)>& integrand);

Vec solve_q0(const DataSpec& spec, const FluidScalarSpace& scalar,
             const MaterialParams& params, PoissonSolveInfo* info = nullptr);

Vec compute_w1(const DataSpec& spec, const Vec& q0, const VelocitySpace& space,
               const FluidScalarSpace& scalar, const MaterialParams& params);

Vec solve_q1(const DataSpec& spec, const Vec& w1, const Vec& q0,
             const VelocitySpace& space, const FluidScalarSpace& scalar,
             const MaterialParams& params, PoissonSolveInfo* info = nullptr);

Vec compute_w2(const DataSpec& spec, const Vec& w1, const Vec& q0, const Vec& q1,
               const VelocitySpace& space, const FluidScalarSpace& scalar,
               const MaterialParams& params);

/// L2(Gamma_0)/L2(boundary) norms of the compatibility residuals:
/// tangential_stress_u0, w1_outer_boundary, interface_balance,
/// tangential_stress_w1.
std::vector<std::pair<std::string, double>> check_compatibility(
    const DataSpec& spec, const InitialData& data, const VelocitySpace& space,
    const FluidScalarSpace& scalar, const MaterialParams& params);

InitialData build_initial_data(const DataSpec& spec, const VelocitySpace& space,
                               const FluidScalarSpace& scalar,
                               const MaterialParams& params);

}  // namespace lagfsi
