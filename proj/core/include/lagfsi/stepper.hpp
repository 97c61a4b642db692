#pragma once

// The penalized linear solver: assembles the epsilon-penalized Galerkin
// operators for frozen coefficient matrices a(eta) and advances
//   M w_t + nu (grad w a, grad phi a) + (c grad d, grad phi)
//     + (1/eps)(tr(a grad w) - eps (q0 + t q1), tr(a grad phi)) = (F, phi)
// with backward Euler (default) or implicit midpoint, recovering the
// pressure q_eps = q0 + t q1 - (1/eps) tr(a grad w).

#include <functional>
#include <vector>

#include "lagfsi/catalogs.hpp"
#include "lagfsi/initial_data.hpp"
#include "lagfsi/la.hpp"
#include "lagfsi/material.hpp"
#include "lagfsi/space.hpp"

namespace lagfsi {

enum class Integrator { BackwardEuler, Midpoint };

struct PenaltySettings {
  double epsilon = 1e-4;
  std::size_t mollify_n = 0;  // 0 = no mollification

  void validate() const {
    if (epsilon <= 0.0) throw std::runtime_error("penalty: epsilon must be > 0");
  }
};

struct StepperConfig {
  double dt = 0.01;
  double T = 0.1;
  PenaltySettings penalty;
  Integrator integrator = Integrator::BackwardEuler;
};

/// Coefficients frozen from a given velocity's flow map, sampled at the
/// element quadrature points, together with the mapped positions eta(x_q)
/// used to compose the forcing.
struct FrozenCoefficients {
  std::vector<Mat> a;       // element-major, quad-point-minor
  std::vector<Vec3> eta_x;  // eta at the same points
  double min_det = 1.0;
};

/// t_mid -> coefficients. Called once per step with increasing times.
using CoefficientProvider = std::function<FrozenCoefficients(double t_mid)>;

/// a = I, eta = Id (the Stokes+elasticity limit and the seed configuration).
CoefficientProvider identity_coefficients(const VelocitySpace& space);

/// Time-independent operators.
CsrMatrix assemble_mass(const VelocitySpace& space);
CsrMatrix assemble_elastic(const VelocitySpace& space, const MaterialParams& params);

/// The a-dependent operators of one step.
struct StepOperators {
  CsrMatrix A;  // viscous  nu (grad w a, grad phi a), fluid elements
  CsrMatrix P;  // penalty  (1/eps)(tr(a grad w), tr(a grad phi)), fluid
  Vec offset0;  // (q0, tr(a grad phi))
  Vec offset1;  // (q1, tr(a grad phi)); offset load = offset0 + t * offset1
};

StepOperators assemble_step_operators(const VelocitySpace& space,
                                      const FluidScalarSpace& scalar,
                                      const FrozenCoefficients& coeffs, const Vec& q0,
                                      const Vec& q1, const MaterialParams& params,
                                      double eps);

/// External load (f o eta, phi) over fluid and (f, phi) over solid.
Vec assemble_forcing_load(const VelocitySpace& space, const ForcingSpec& f, double t,
                          const FrozenCoefficients& coeffs);

/// q_eps = q0 + t q1 - (1/eps) tr(a grad w), projected onto the fluid P1 space.
Vec recover_pressure(const VelocitySpace& space, const FluidScalarSpace& scalar,
                     const FrozenCoefficients& coeffs, const Vec& w, const Vec& q0,
                     const Vec& q1, double t, double eps);

struct StepRecord {
  double t = 0.0;
  double kinetic = 0.0;
  double elastic = 0.0;
  double viscous_cum = 0.0;
  double penalty_cum = 0.0;
  double offset_work_cum = 0.0;
  double external_work_cum = 0.0;
  double defect = 0.0;  // per-step energy defect (numerical dissipation)
  double div_residual = 0.0;
  double min_det = 1.0;
};

struct Trajectory {
  std::vector<double> times;  // N+1 samples including t = 0
  std::vector<Vec> w;
  std::vector<Vec> d;  // solid displacement accumulated by the integrator
  std::vector<Vec> q;  // recovered pressure
  std::vector<StepRecord> ledger;  // one record per sample (first is t = 0)
};

/// Runs the linear problem over [0, T] with frozen coefficients.
/// Initial state: w(0) = u0 (boundary rows zeroed), d(0) = 0.
Trajectory run_linear_solve(const VelocitySpace& space, const FluidScalarSpace& scalar,
                            const InitialData& data, const ForcingSpec& f,
                            const MaterialParams& params, const StepperConfig& cfg,
                            const CoefficientProvider& provider);

}  // namespace lagfsi
