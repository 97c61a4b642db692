#pragma once

// The fixed-point layer: Theta_T maps an iterate velocity v to the solution
// w of the linear penalized problem with coefficients frozen from the flow
// map of v; Picard iteration on Theta_T with optional mollification and
// T-halving on failure plays the role of the existence argument.

#include <functional>
#include <stdexcept>
#include <vector>

#include "lagfsi/diagnostics.hpp"
#include "lagfsi/flow_map.hpp"
#include "lagfsi/initial_data.hpp"
#include "lagfsi/stepper.hpp"

namespace lagfsi {

/// Thrown when det(grad eta) drops below 1/2 along the horizon; carries the
/// failure time so the driver can halve T.
struct InvertibilityError : std::runtime_error {
  double failure_time;
  explicit InvertibilityError(double t)
      : std::runtime_error("flow map lost invertibility (det < 1/2) at t = " +
                           std::to_string(t)),
        failure_time(t) {}
};

struct IterateDivergenceError : std::runtime_error {
  IterateDivergenceError()
      : std::runtime_error(
            "fixed-point iteration diverging (ratio >= 1 for 3 consecutive "
            "iterates); choose a smaller T") {}
};

struct FixedPointConfig {
  StepperConfig stepper;
  double tol = 1e-8;
  std::size_t max_iterations = 30;
  double M = 0.0;           // 0 = default to 2x the seed trajectory W_T norm
  std::size_t max_halvings = 6;
  /// Observer invoked with each Theta output (iterate emission).
  std::function<void(const Trajectory&)> on_iterate;
};

struct FixedPointReport {
  std::vector<double> iterate_distances;   // ||Theta(v_k) - v_k|| in L2(0,T;H1)
  std::vector<double> contraction_ratios;  // successive distance ratios
  std::vector<bool> m_bound_ok;            // C_T(M) membership per iterate
  bool converged = false;
  std::size_t iterations = 0;
  double tolerance = 0.0;
  double T = 0.0;  // horizon actually used after any halving
  std::size_t halvings = 0;
  double m_bound = 0.0;
};

/// Velocity time-series on the step grid.
struct IterateSeries {
  std::vector<double> times;
  std::vector<Vec> w;
};

/// Affine-reproducing local least-squares smoothing (sweep count ~ 1/n) with
/// the initial-data correction v_n(t) = u0 + t w1 - int_0^t (t'-t) vtt dt'.
IterateSeries mollify_velocity(const VelocitySpace& space, const IterateSeries& v,
                               std::size_t n, const Vec& u0, const Vec& w1);

/// Seed iterate v(t) = u0 + t w1 on the step grid of cfg.
IterateSeries seed_iterate(const VelocitySpace& space, const InitialData& data,
                           const StepperConfig& cfg);

/// One application of Theta_T. Throws InvertibilityError when the flow map
/// of v violates det >= 1/2 before T.
Trajectory theta_map(const VelocitySpace& space, const FluidScalarSpace& scalar,
                     const InitialData& data, const ForcingSpec& f,
                     const MaterialParams& params, const StepperConfig& cfg,
                     const IterateSeries& v);

struct CtmReport {
  bool ok = false;
  double wt_norm2 = 0.0;
  double initial_value_mismatch = 0.0;  // ||v(0) - u0||_{L2}
  double initial_rate_mismatch = 0.0;   // ||(v(dt) - v(0))/dt - w1||_{L2}
};

CtmReport ctm_membership(const VelocitySpace& space, const Trajectory& traj, double M,
                         const InitialData& data);

struct FixedPointResult {
  Trajectory solution;
  FixedPointReport report;
};

/// Picard iteration v_{k+1} = Theta_T(v_k), seeded with u0 + t w1 (or the
/// caller's series), with T-halving restarts on invertibility loss or
/// observed divergence.
FixedPointResult iterate_to_fixed_point(const VelocitySpace& space,
                                        const FluidScalarSpace& scalar,
                                        const InitialData& data, const ForcingSpec& f,
                                        const MaterialParams& params,
                                        FixedPointConfig cfg,
                                        const IterateSeries* start = nullptr);

}  // namespace lagfsi
