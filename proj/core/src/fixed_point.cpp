#include "lagfsi/fixed_point.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <memory>

namespace lagfsi {

namespace {

std::vector<double> step_grid(const StepperConfig& cfg) {
  const std::size_t nsteps = static_cast<std::size_t>(std::llround(cfg.T / cfg.dt));
  const double dt = cfg.T / static_cast<double>(std::max<std::size_t>(nsteps, 1));
  std::vector<double> times(std::max<std::size_t>(nsteps, 1) + 1);
  for (std::size_t k = 0; k < times.size(); ++k) times[k] = k * dt;
  times.back() = cfg.T;
  return times;
}

/// Node adjacency over shared elements (self included).
std::vector<std::vector<int>> node_patches(const VelocitySpace& space) {
  std::vector<std::vector<int>> patch(space.num_scalar_nodes());
  for (std::size_t e = 0; e < space.mesh().num_elements(); ++e) {
    const auto& nodes = space.element_nodes(e);
    for (int a : nodes)
      for (int b : nodes) patch[a].push_back(b);
  }
  for (auto& p : patch) {
    std::sort(p.begin(), p.end());
    p.erase(std::unique(p.begin(), p.end()), p.end());
  }
  return patch;
}

/// One affine-reproducing smoothing sweep: each nodal value is replaced by
/// the value at the node of the linear least-squares fit over its patch.
Vec smooth_sweep(const VelocitySpace& space, const Vec& field,
                 const std::vector<std::vector<int>>& patch) {
  const std::size_t dim = space.dim();
  Vec out = field;
  for (std::size_t n = 0; n < space.num_scalar_nodes(); ++n) {
    const Vec3& xc = space.node_coord(n);
    Mat xtx(3);
    std::array<Vec3, 2> xtb{};  // one rhs per component
    for (int m : patch[n]) {
      const double dx = space.node_coord(m)[0] - xc[0];
      const double dy = space.node_coord(m)[1] - xc[1];
      const double row[3] = {1.0, dx, dy};
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) xtx(i, j) += row[i] * row[j];
      for (std::size_t c = 0; c < dim; ++c) {
        const double v = field[m * dim + c];
        for (int i = 0; i < 3; ++i) xtb[c][i] += row[i] * v;
      }
    }
    if (std::abs(det(xtx)) < 1e-12) continue;  // degenerate patch: keep value
    const Mat inv = inverse(xtx);
    for (std::size_t c = 0; c < dim; ++c)
      out[n * dim + c] = inv.apply(xtb[c])[0];  // fit evaluated at the node
  }
  return out;
}

}  // namespace

IterateSeries seed_iterate(const VelocitySpace& space, const InitialData& data,
                           const StepperConfig& cfg) {
  IterateSeries s;
  s.times = step_grid(cfg);
  Vec u0 = data.u0;
  Vec w1 = data.w1;
  space.zero_boundary(u0);
  space.zero_boundary(w1);
  for (double t : s.times) {
    Vec v(u0.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = u0[i] + t * w1[i];
    s.w.push_back(std::move(v));
  }
  return s;
}

IterateSeries mollify_velocity(const VelocitySpace& space, const IterateSeries& v,
                               std::size_t n, const Vec& u0, const Vec& w1) {
  if (n == 0) throw std::runtime_error("mollify_velocity: level n must be >= 1");
  const std::size_t nt = v.times.size();
  const std::vector<std::vector<int>> patch = node_patches(space);
  const std::size_t sweeps = std::max<std::size_t>(1, 8 / n);

  std::vector<Vec> smooth(nt);
  for (std::size_t k = 0; k < nt; ++k) {
    Vec f = v.w[k];
    for (std::size_t s = 0; s < sweeps; ++s) f = smooth_sweep(space, f, patch);
    smooth[k] = std::move(f);
  }

  // second time derivative on the step grid
  std::vector<Vec> vtt(nt, Vec(v.w[0].size(), 0.0));
  if (nt >= 3) {
    for (std::size_t k = 1; k + 1 < nt; ++k) {
      const double dt = v.times[k] - v.times[k - 1];
      for (std::size_t i = 0; i < vtt[k].size(); ++i)
        vtt[k][i] =
            (smooth[k + 1][i] - 2.0 * smooth[k][i] + smooth[k - 1][i]) / (dt * dt);
    }
    vtt.front() = vtt[1];
    vtt.back() = vtt[nt - 2];
  }

  // v_n(t) = u0 + t w1 - int_0^t (t' - t) vtt(t') dt'
  IterateSeries out;
  out.times = v.times;
  out.w.resize(nt);
  for (std::size_t k = 0; k < nt; ++k) {
    const double t = v.times[k];
    Vec acc(v.w[0].size(), 0.0);
    for (std::size_t j = 1; j <= k; ++j) {
      const double dt = v.times[j] - v.times[j - 1];
      const double c0 = 0.5 * dt * (v.times[j - 1] - t);
      const double c1 = 0.5 * dt * (v.times[j] - t);
      for (std::size_t i = 0; i < acc.size(); ++i)
        acc[i] += c0 * vtt[j - 1][i] + c1 * vtt[j][i];
    }
    Vec f(acc.size());
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = u0[i] + t * w1[i] - acc[i];
    out.w[k] = std::move(f);
  }
  return out;
}

Trajectory theta_map(const VelocitySpace& space, const FluidScalarSpace& scalar,
                     const InitialData& data, const ForcingSpec& f,
                     const MaterialParams& params, const StepperConfig& cfg,
                     const IterateSeries& v) {
  const std::vector<double> grid = step_grid(cfg);
  if (v.times.size() != grid.size())
    throw std::runtime_error("theta_map: iterate not sampled on the step grid");
  for (std::size_t k = 0; k < grid.size(); ++k)
    if (std::abs(v.times[k] - grid[k]) > 1e-12 * (1.0 + cfg.T))
      throw std::runtime_error("theta_map: iterate grid mismatch");

  // displacement of the flow map of v at each step midpoint (trapezoid up to
  // t_k, then the half-interval with the midpoint value of v)
  const std::size_t nsteps = grid.size() - 1;
  std::vector<Vec> disp_mid(nsteps, Vec(v.w[0].size(), 0.0));
  Vec cum(v.w[0].size(), 0.0);
  for (std::size_t k = 0; k < nsteps; ++k) {
    const double dt = grid[k + 1] - grid[k];
    for (std::size_t i = 0; i < cum.size(); ++i)
      disp_mid[k][i] = cum[i] + (dt / 8.0) * (3.0 * v.w[k][i] + v.w[k + 1][i]);
    for (std::size_t i = 0; i < cum.size(); ++i)
      cum[i] += 0.5 * dt * (v.w[k][i] + v.w[k + 1][i]);
  }

  auto state = std::make_shared<FlowMapState>(space);
  const std::size_t nq = space.quad_per_element();
  CoefficientProvider provider = [state, disp_mid, grid, &space,
                                  nq](double t_mid) -> FrozenCoefficients {
    std::size_t k = 0;
    while (k + 1 < disp_mid.size() && grid[k + 1] <= t_mid) ++k;
    state->set_displacement(disp_mid[k], t_mid);
    const InvertibilityReport rep = state->invertibility_check();
    if (!rep.valid) throw InvertibilityError(t_mid);
    FrozenCoefficients fc;
    const std::size_t total = space.mesh().num_elements() * nq;
    fc.a.resize(total);
    fc.eta_x.resize(total);
    for (std::size_t e = 0; e < space.mesh().num_elements(); ++e)
      for (std::size_t q = 0; q < nq; ++q) {
        fc.a[e * nq + q] = state->coeff(e, q).a;
        fc.eta_x[e * nq + q] = state->position_at_qp(e, q);
      }
    fc.min_det = rep.min_det;
    return fc;
  };

  return run_linear_solve(space, scalar, data, f, params, cfg, provider);
}

CtmReport ctm_membership(const VelocitySpace& space, const Trajectory& traj, double M,
                         const InitialData& data) {
  CtmReport rep;
  rep.wt_norm2 = compute_norm_surrogates(space, traj).wt_total();
  Vec u0 = data.u0;
  Vec w1 = data.w1;
  space.zero_boundary(u0);
  space.zero_boundary(w1);
  Vec diff(u0.size());
  for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = traj.w[0][i] - u0[i];
  rep.initial_value_mismatch = std::sqrt(l2_norm2(space, diff));
  if (traj.times.size() > 1) {
    const double dt = traj.times[1] - traj.times[0];
    for (std::size_t i = 0; i < diff.size(); ++i)
      diff[i] = (traj.w[1][i] - traj.w[0][i]) / dt - w1[i];
    rep.initial_rate_mismatch = std::sqrt(l2_norm2(space, diff));
  }
  // the rate mismatch is O(dt) for discrete Theta output; reported, not gated
  rep.ok = rep.wt_norm2 <= M * (1.0 + 1e-9) &&
           rep.initial_value_mismatch <= 1e-8 * (1.0 + std::sqrt(M));
  return rep;
}

FixedPointResult iterate_to_fixed_point(const VelocitySpace& space,
                                        const FluidScalarSpace& scalar,
                                        const InitialData& data, const ForcingSpec& f,
                                        const MaterialParams& params,
                                        FixedPointConfig cfg,
                                        const IterateSeries* start) {
  Vec u0 = data.u0;
  Vec w1 = data.w1;
  space.zero_boundary(u0);
  space.zero_boundary(w1);

  std::size_t halvings = 0;
  while (true) {
    IterateSeries v =
        (start && halvings == 0) ? *start : seed_iterate(space, data, cfg.stepper);

    // default M is fixed from the first Theta output below: the seed is
    // linear in time, so its surrogate norm misses the curvature terms that
    // every genuine iterate carries
    double M = cfg.M;

    FixedPointReport report;
    report.tolerance = cfg.tol;
    report.T = cfg.stepper.T;
    report.halvings = halvings;
    report.m_bound = M;

    bool restart = false;
    FixedPointResult result;
    for (std::size_t it = 0; it < cfg.max_iterations; ++it) {
      IterateSeries input = v;
      if (cfg.stepper.penalty.mollify_n > 0)
        input = mollify_velocity(space, v, cfg.stepper.penalty.mollify_n, u0, w1);

      Trajectory out;
      try {
        out = theta_map(space, scalar, data, f, params, cfg.stepper, input);
      } catch (const InvertibilityError&) {
        restart = true;
        break;
      }

      if (cfg.on_iterate) cfg.on_iterate(out);

      if (M <= 0.0) {
        M = std::max(2.0 * compute_norm_surrogates(space, out).wt_total(), 1e-12);
        report.m_bound = M;
      }

      const double dist = trajectory_distance(space, v.times, v.w, out.w);
      report.iterate_distances.push_back(dist);
      if (report.iterate_distances.size() >= 2) {
        const double prev = report.iterate_distances[report.iterate_distances.size() - 2];
        report.contraction_ratios.push_back(prev > 0.0 ? dist / prev : 0.0);
      }
      report.m_bound_ok.push_back(ctm_membership(space, out, M, data).ok);
      report.iterations = it + 1;

      if (dist <= cfg.tol) {
        report.converged = true;
        result.solution = std::move(out);
        result.report = std::move(report);
        return result;
      }

      const auto& r = report.contraction_ratios;
      if (r.size() >= 3 && r[r.size() - 1] >= 1.0 && r[r.size() - 2] >= 1.0 &&
          r[r.size() - 3] >= 1.0) {
        restart = true;
        break;
      }

      v.w = out.w;  // next iterate
      result.solution = std::move(out);
    }

    if (!restart) {
      result.report = std::move(report);
      return result;  // unconverged after max_iterations; caller decides
    }

    if (++halvings > cfg.max_halvings) throw IterateDivergenceError();
    cfg.stepper.T *= 0.5;
    if (cfg.stepper.dt > cfg.stepper.T) cfg.stepper.dt = cfg.stepper.T;
  }
}

}  // namespace lagfsi
