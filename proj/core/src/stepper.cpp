#include "lagfsi/stepper.hpp"

#include <cmath>
#include <stdexcept>

namespace lagfsi {

namespace {

/// dest += scale * src, restricted to free velocity dofs.
void add_reduced(DenseMatrix& dest, const CsrMatrix& src, const VelocitySpace& space,
                 double scale) {
  const auto& rp = src.row_ptr();
  const auto& ci = src.col_idx();
  const auto& vv = src.values();
  for (std::size_t i = 0; i < src.size(); ++i) {
    const int fi = space.free_index(i);
    if (fi < 0) continue;
    for (std::size_t k = rp[i]; k < rp[i + 1]; ++k) {
      const int fj = space.free_index(ci[k]);
      if (fj >= 0) dest(fi, fj) += scale * vv[k];
    }
  }
}

double quadratic_form(const CsrMatrix& A, const Vec& x) {
  return dot(x, A.multiply(x));
}

}  // namespace

CoefficientProvider identity_coefficients(const VelocitySpace& space) {
  const std::size_t n = space.mesh().num_elements() * space.quad_per_element();
  FrozenCoefficients fc;
  fc.a.assign(n, Mat::identity(space.dim()));
  fc.eta_x.resize(n);
  for (std::size_t e = 0; e < space.mesh().num_elements(); ++e)
    for (std::size_t q = 0; q < space.quad_per_element(); ++q)
      fc.eta_x[e * space.quad_per_element() + q] = space.quad(e, q).x;
  fc.min_det = 1.0;
  return [fc](double) { return fc; };
}

CsrMatrix assemble_mass(const VelocitySpace& space) { return space.mass_matrix(); }

CsrMatrix assemble_elastic(const VelocitySpace& space, const MaterialParams& params) {
  const Mesh& mesh = space.mesh();
  const std::size_t dim = space.dim();
  TripletList trip(space.num_dofs());
  for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
    if (mesh.tags[e] != Subdomain::Solid) continue;
    const auto& nodes = space.element_nodes(e);
    for (std::size_t q = 0; q < space.quad_per_element(); ++q) {
      const ElementQuadData& d = space.quad(e, q);
      for (std::size_t a = 0; a < 6; ++a)
        for (std::size_t b = 0; b < 6; ++b) {
          const double gg = dot(d.dshape[a], d.dshape[b], dim);
          for (std::size_t i = 0; i < dim; ++i)
            for (std::size_t k = 0; k < dim; ++k) {
              // c^{ijkl} dshape_b[l] dshape_a[j]
              double v = params.lambda * d.dshape[a][i] * d.dshape[b][k] +
                         params.mu * d.dshape[a][k] * d.dshape[b][i];
              if (i == k) v += params.mu * gg;
              trip.add(nodes[a] * dim + i, nodes[b] * dim + k, d.w * v);
            }
        }
    }
  }
  return trip.to_csr();
}

StepOperators assemble_step_operators(const VelocitySpace& space,
                                      const FluidScalarSpace& scalar,
                                      const FrozenCoefficients& coeffs, const Vec& q0,
                                      const Vec& q1, const MaterialParams& params,
                                      double eps) {
  if (eps <= 0.0) throw std::runtime_error("assemble_step_operators: eps must be > 0");
  const Mesh& mesh = space.mesh();
  const std::size_t dim = space.dim();
  const std::size_t nq = space.quad_per_element();
  if (coeffs.a.size() != mesh.num_elements() * nq)
    throw std::runtime_error("assemble_step_operators: coefficient field size mismatch");
  TripletList tripA(space.num_dofs());
  TripletList tripP(space.num_dofs());
  StepOperators ops;
  ops.offset0.assign(space.num_dofs(), 0.0);
  ops.offset1.assign(space.num_dofs(), 0.0);

  for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
    if (mesh.tags[e] != Subdomain::Fluid) continue;
    const auto& nodes = space.element_nodes(e);
    for (std::size_t q = 0; q < nq; ++q) {
      const ElementQuadData& d = space.quad(e, q);
      const Mat& a = coeffs.a[e * nq + q];
      // ta[b] = a^T dshape_b; both the viscous form nu (grad w a, grad phi a)
      // and tr(a grad phi) reduce to it.
      std::array<Vec3, 6> ta;
      for (std::size_t b = 0; b < 6; ++b) ta[b] = a.transpose().apply(d.dshape[b]);

      const double q0v = scalar.value_at(q0, e, d.x);
      const double q1v = scalar.value_at(q1, e, d.x);
      for (std::size_t b = 0; b < 6; ++b)
        for (std::size_t c = 0; c < dim; ++c) {
          ops.offset0[nodes[b] * dim + c] += d.w * q0v * ta[b][c];
          ops.offset1[nodes[b] * dim + c] += d.w * q1v * ta[b][c];
        }

      for (std::size_t b = 0; b < 6; ++b)
        for (std::size_t b2 = 0; b2 < 6; ++b2) {
          const double visc = params.nu * d.w * dot(ta[b], ta[b2], dim);
          for (std::size_t c = 0; c < dim; ++c)
            tripA.add(nodes[b] * dim + c, nodes[b2] * dim + c, visc);
          for (std::size_t c = 0; c < dim; ++c)
            for (std::size_t c2 = 0; c2 < dim; ++c2)
              tripP.add(nodes[b] * dim + c, nodes[b2] * dim + c2,
                        (d.w / eps) * ta[b][c] * ta[b2][c2]);
        }
    }
  }
  ops.A = tripA.to_csr();
  ops.P = tripP.to_csr();
  return ops;
}

Vec assemble_forcing_load(const VelocitySpace& space, const ForcingSpec& f, double t,
                          const FrozenCoefficients& coeffs) {
  const Mesh& mesh = space.mesh();
  const std::size_t dim = space.dim();
  const std::size_t nq = space.quad_per_element();
  Vec load(space.num_dofs(), 0.0);
  for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
    const auto& nodes = space.element_nodes(e);
    const bool fluid = mesh.tags[e] == Subdomain::Fluid;
    for (std::size_t q = 0; q < nq; ++q) {
      const ElementQuadData& d = space.quad(e, q);
      const Vec3 x = fluid ? coeffs.eta_x[e * nq + q] : d.x;  // F = f o eta in fluid
      const Vec3 val = f.eval(x, t);
      for (std::size_t b = 0; b < 6; ++b)
        for (std::size_t c = 0; c < dim; ++c)
          load[nodes[b] * dim + c] += d.w * val[c] * d.shape[b];
    }
  }
  return load;
}

Vec recover_pressure(const VelocitySpace& space, const FluidScalarSpace& scalar,
                     const FrozenCoefficients& coeffs, const Vec& w, const Vec& q0,
                     const Vec& q1, double t, double eps) {
  const Mesh& mesh = space.mesh();
  const std::size_t nq = space.quad_per_element();
  const TriQuadRule& rule = tri_quadrature();
  Vec rhs(scalar.num_nodes(), 0.0);
  for (std::size_t e : scalar.fluid_elements()) {
    const auto& el = mesh.elements[e];
    for (std::size_t q = 0; q < nq; ++q) {
      const ElementQuadData& d = space.quad(e, q);
      const Mat& a = coeffs.a[e * nq + q];
      const Mat gw = space.grad_at_qp(w, e, q);
      const double div_a = a.matmul(gw).trace();
      const double val = scalar.value_at(q0, e, d.x) + t * scalar.value_at(q1, e, d.x) -
                         div_a / eps;
      const double x = rule.points[q][0];
      const double y = rule.points[q][1];
      const std::array<double, 3> lam{1.0 - x - y, x, y};
      for (int vtx = 0; vtx < 3; ++vtx)
        rhs[scalar.node_of_vertex(el[vtx])] += d.w * val * lam[vtx];
    }
  }
  const CsrMatrix M = scalar.mass_matrix();
  Vec q(rhs.size(), 0.0);
  const CgResult r = conjugate_gradient(M, rhs, q, 1e-13, 20 * rhs.size() + 200);
  if (!r.converged) throw std::runtime_error("recover_pressure: mass solve stalled");
  return q;
}

Trajectory run_linear_solve(const VelocitySpace& space, const FluidScalarSpace& scalar,
                            const InitialData& data, const ForcingSpec& f,
                            const MaterialParams& params, const StepperConfig& cfg,
                            const CoefficientProvider& provider) {
  params.validate();
  cfg.penalty.validate();
  if (cfg.dt <= 0.0 || cfg.T <= 0.0 || cfg.dt > cfg.T)
    throw std::runtime_error("stepper: need 0 < dt <= T");
  const double eps = cfg.penalty.epsilon;
  const std::size_t nsteps = static_cast<std::size_t>(std::llround(cfg.T / cfg.dt));
  const double dt = cfg.T / static_cast<double>(nsteps);
  const std::size_t dim = space.dim();
  const std::size_t nq = space.quad_per_element();
  const Mesh& mesh = space.mesh();

  const CsrMatrix M = assemble_mass(space);
  const CsrMatrix K = assemble_elastic(space, params);

  Trajectory traj;
  Vec w = data.u0;
  space.zero_boundary(w);
  Vec d(space.num_dofs(), 0.0);

  const FrozenCoefficients c0 = identity_coefficients(space)(0.0);
  traj.times.push_back(0.0);
  traj.w.push_back(w);
  traj.d.push_back(d);
  traj.q.push_back(recover_pressure(space, scalar, c0, w, data.q0, data.q1, 0.0, eps));
  StepRecord rec0;
  rec0.kinetic = 0.5 * quadratic_form(M, w);
  rec0.elastic = 0.5 * quadratic_form(K, d);
  traj.ledger.push_back(rec0);

  StepRecord acc = rec0;
  for (std::size_t step = 0; step < nsteps; ++step) {
    const double t0 = step * dt;
    const double t1 = t0 + dt;
    const double tmid = t0 + 0.5 * dt;
    const FrozenCoefficients fc = provider(tmid);
    const StepOperators ops =
        assemble_step_operators(space, scalar, fc, data.q0, data.q1, params, eps);

    const std::size_t nf = space.num_free_dofs();
    DenseMatrix lhs(nf, nf);
    Vec rhs_full(space.num_dofs(), 0.0);
    double t_load = t1;
    if (cfg.integrator == Integrator::BackwardEuler) {
      add_reduced(lhs, M, space, 1.0 / dt);
      add_reduced(lhs, ops.A, space, 1.0);
      add_reduced(lhs, ops.P, space, 1.0);
      add_reduced(lhs, K, space, dt);
      const Vec Mw = M.multiply(w);
      const Vec Kd = K.multiply(d);
      for (std::size_t i = 0; i < rhs_full.size(); ++i)
        rhs_full[i] = Mw[i] / dt - Kd[i];
    } else {
      t_load = tmid;
      add_reduced(lhs, M, space, 1.0 / dt);
      add_reduced(lhs, ops.A, space, 0.5);
      add_reduced(lhs, ops.P, space, 0.5);
      add_reduced(lhs, K, space, 0.25 * dt);
      const Vec Mw = M.multiply(w);
      const Vec Aw = ops.A.multiply(w);
      const Vec Pw = ops.P.multiply(w);
      const Vec Kd = K.multiply(d);
      const Vec Kw = K.multiply(w);
      for (std::size_t i = 0; i < rhs_full.size(); ++i)
        rhs_full[i] = Mw[i] / dt - 0.5 * (Aw[i] + Pw[i]) - Kd[i] - 0.25 * dt * Kw[i];
    }
    const Vec ext = assemble_forcing_load(space, f, t_load, fc);
    Vec offset(space.num_dofs(), 0.0);
    for (std::size_t i = 0; i < offset.size(); ++i)
      offset[i] = ops.offset0[i] + t_load * ops.offset1[i];
    for (std::size_t i = 0; i < rhs_full.size(); ++i) rhs_full[i] += ext[i] + offset[i];

    const Vec rhs = space.restrict_free(rhs_full);
    const CholeskyFactor chol(lhs);
    const Vec w_new_free = chol.solve(rhs);
    const Vec w_new = space.prolong_free(w_new_free);

    Vec w_eval(space.num_dofs());
    Vec d_new(space.num_dofs());
    if (cfg.integrator == Integrator::BackwardEuler) {
      w_eval = w_new;
      for (std::size_t i = 0; i < d_new.size(); ++i) d_new[i] = d[i] + dt * w_new[i];
    } else {
      for (std::size_t i = 0; i < w_eval.size(); ++i) w_eval[i] = 0.5 * (w[i] + w_new[i]);
      for (std::size_t i = 0; i < d_new.size(); ++i) d_new[i] = d[i] + dt * w_eval[i];
    }

    // energy ledger
    StepRecord rec;
    rec.t = t1;
    rec.kinetic = 0.5 * quadratic_form(M, w_new);
    rec.elastic = 0.5 * quadratic_form(K, d_new);
    const double visc_inc = dt * quadratic_form(ops.A, w_eval);
    const double pen_inc = dt * quadratic_form(ops.P, w_eval);
    const double off_inc = dt * dot(offset, w_eval);
    const double ext_inc = dt * dot(ext, w_eval);
    rec.viscous_cum = acc.viscous_cum + visc_inc;
    rec.penalty_cum = acc.penalty_cum + pen_inc;
    rec.offset_work_cum = acc.offset_work_cum + off_inc;
    rec.external_work_cum = acc.external_work_cum + ext_inc;
    rec.defect = (ext_inc + off_inc) -
                 ((rec.kinetic - acc.kinetic) + (rec.elastic - acc.elastic) + visc_inc +
                  pen_inc);
    rec.min_det = fc.min_det;

    double div2 = 0.0;
    for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
      if (mesh.tags[e] != Subdomain::Fluid) continue;
      for (std::size_t q = 0; q < nq; ++q) {
        const Mat gw = space.grad_at_qp(w_new, e, q);
        const double tr = fc.a[e * nq + q].matmul(gw).trace();
        div2 += space.quad(e, q).w * tr * tr;
      }
    }
    rec.div_residual = std::sqrt(div2);
    (void)dim;

    w = w_new;
    d = d_new;
    traj.times.push_back(t1);
    traj.w.push_back(w);
    traj.d.push_back(d);
    traj.q.push_back(
        recover_pressure(space, scalar, fc, w, data.q0, data.q1, t1, eps));
    traj.ledger.push_back(rec);
    acc = rec;
  }
  return traj;
}

}  // namespace lagfsi
