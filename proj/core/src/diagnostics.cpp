#include "lagfsi/diagnostics.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

namespace lagfsi {

void write_ledger_csv(std::ostream& os, const Trajectory& traj,
                      const std::string& config_hash) {
  os << "# config_hash=" << config_hash << "\n";
  os << "t,kinetic,elastic,viscous_cum,penalty_cum,offset_work_cum,"
        "external_work_cum,defect,div_residual,min_det\n";
  os.precision(17);
  for (const StepRecord& r : traj.ledger) {
    os << r.t << ',' << r.kinetic << ',' << r.elastic << ',' << r.viscous_cum << ','
       << r.penalty_cum << ',' << r.offset_work_cum << ',' << r.external_work_cum << ','
       << r.defect << ',' << r.div_residual << ',' << r.min_det << '\n';
  }
}

double ledger_telescoping_defect(const Trajectory& traj) {
  if (traj.ledger.empty()) return 0.0;
  double total_defect = 0.0;
  for (std::size_t k = 1; k < traj.ledger.size(); ++k)
    total_defect += traj.ledger[k].defect;
  const StepRecord& first = traj.ledger.front();
  const StepRecord& last = traj.ledger.back();
  const double balance = (last.external_work_cum + last.offset_work_cum) -
                         ((last.kinetic - first.kinetic) + (last.elastic - first.elastic) +
                          last.viscous_cum + last.penalty_cum);
  return std::abs(total_defect - balance);
}

double divergence_residual(const VelocitySpace& space, const Vec& w,
                           const FrozenCoefficients& coeffs) {
  const Mesh& mesh = space.mesh();
  const std::size_t nq = space.quad_per_element();
  double acc = 0.0;
  for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
    if (mesh.tags[e] != Subdomain::Fluid) continue;
    for (std::size_t q = 0; q < nq; ++q) {
      const double tr = coeffs.a[e * nq + q].matmul(space.grad_at_qp(w, e, q)).trace();
      acc += space.quad(e, q).w * tr * tr;
    }
  }
  return std::sqrt(acc);
}

CollisionReport collision_margin(const std::vector<double>& times,
                                 const std::vector<double>& max_speed,
                                 double separation) {
  if (times.size() != max_speed.size())
    throw std::runtime_error("collision_margin: time/speed series size mismatch");
  CollisionReport rep;
  double integral = 0.0;
  for (std::size_t k = 0; k < times.size(); ++k) {
    if (k > 0)
      integral += 0.5 * (times[k] - times[k - 1]) * (max_speed[k] + max_speed[k - 1]);
    const double m = 0.5 * separation - integral;
    rep.margin.push_back(m);
    if (!rep.tripped && m <= 0.0) {
      rep.tripped = true;
      rep.trip_time = times[k];
    }
  }
  return rep;
}

std::vector<double> trajectory_max_speeds(const VelocitySpace& space,
                                          const std::vector<Vec>& w) {
  std::vector<double> out;
  out.reserve(w.size());
  for (const Vec& field : w) out.push_back(space.nodal_max_norm(field));
  return out;
}

double first_difference_quotient(const std::function<double(const Vec3&)>& u,
                                 const Vec3& x, const Vec3& h) {
  const double len = norm(h, 2);
  if (len <= 0.0) throw std::runtime_error("difference quotient: |h| must be > 0");
  return (u(x + h) - u(x)) / len;
}

double second_difference_quotient(const std::function<double(const Vec3&)>& u,
                                  const Vec3& x, const Vec3& h) {
  const double len = norm(h, 2);
  if (len <= 0.0) throw std::runtime_error("difference quotient: |h| must be > 0");
  return (u(x + h) + u(x - h) - 2.0 * u(x)) / (len * len);
}

namespace {

double sobolev_norm2(const VelocitySpace& space, const Vec& field,
                     std::optional<Subdomain> sub, bool with_gradient) {
  const Mesh& mesh = space.mesh();
  const std::size_t nq = space.quad_per_element();
  double acc = 0.0;
  for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
    if (sub && mesh.tags[e] != *sub) continue;
    for (std::size_t q = 0; q < nq; ++q) {
      const ElementQuadData& d = space.quad(e, q);
      const Vec3 v = space.value_at_qp(field, e, q);
      double val = dot(v, v, space.dim());
      if (with_gradient) {
        const Mat g = space.grad_at_qp(field, e, q);
        for (std::size_t i = 0; i < space.dim(); ++i)
          for (std::size_t j = 0; j < space.dim(); ++j) val += g(i, j) * g(i, j);
      }
      acc += d.w * val;
    }
  }
  return acc;
}

Vec scaled_difference(const Vec& a, const Vec& b, double scale) {
  Vec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = (a[i] - b[i]) * scale;
  return out;
}

}  // namespace

double l2_norm2(const VelocitySpace& space, const Vec& field,
                std::optional<Subdomain> sub) {
  return sobolev_norm2(space, field, sub, false);
}

double h1_norm2(const VelocitySpace& space, const Vec& field,
                std::optional<Subdomain> sub) {
  return sobolev_norm2(space, field, sub, true);
}

double trajectory_distance(const VelocitySpace& space, const std::vector<double>& times,
                           const std::vector<Vec>& a, const std::vector<Vec>& b) {
  if (a.size() != times.size() || b.size() != times.size())
    throw std::runtime_error("trajectory_distance: sample count mismatch");
  double acc = 0.0;
  std::vector<double> vals(times.size());
  for (std::size_t k = 0; k < times.size(); ++k)
    vals[k] = h1_norm2(space, scaled_difference(a[k], b[k], 1.0), std::nullopt);
  for (std::size_t k = 1; k < times.size(); ++k)
    acc += 0.5 * (times[k] - times[k - 1]) * (vals[k] + vals[k - 1]);
  return std::sqrt(acc);
}

NormSurrogates compute_norm_surrogates(const VelocitySpace& space,
                                       const Trajectory& traj) {
  NormSurrogates ns;
  const std::size_t n = traj.times.size();
  if (n == 0) return ns;

  auto trapezoid = [&](const std::function<double(std::size_t)>& f) {
    double acc = 0.0;
    for (std::size_t k = 1; k < n; ++k)
      acc += 0.5 * (traj.times[k] - traj.times[k - 1]) * (f(k) + f(k - 1));
    return acc;
  };

  ns.xt_u_l2t_h1 = trapezoid([&](std::size_t k) { return h1_norm2(space, traj.w[k]); });
  ns.xt_u_l2t_h1_fluid =
      trapezoid([&](std::size_t k) { return h1_norm2(space, traj.w[k], Subdomain::Fluid); });
  ns.xt_d_l2t_h1_solid =
      trapezoid([&](std::size_t k) { return h1_norm2(space, traj.d[k], Subdomain::Solid); });

  for (std::size_t k = 0; k < n; ++k) {
    ns.wt_sup_d_h1_solid =
        std::max(ns.wt_sup_d_h1_solid, h1_norm2(space, traj.d[k], Subdomain::Solid));
    ns.wt_sup_u_h1_solid =
        std::max(ns.wt_sup_u_h1_solid, h1_norm2(space, traj.w[k], Subdomain::Solid));
  }

  // time derivatives by difference quotients on the step grid
  for (std::size_t k = 1; k < n; ++k) {
    const double dt = traj.times[k] - traj.times[k - 1];
    const Vec ut = scaled_difference(traj.w[k], traj.w[k - 1], 1.0 / dt);
    const double h1 = h1_norm2(space, ut);
    ns.xt_ut_l2t_h1 += dt * h1;
    ns.wt_sup_ut_h1_solid =
        std::max(ns.wt_sup_ut_h1_solid, h1_norm2(space, ut, Subdomain::Solid));
  }
  for (std::size_t k = 1; k + 1 < n; ++k) {
    const double dt = traj.times[k] - traj.times[k - 1];
    Vec utt(traj.w[k].size());
    for (std::size_t i = 0; i < utt.size(); ++i)
      utt[i] = (traj.w[k + 1][i] - 2.0 * traj.w[k][i] + traj.w[k - 1][i]) / (dt * dt);
    const double l2 = l2_norm2(space, utt);
    ns.xt_utt_l2t_l2 += dt * l2;
    ns.wt_sup_utt_l2 = std::max(ns.wt_sup_utt_l2, l2);
  }
  return ns;
}

double data_norm_n_squared(const DataSpec& spec, const VelocitySpace& space,
                           double T, std::size_t time_samples) {
  const Mesh& mesh = space.mesh();
  const std::size_t nq = space.quad_per_element();

  // H1-type quadrature of an analytic polynomial field over a subdomain
  auto poly_h1 = [&](const PolyField2& p, std::optional<Subdomain> sub) {
    double acc = 0.0;
    for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
      if (sub && mesh.tags[e] != *sub) continue;
      for (std::size_t q = 0; q < nq; ++q) {
        const ElementQuadData& d = space.quad(e, q);
        const Vec3 v = p.eval(d.x);
        const Mat g = p.grad(d.x);
        double val = dot(v, v, 2);
        for (int i = 0; i < 2; ++i)
          for (int j = 0; j < 2; ++j) val += g(i, j) * g(i, j);
        acc += d.w * val;
      }
    }
    return acc;
  };

  double sum = 0.0;
  sum += poly_h1(spec.u0, Subdomain::Fluid);  // surrogate for the H5 fluid norm
  sum += poly_h1(spec.u0, Subdomain::Solid);  // surrogate for the H2 solid norm

  const double space_h1 = poly_h1(spec.f.space, std::nullopt);
  const double pv0 = profile_value(spec.f.profile, 0.0);
  sum += pv0 * pv0 * space_h1;  // ||f(0)||^2 surrogate

  // separable time profiles: ||f||^2_{L2(0,T;X)} = ||space||^2_X int profile^2
  auto time_integral = [&](const std::function<double(double)>& g) {
    double acc = 0.0;
    const std::size_t m = time_samples;
    for (std::size_t k = 0; k < m; ++k) {
      const double t0 = T * k / m;
      const double t1 = T * (k + 1) / m;
      acc += 0.5 * (t1 - t0) * (g(t0) * g(t0) + g(t1) * g(t1));
    }
    return acc;
  };
  sum += space_h1 * time_integral([&](double t) { return profile_value(spec.f.profile, t); });
  sum += space_h1 *
         time_integral([&](double t) { return profile_derivative(spec.f.profile, t); });
  sum += space_h1 * time_integral(
                        [&](double t) { return profile_second_derivative(spec.f.profile, t); });

  const double base = 1.0 + sum;
  return base * base * base * base;
}

}  // namespace lagfsi
