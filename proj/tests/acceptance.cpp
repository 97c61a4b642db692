// Acceptance gate: twelve numbered criteria, one PASS/FAIL line each, with
// pinned tolerances. The process exits nonzero if any criterion fails, so
// ctest treats the gate as a single test with a full per-criterion log.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "lagfsi/diagnostics.hpp"
#include "lagfsi/fixed_point.hpp"
#include "lagfsi/flow_map.hpp"
#include "lagfsi/initial_data.hpp"
#include "lagfsi/oracles.hpp"
#include "lagfsi/pipeline.hpp"
#include "lagfsi/stepper.hpp"

namespace {

using namespace lagfsi;

int g_failures = 0;

void report(int number, const std::string& name, bool pass, const std::string& detail) {
  if (!pass) ++g_failures;
  std::printf("criterion %02d %-24s %s  (%s)\n", number, name.c_str(),
              pass ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

Mesh concentric_mesh(double h) {
  GeometryConfig geom;
  geom.container_radius = 1.0;
  geom.h = h;
  geom.solids.push_back({0.0, 0.0, 0.5});
  return build_reference_config(geom);
}

struct Setup {
  Mesh mesh;
  VelocitySpace space;
  FluidScalarSpace scalar;
  DataSpec spec;
  InitialData data;
  MaterialParams params;

  Setup(double h, const std::string& initial, const std::string& forcing)
      : mesh(concentric_mesh(h)), space(mesh), scalar(mesh) {
    spec.u0 = initial_catalog(initial);
    spec.f = forcing_catalog(forcing);
    data = build_initial_data(spec, space, scalar, params);
  }
};

// ---------------------------------------------------------------- criterion 1

void criterion_coefficient_algebra() {
  const double tol = 1e-12;
  double worst = 0.0;

  Mat F(2);
  F(0, 0) = 1.2; F(0, 1) = -0.3; F(1, 0) = 0.45; F(1, 1) = 0.9;
  const CoefficientSample s = coefficient_matrix(F);

  // a F = I and F a = I
  const Mat left = s.a.matmul(F), right = F.matmul(s.a);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      const double id = (i == j) ? 1.0 : 0.0;
      worst = std::max(worst, std::abs(left(i, j) - id));
      worst = std::max(worst, std::abs(right(i, j) - id));
      // a = Cof^T / det
      worst = std::max(worst, std::abs(s.cof(j, i) / s.det - s.a(i, j)));
    }

  // t = 0 identities: a_t(0) = -grad u0, a_tt(0) = 2 (grad u0)^2 - grad w1
  Mat I2(2);
  I2(0, 0) = I2(1, 1) = 1.0;
  Mat G(2), H(2);
  G(0, 0) = 0.7; G(0, 1) = 0.2; G(1, 0) = -0.5; G(1, 1) = 0.1;
  H(0, 0) = -0.4; H(0, 1) = 0.9; H(1, 0) = 0.3; H(1, 1) = -0.2;
  const Mat at0 = coefficient_first_derivative(I2, G);
  const Mat att0 = coefficient_second_derivative(I2, at0, G, H);
  const Mat att_ref = G.matmul(G) * 2.0 - H;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      worst = std::max(worst, std::abs(at0(i, j) + G(i, j)));
      worst = std::max(worst, std::abs(att0(i, j) - att_ref(i, j)));
    }

  report(1, "coefficient-algebra", worst <= tol, "max residual " + fmt(worst));
}

// ---------------------------------------------------------------- criterion 2

/// Weak Piola residual: max over interior scalar nodes of
/// int Cof(grad eta_h) grad phi dx, which vanishes for continuous eta_h.
double weak_piola_residual(const VelocitySpace& space, const FlowMapState& state) {
  const std::size_t nn = space.num_scalar_nodes();
  std::vector<double> r(nn * 2, 0.0);
  for (std::size_t e = 0; e < space.mesh().num_elements(); ++e) {
    const auto& nodes = space.element_nodes(e);
    for (std::size_t q = 0; q < space.quad_per_element(); ++q) {
      const ElementQuadData& qd = space.quad(e, q);
      const Mat& cof = state.coeff(e, q).cof;
      for (int a = 0; a < 6; ++a)
        for (int i = 0; i < 2; ++i)
          r[nodes[a] * 2 + i] +=
              qd.w * (cof(i, 0) * qd.dshape[a][0] + cof(i, 1) * qd.dshape[a][1]);
    }
  }
  double worst = 0.0;
  for (std::size_t n = 0; n < nn; ++n)
    if (!space.is_boundary_node(n))
      for (int i = 0; i < 2; ++i) worst = std::max(worst, std::abs(r[n * 2 + i]));
  return worst;
}

void criterion_piola() {
  // affine flow map: exact to roundoff
  const Mesh mesh = concentric_mesh(0.3);
  const VelocitySpace space(mesh);
  FlowMapState state(space);
  const Vec affine = space.interpolate([](const Vec3& x) {
    return Vec3{{0.1 * x[0] - 0.05 * x[1] + 0.02, 0.07 * x[0] + 0.12 * x[1] - 0.01, 0.0}};
  });
  state.set_displacement(affine, 0.0);
  const double affine_res = weak_piola_residual(space, state);

  // interpolated smooth map: cofactor converges with order >= 1
  auto smooth = [](const Vec3& x) {
    return Vec3{{0.08 * std::sin(x[0] + 0.5 * x[1]), 0.06 * std::cos(x[0] - x[1]), 0.0}};
  };
  auto cof_error = [&](double h) {
    const Mesh m = concentric_mesh(h);
    const VelocitySpace sp(m);
    FlowMapState st(sp);
    st.set_displacement(sp.interpolate(smooth), 0.0);
    double worst = 0.0;
    for (std::size_t e = 0; e < m.num_elements(); ++e)
      for (std::size_t q = 0; q < sp.quad_per_element(); ++q) {
        const Vec3& x = sp.quad(e, q).x;
        Mat F(2);
        F(0, 0) = 1.0 + 0.08 * std::cos(x[0] + 0.5 * x[1]);
        F(0, 1) = 0.04 * std::cos(x[0] + 0.5 * x[1]);
        F(1, 0) = -0.06 * std::sin(x[0] - x[1]);
        F(1, 1) = 1.0 + 0.06 * std::sin(x[0] - x[1]);
        const Mat cref = cofactor(F);
        const Mat& c = st.coeff(e, q).cof;
        for (int i = 0; i < 2; ++i)
          for (int j = 0; j < 2; ++j)
            worst = std::max(worst, std::abs(c(i, j) - cref(i, j)));
      }
    return worst;
  };
  const double e1 = cof_error(0.3), e2 = cof_error(0.15);
  const double order = std::log2(e1 / e2);

  const bool pass = affine_res <= 1e-12 && order >= 1.0;
  report(2, "piola-identity", pass,
         "affine residual " + fmt(affine_res) + ", refinement order " + fmt(order));
}

// ---------------------------------------------------------------- criterion 3

void criterion_eps_slope() {
  Setup su(0.35, "zero", "ramp-radial");
  StepperConfig sc;
  sc.dt = 0.0125;
  sc.T = 0.05;

  std::vector<double> eps = {1e-2, 1e-3, 1e-4, 1e-5};
  std::vector<double> divres;
  for (double e : eps) {
    sc.penalty.epsilon = e;
    const IterateSeries seed = seed_iterate(su.space, su.data, sc);
    const Trajectory traj =
        theta_map(su.space, su.scalar, su.data, su.spec.f, su.params, sc, seed);
    divres.push_back(traj.ledger.back().div_residual);
  }

  // least-squares slope of log(div residual) against log(eps)
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  const double n = static_cast<double>(eps.size());
  for (std::size_t i = 0; i < eps.size(); ++i) {
    const double x = std::log(eps[i]), y = std::log(divres[i]);
    sx += x; sy += y; sxx += x * x; sxy += x * y;
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  const bool pass = std::abs(slope - 1.0) <= 0.15;
  report(3, "penalty-eps-slope", pass, "slope " + fmt(slope) + " vs 1.0 +- 0.15");
}

// ---------------------------------------------------------------- criterion 4

double total_defect(const Setup& su, const StepperConfig& sc, double& min_defect) {
  const IterateSeries seed = seed_iterate(su.space, su.data, sc);
  const Trajectory traj =
      theta_map(su.space, su.scalar, su.data, su.spec.f, su.params, sc, seed);
  double total = 0.0;
  for (std::size_t k = 1; k < traj.ledger.size(); ++k) {
    total += traj.ledger[k].defect;
    min_defect = std::min(min_defect, traj.ledger[k].defect);
  }
  return total;
}

void criterion_energy_defect() {
  Setup su(0.35, "zero", "ramp-radial");
  StepperConfig sc;
  sc.T = 0.05;
  sc.penalty.epsilon = 1e-3;
  sc.integrator = Integrator::BackwardEuler;

  double min_defect = 0.0;
  sc.dt = 0.0125;
  const double d1 = total_defect(su, sc, min_defect);
  sc.dt = 0.00625;
  const double d2 = total_defect(su, sc, min_defect);
  const double ratio = d1 / d2;

  const bool pass = min_defect >= -1e-12 && ratio >= 1.6 && ratio <= 2.4;
  report(4, "energy-defect", pass,
         "min defect " + fmt(min_defect) + ", halving ratio " + fmt(ratio));
}

// ---------------------------------------------------------------- criterion 5

void criterion_zero_data() {
  Setup su(0.35, "zero", "zero");
  StepperConfig sc;
  sc.dt = 0.0125;
  sc.T = 0.05;
  sc.penalty.epsilon = 1e-3;
  const IterateSeries seed = seed_iterate(su.space, su.data, sc);
  const Trajectory traj =
      theta_map(su.space, su.scalar, su.data, su.spec.f, su.params, sc, seed);

  double worst = 0.0;
  for (const Vec& w : traj.w)
    for (double v : w) worst = std::max(worst, std::abs(v));
  for (const StepRecord& r : traj.ledger) {
    worst = std::max(worst, std::abs(r.kinetic));
    worst = std::max(worst, std::abs(r.external_work_cum));
  }
  for (const auto& [name, value] : su.data.compat_residuals)
    worst = std::max(worst, value);
  report(5, "zero-data-sanity", worst <= 1e-12, "max magnitude " + fmt(worst));
}

// ---------------------------------------------------------------- criterion 6

CsrMatrix reduce_to_free(const CsrMatrix& full, const VelocitySpace& space) {
  TripletList trip(space.num_free_dofs());
  const auto& rp = full.row_ptr();
  const auto& ci = full.col_idx();
  const auto& vals = full.values();
  for (std::size_t i = 0; i < full.size(); ++i) {
    const int fi = space.free_index(i);
    if (fi < 0) continue;
    for (std::size_t k = rp[i]; k < rp[i + 1]; ++k) {
      const int fj = space.free_index(ci[k]);
      if (fj >= 0) trip.add(fi, fj, vals[k]);
    }
  }
  return trip.to_csr();
}

void criterion_eigenmode_period() {
  const Mesh mesh = build_solid_disk_mesh(0.5, 0.12);
  const VelocitySpace space(mesh);
  const FluidScalarSpace scalar(mesh);
  MaterialParams params;

  const CsrMatrix K = reduce_to_free(assemble_elastic(space, params), space);
  const CsrMatrix M = reduce_to_free(assemble_mass(space), space);
  const EigenmodeOracle eig = eigenmode_oracle(K, M);

  // integrate the pure elastic oscillation started in the lowest mode with
  // the conservative midpoint rule; measure the period via zero crossings
  // of the modal coordinate c(t) = mode^T M w(t)
  InitialData data;
  data.u0 = space.prolong_free(eig.mode);
  data.w1.assign(space.num_dofs(), 0.0);
  data.w2.assign(space.num_dofs(), 0.0);
  data.q0.assign(scalar.num_nodes(), 0.0);
  data.q1.assign(scalar.num_nodes(), 0.0);

  StepperConfig sc;
  sc.integrator = Integrator::Midpoint;
  sc.dt = eig.period / 256.0;
  sc.T = 1.15 * eig.period;
  const Trajectory traj =
      run_linear_solve(space, scalar, data, forcing_catalog("zero"), params, sc,
                       identity_coefficients(space));

  // successive zero crossings (either direction) are half a period apart
  std::vector<double> crossings;
  double prev = dot(eig.mode, M.multiply(space.restrict_free(traj.w[0])));
  for (std::size_t k = 1; k < traj.w.size(); ++k) {
    const double cur = dot(eig.mode, M.multiply(space.restrict_free(traj.w[k])));
    if ((prev > 0.0) != (cur > 0.0)) {
      const double frac = prev / (prev - cur);
      crossings.push_back(traj.times[k - 1] + frac * (traj.times[k] - traj.times[k - 1]));
    }
    prev = cur;
  }

  bool pass = false;
  double measured = 0.0;
  if (crossings.size() >= 2) {
    measured = 2.0 * (crossings[1] - crossings[0]);
    pass = std::abs(measured - eig.period) <= 0.01 * eig.period;
  }
  report(6, "eigenmode-period", pass,
         "measured " + fmt(measured) + " vs oracle " + fmt(eig.period));
}

// ---------------------------------------------------------------- criterion 7

/// Radial two-point solve of (r q')' = r S(r) on [r0, 1] with q(r0) = 0 and
/// q'(1) = 0, by composite-trapezoid integration on a fine grid.
std::function<double(double)> radial_q0_oracle(const DataSpec& spec, double r0) {
  const int n = 4000;
  std::vector<double> r(n + 1), integrand(n + 1);
  for (int i = 0; i <= n; ++i) {
    r[i] = r0 + (1.0 - r0) * i / n;
    const Vec3 x{{r[i], 0.0, 0.0}};
    const Mat g = spec.u0.grad(x);
    double trg2 = 0.0;
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) trg2 += g(a, b) * g(b, a);
    integrand[i] = -r[i] * trg2;  // r * S(r), S = -tr((grad u0)^2)
  }
  std::vector<double> cum(n + 1, 0.0);
  for (int i = 1; i <= n; ++i)
    cum[i] = cum[i - 1] + 0.5 * (r[i] - r[i - 1]) * (integrand[i] + integrand[i - 1]);
  const double C = -cum[n];  // enforce q'(1) = 0
  std::vector<double> q(n + 1, 0.0);
  for (int i = 1; i <= n; ++i) {
    const double qp_a = (cum[i - 1] + C) / r[i - 1];
    const double qp_b = (cum[i] + C) / r[i];
    q[i] = q[i - 1] + 0.5 * (r[i] - r[i - 1]) * (qp_a + qp_b);
  }
  return [r0, n, q](double rr) {
    const double s = (rr - r0) / (1.0 - r0) * n;
    const int i = std::max(0, std::min(n - 1, static_cast<int>(s)));
    const double frac = s - i;
    return q[i] * (1.0 - frac) + q[i + 1] * frac;
  };
}

double q0_l2_error(double h) {
  Setup su(h, "swirl", "zero");
  const auto oracle = radial_q0_oracle(su.spec, 0.5);
  double err2 = 0.0;
  for (std::size_t e : su.scalar.fluid_elements())
    for (std::size_t q = 0; q < su.space.quad_per_element(); ++q) {
      const ElementQuadData& qd = su.space.quad(e, q);
      const double rr = std::sqrt(qd.x[0] * qd.x[0] + qd.x[1] * qd.x[1]);
      const double diff = su.scalar.value_at(su.data.q0, e, qd.x) - oracle(rr);
      err2 += qd.w * diff * diff;
    }
  return std::sqrt(err2);
}

double q1_l2_error(double h) {
  // u0 = 0, f = t (x, y): q1 solves laplace q1 = 2, dq1/dN = 1 on the outer
  // boundary, q1 = 0 on Gamma_0, so q1 = (r^2 - 1/4) / 2
  Setup su(h, "zero", "ramp-radial");
  double err2 = 0.0;
  for (std::size_t e : su.scalar.fluid_elements())
    for (std::size_t q = 0; q < su.space.quad_per_element(); ++q) {
      const ElementQuadData& qd = su.space.quad(e, q);
      const double r2 = qd.x[0] * qd.x[0] + qd.x[1] * qd.x[1];
      const double diff = su.scalar.value_at(su.data.q1, e, qd.x) - 0.5 * (r2 - 0.25);
      err2 += qd.w * diff * diff;
    }
  return std::sqrt(err2);
}

void criterion_pressure_data_order() {
  const double oq0 = std::log2(q0_l2_error(0.3) / q0_l2_error(0.15));
  const double oq1 = std::log2(q1_l2_error(0.3) / q1_l2_error(0.15));
  const bool pass = oq0 >= 1.9 && oq1 >= 1.9;
  report(7, "pressure-data-order", pass,
         "q0 order " + fmt(oq0) + ", q1 order " + fmt(oq1));
}

// ---------------------------------------------------------------- criterion 8

void criterion_compatibility() {
  Setup zero(0.3, "zero", "zero");
  double worst_zero = 0.0;
  for (const auto& [name, value] : zero.data.compat_residuals)
    worst_zero = std::max(worst_zero, value);

  // the swirl field shears the interface: its tangential stress must trip
  Setup bad(0.3, "swirl", "zero");
  double violation = 0.0;
  for (const auto& [name, value] : bad.data.compat_residuals)
    if (name == "tangential_stress_u0") violation = value;

  const bool pass = worst_zero <= 1e-10 && violation > 1e-3;
  report(8, "compatibility-check", pass,
         "zero-data max " + fmt(worst_zero) + ", synthetic violation " + fmt(violation));
}

// ---------------------------------------------------------------- criterion 9

double mean_ratio_at(Setup& su, double T, std::vector<double>* ratios_out) {
  FixedPointConfig fp;
  fp.stepper.dt = 0.0125;
  fp.stepper.T = T;
  fp.stepper.penalty.epsilon = 1e-3;
  fp.tol = 1e-13;       // unreachable: always run the full iteration budget
  fp.max_iterations = 3;  // stay above the roundoff floor of the distances
  const FixedPointResult r =
      iterate_to_fixed_point(su.space, su.scalar, su.data, su.spec.f, su.params, fp);
  if (ratios_out) *ratios_out = r.report.contraction_ratios;
  double mean = 0.0;
  for (double c : r.report.contraction_ratios) mean += c;
  return r.report.contraction_ratios.empty()
             ? 0.0
             : mean / static_cast<double>(r.report.contraction_ratios.size());
}

void criterion_picard_contraction() {
  Setup su(0.3, "swirl", "zero");
  std::vector<double> ratios;
  const double m_mid = mean_ratio_at(su, 0.05, &ratios);
  bool contracting = !ratios.empty();
  for (double c : ratios) contracting = contracting && c < 1.0;

  const double m_big = mean_ratio_at(su, 0.1, nullptr);
  const double m_small = mean_ratio_at(su, 0.025, nullptr);
  const bool monotone = m_mid <= m_big * 1.05 + 1e-12 && m_small <= m_mid * 1.05 + 1e-12;

  report(9, "picard-contraction", contracting && monotone,
         "ratios(T=0.1,0.05,0.025) = " + fmt(m_big) + ", " + fmt(m_mid) + ", " +
             fmt(m_small));
}

// --------------------------------------------------------------- criterion 10

void criterion_uniqueness() {
  Setup su(0.3, "swirl", "zero");
  FixedPointConfig fp;
  fp.stepper.dt = 0.0125;
  fp.stepper.T = 0.05;
  fp.stepper.penalty.epsilon = 1e-3;
  fp.tol = 1e-9;
  fp.max_iterations = 30;

  const FixedPointResult a =
      iterate_to_fixed_point(su.space, su.scalar, su.data, su.spec.f, su.params, fp);

  // second start: the seed plus an O(t^2) admissible perturbation
  IterateSeries start = seed_iterate(su.space, su.data, fp.stepper);
  Vec psi = su.space.interpolate([](const Vec3& x) {
    const double bump = 1.0 - x[0] * x[0] - x[1] * x[1];
    return Vec3{{0.4 * bump * x[0], -0.4 * bump * x[1], 0.0}};
  });
  su.space.zero_boundary(psi);
  for (std::size_t k = 0; k < start.w.size(); ++k) {
    const double t = start.times[k];
    axpy(0.5 * t * t, psi, start.w[k]);
  }
  const FixedPointResult b = iterate_to_fixed_point(su.space, su.scalar, su.data,
                                                    su.spec.f, su.params, fp, &start);

  const double dist =
      trajectory_distance(su.space, a.solution.times, a.solution.w, b.solution.w);
  const bool pass = a.report.converged && b.report.converged && dist <= 10.0 * fp.tol;
  report(10, "fixed-point-uniqueness", pass,
         "distance " + fmt(dist) + " vs 10*tol " + fmt(10.0 * fp.tol));
}

// --------------------------------------------------------------- criterion 11

void criterion_collision_margin() {
  // constant unit speed against separation 0.1: the margin reaches zero at
  // t = 0.05 exactly; the trip must land within one step of it
  const double dt = 0.005, d = 0.1;
  std::vector<double> times, speeds;
  for (int k = 0; k <= 20; ++k) {
    times.push_back(k * dt);
    speeds.push_back(1.0);
  }
  const CollisionReport rep = collision_margin(times, speeds, d);
  const bool trip_ok = rep.tripped && std::abs(rep.trip_time - 0.05) <= dt + 1e-12;

  // and a quiescent run must never trip
  std::vector<double> slow(speeds.size(), 1e-3);
  const CollisionReport calm = collision_margin(times, slow, d);

  report(11, "collision-margin", trip_ok && !calm.tripped,
         "trip at " + fmt(rep.trip_time) + " vs 0.05 +- " + fmt(dt));
}

// --------------------------------------------------------------- criterion 12

std::string slurp(const std::filesystem::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

void criterion_determinism() {
  SimulationConfig cfg = parse_config_text(R"(
geometry.container_radius = 1
geometry.h = 0.35
geometry.solid = 0 0 0.5
numerics.dt = 0.0125
numerics.T = 0.025
numerics.eps = 0.001
numerics.tol = 1e-7
forcing.name = ramp-radial
)");
  const std::filesystem::path base = std::filesystem::temp_directory_path() / "lagfsi-acc";
  cfg.output_dir = (base / "a").string();
  run_pipeline(cfg);
  const std::string ledger_a = slurp(base / "a" / "ledger.csv");
  const std::string snap_a = slurp(base / "a" / "final.snap");
  cfg.output_dir = (base / "b").string();
  run_pipeline(cfg);
  const std::string ledger_b = slurp(base / "b" / "ledger.csv");
  const std::string snap_b = slurp(base / "b" / "final.snap");

  const bool pass = !ledger_a.empty() && ledger_a == ledger_b && !snap_a.empty() &&
                    snap_a == snap_b;
  report(12, "determinism", pass,
         pass ? "ledger and snapshot byte-identical" : "artifact mismatch");
}

}  // namespace

int main() {
  try {
    criterion_coefficient_algebra();
    criterion_piola();
    criterion_eps_slope();
    criterion_energy_defect();
    criterion_zero_data();
    criterion_eigenmode_period();
    criterion_pressure_data_order();
    criterion_compatibility();
    criterion_picard_contraction();
    criterion_uniqueness();
    criterion_collision_margin();
    criterion_determinism();
  } catch (const std::exception& e) {
    std::cerr << "acceptance: unexpected exception: " << e.what() << "\n";
    return 2;
  }
  std::printf("acceptance: %s (%d of 12 failing)\n",
              g_failures == 0 ? "ALL PASS" : "FAILURES PRESENT", g_failures);
  return g_failures == 0 ? 0 : 1;
}
