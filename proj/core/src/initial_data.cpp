#include "lagfsi/initial_data.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace lagfsi {

namespace {

// Analytic tensors derived from (u0, f). Index convention: the coefficient
// a_i^j is entry (row j, column i), so a_i^j w^i,_j = tr(a grad w) and
// a_t(0) = -grad u0 gives (a_i^j)_t(0) = -u0^j,_i.
struct Derived {
  std::array<std::array<Poly2, 2>, 2> G;  // G[i][j] = d u0^i / d x_j
  std::array<std::array<Poly2, 2>, 2> b;  // b[j][k] = (a_l^j a_l^k)_t(0)
  Poly2 div_u0;
  PolyField2 lap_u0;
  Poly2 q0_source;  // div f(0) + (a_i^j)_t(0) u0^i,_j
  std::array<Poly2, 2> aterm;  // nu-free: ((a_l^j a_l^k)_t(0) u0^i,_k),_j
  std::array<Poly2, 2> elast_div;  // [c^{ijkl} u0^k,_l],_j

  explicit Derived(const DataSpec& spec, const MaterialParams& params) {
    G[0][0] = spec.u0.u.dx();
    G[0][1] = spec.u0.u.dy();
    G[1][0] = spec.u0.v.dx();
    G[1][1] = spec.u0.v.dy();
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k) b[j][k] = (G[j][k] + G[k][j]) * -1.0;
    div_u0 = G[0][0] + G[1][1];
    lap_u0 = spec.u0.laplacian();

    const double pv0 = profile_value(spec.f.profile, 0.0);
    Poly2 contraction;  // (a_i^j)_t(0) u0^i,_j = -tr(grad u0 grad u0)
    for (int r = 0; r < 2; ++r)
      for (int s = 0; s < 2; ++s) contraction = contraction - G[r][s] * G[s][r];
    q0_source = spec.f.space.divergence() * pv0 + contraction;

    for (int i = 0; i < 2; ++i) {
      Poly2 sum;
      for (int j = 0; j < 2; ++j) {
        Poly2 inner;
        for (int k = 0; k < 2; ++k) inner = inner + b[j][k] * G[i][k];
        sum = sum + (j == 0 ? inner.dx() : inner.dy());
      }
      aterm[i] = sum;
    }

    const std::array<Poly2, 2> ddiv{div_u0.dx(), div_u0.dy()};
    const std::array<Poly2, 2> lap{spec.u0.u.laplacian(), spec.u0.v.laplacian()};
    for (int i = 0; i < 2; ++i)
      elast_div[i] = ddiv[i] * params.lambda + (lap[i] + ddiv[i]) * params.mu;
  }

  Mat grad_u0_at(const Vec3& x) const {
    Mat g(2);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) g(i, j) = G[i][j].eval(x);
    return g;
  }
};

Vec3 tangential_part(const Vec3& v, const Vec3& n) {
  return v - n * dot(v, n, 2);
}

/// Averaged unit normals (fluid -> solid) at interface vertices.
std::vector<Vec3> interface_vertex_normals(const Mesh& mesh) {
  std::vector<Vec3> normals(mesh.num_nodes());
  for (std::size_t i = 0; i < mesh.interface_facets.size(); ++i) {
    const Vec3 n = mesh.interface_normal(i);
    normals[mesh.interface_facets[i].n0] += n;
    normals[mesh.interface_facets[i].n1] += n;
  }
  for (auto& n : normals) {
    const double len = norm(n, 2);
    if (len > 0.0) n = n * (1.0 / len);
  }
  return normals;
}

/// Lowest-index adjacent fluid element for each interface vertex.
std::vector<int> interface_vertex_fluid_elem(const Mesh& mesh) {
  std::vector<int> elem(mesh.num_nodes(), -1);
  for (const auto& f : mesh.interface_facets)
    for (int v : {f.n0, f.n1})
      if (elem[v] < 0 || f.fluid_elem < elem[v]) elem[v] = f.fluid_elem;
  return elem;
}

Vec cg_solve_or_throw(const CsrMatrix& A, const Vec& b, const char* what,
                      PoissonSolveInfo* info) {
  Vec x(b.size(), 0.0);
  const CgResult r = conjugate_gradient(A, b, x, 1e-13, 40 * b.size() + 200);
  if (info) {
    info->iterations = r.iterations;
    info->relative_residual = r.relative_residual;
  }
  if (!r.converged)
    throw std::runtime_error(std::string(what) + ": solver stalled, relative residual " +
                             std::to_string(r.relative_residual));
  return x;
}

}  // namespace

MixedPoissonSystem assemble_mixed_poisson(const FluidScalarSpace& space,
                                          const MixedPoissonData& data) {
  const Mesh& mesh = space.mesh();
  const std::size_t n = space.num_nodes();
  TripletList trip(n);
  Vec rhs(n, 0.0);
  const TriQuadRule& rule = tri_quadrature();

  for (std::size_t e : space.fluid_elements()) {
    const auto& el = mesh.elements[e];
    const Vec3& p0 = mesh.nodes[el[0]];
    const Vec3& p1 = mesh.nodes[el[1]];
    const Vec3& p2 = mesh.nodes[el[2]];
    const double j00 = p1[0] - p0[0], j01 = p2[0] - p0[0];
    const double j10 = p1[1] - p0[1], j11 = p2[1] - p0[1];
    const double detj = j00 * j11 - j01 * j10;
    const double area = 0.5 * std::abs(detj);
    // constant P1 gradients: grad l0 = -g1 - g2 with g1, g2 from J^{-T}
    const std::array<Vec3, 3> g{
        Vec3{{(-j11 + j10) / detj, (j01 - j00) / detj, 0.0}},
        Vec3{{j11 / detj, -j01 / detj, 0.0}},
        Vec3{{-j10 / detj, j00 / detj, 0.0}}};
    const std::array<int, 3> nd{space.node_of_vertex(el[0]), space.node_of_vertex(el[1]),
                                space.node_of_vertex(el[2])};
    for (int a = 0; a < 3; ++a)
      for (int c = 0; c < 3; ++c)
        trip.add(nd[a], nd[c], area * dot(g[a], g[c], 2));

    if (data.source || data.flux) {
      for (std::size_t q = 0; q < 6; ++q) {
        const double x = rule.points[q][0];
        const double y = rule.points[q][1];
        const double w = rule.weights[q] * std::abs(detj);
        const Vec3 xq{{p0[0] + j00 * x + j01 * y, p0[1] + j10 * x + j11 * y, 0.0}};
        const std::array<double, 3> lam{1.0 - x - y, x, y};
        double s = 0.0;
        Vec3 flux;
        if (data.source) s = data.source(e, xq);
        if (data.flux) flux = data.flux(e, xq);
        for (int a = 0; a < 3; ++a)
          rhs[nd[a]] += w * (dot(flux, g[a], 2) - s * lam[a]);
      }
    }
  }

  if (data.neumann) {
    for (std::size_t fi = 0; fi < mesh.outer_facets.size(); ++fi) {
      const auto& f = mesh.outer_facets[fi];
      if (mesh.tags[f.elem] != Subdomain::Fluid) continue;
      const Vec3& a = mesh.nodes[f.n0];
      const Vec3& b = mesh.nodes[f.n1];
      const SegmentQuad sq = segment_quadrature(a, b);
      const double len = norm(b - a, 2);
      for (int q = 0; q < 2; ++q) {
        const double s = dot(sq.points[q] - a, b - a, 2) / (len * len);
        const double h = data.neumann(fi, sq.points[q]);
        rhs[space.node_of_vertex(f.n0)] += sq.weights[q] * h * (1.0 - s);
        rhs[space.node_of_vertex(f.n1)] += sq.weights[q] * h * s;
      }
    }
  }

  MixedPoissonSystem sys;
  sys.lifted.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    if (space.is_interface_node(i) && data.dirichlet)
      sys.lifted[i] = data.dirichlet(mesh.nodes[space.vertex_of_node(i)]);

  const CsrMatrix full = trip.to_csr();
  const Vec corr = full.multiply(sys.lifted);

  // reduce to free nodes
  TripletList red(space.num_free());
  const auto& rp = full.row_ptr();
  const auto& ci = full.col_idx();
  const auto& vv = full.values();
  sys.b.assign(space.num_free(), 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const int fi = space.free_index(i);
    if (fi < 0) continue;
    sys.b[fi] = rhs[i] - corr[i];
    for (std::size_t k = rp[i]; k < rp[i + 1]; ++k) {
      const int fj = space.free_index(ci[k]);
      if (fj >= 0) red.add(fi, fj, vv[k]);
    }
  }
  sys.A = red.to_csr();
  return sys;
}

Vec solve_mixed_poisson(const FluidScalarSpace& space, const MixedPoissonData& data,
                        PoissonSolveInfo* info) {
  const MixedPoissonSystem sys = assemble_mixed_poisson(space, data);
  if (space.num_free() == 0) return sys.lifted;
  const Vec x = cg_solve_or_throw(sys.A, sys.b, "mixed poisson", info);
  Vec full = sys.lifted;
  for (std::size_t i = 0; i < space.num_nodes(); ++i)
    if (space.free_index(i) >= 0) full[i] = x[space.free_index(i)];
  return full;
}

Vec l2_project(const VelocitySpace& space,
               const std::function<Vec3(std::size_t elem, const Vec3&)>& integrand) {
  const std::size_t dim = space.dim();
  Vec rhs(space.num_dofs(), 0.0);
  for (std::size_t e = 0; e < space.mesh().num_elements(); ++e) {
    const auto& nodes = space.element_nodes(e);
    for (std::size_t q = 0; q < space.quad_per_element(); ++q) {
      const ElementQuadData& d = space.quad(e, q);
      const Vec3 val = integrand(e, d.x);
      for (std::size_t a = 0; a < 6; ++a)
        for (std::size_t c = 0; c < dim; ++c)
          rhs[nodes[a] * dim + c] += d.w * val[c] * d.shape[a];
    }
  }
  const CsrMatrix M = space.mass_matrix();
  Vec x(rhs.size(), 0.0);
  const CgResult r = conjugate_gradient(M, rhs, x, 1e-13, 20 * rhs.size() + 200);
  if (!r.converged) throw std::runtime_error("l2 projection: mass solve stalled");
  return x;
}

Vec solve_q0(const DataSpec& spec, const FluidScalarSpace& scalar,
             const MaterialParams& params, PoissonSolveInfo* info) {
  const Derived der(spec, params);
  const Mesh& mesh = scalar.mesh();
  const std::vector<Vec3> normals = interface_vertex_normals(mesh);
  const double pv0 = profile_value(spec.f.profile, 0.0);

  MixedPoissonData data;
  data.source = [&der](std::size_t, const Vec3& x) { return der.q0_source.eval(x); };
  data.dirichlet = [&](const Vec3& x) {
    // locate the vertex normal by nearest interface vertex position
    // (dirichlet is called exactly at interface vertex positions)
    Mat S = der.grad_u0_at(x);
    if (params.constitutive == FluidConstitutive::Def) S = S + S.transpose();
    // nearest interface vertex
    double best = 1e300;
    Vec3 n;
    for (const auto& f : mesh.interface_facets)
      for (int v : {f.n0, f.n1}) {
        const double d = norm(mesh.nodes[v] - x, 2);
        if (d < best) {
          best = d;
          n = normals[v];
        }
      }
    return params.nu * dot(S.apply(n), n, 2);
  };
  data.neumann = [&](std::size_t fi, const Vec3& x) {
    const Vec3 n = mesh.outer_normal(fi);
    const Vec3 f0 = spec.f.space.eval(x) * pv0;
    const Vec3 lap = der.lap_u0.eval(x);
    return dot(f0, n, 2) + params.nu * dot(lap, n, 2);
  };
  return solve_mixed_poisson(scalar, data, info);
}

Vec compute_w1(const DataSpec& spec, const Vec& q0, const VelocitySpace& space,
               const FluidScalarSpace& scalar, const MaterialParams& params) {
  const Derived der(spec, params);
  const double pv0 = profile_value(spec.f.profile, 0.0);
  const Mesh& mesh = space.mesh();
  return l2_project(space, [&](std::size_t e, const Vec3& x) {
    const Vec3 f0 = spec.f.space.eval(x) * pv0;
    if (mesh.tags[e] != Subdomain::Fluid) return f0;
    const Vec3 lap = der.lap_u0.eval(x);
    const Vec3 gq0 = scalar.gradient_on(q0, e);
    return lap * params.nu - gq0 + f0;
  });
}

namespace {

/// The divergence-form part V of the q1 right-hand side (fluid elements):
/// V^i = nu lap(w1)^i + F_t(0)^i + nu ((a_l^j a_l^k)_t(0) u0^i,_k),_j
///       - ((a_i^j)_t(0) q0),_j .
Vec3 q1_flux(const Derived& der, const DataSpec& spec, const Vec& w1, const Vec& q0,
             const VelocitySpace& space, const FluidScalarSpace& scalar,
             const MaterialParams& params, std::size_t e, const Vec3& x) {
  const double dv0 = profile_derivative(spec.f.profile, 0.0);
  const double pv0 = profile_value(spec.f.profile, 0.0);
  const Vec3 lap_w1 = space.laplacian_on(w1, e);
  // F = f o eta, so F_t(0) = f_t(0) + grad f(0) . u0
  const Vec3 ft0 = spec.f.space.eval(x) * dv0 +
                   (spec.f.space.grad(x) * pv0).apply(spec.u0.eval(x));
  const double q0v = scalar.value_at(q0, e, x);
  const Vec3 gq0 = scalar.gradient_on(q0, e);
  Vec3 V;
  for (int i = 0; i < 2; ++i) {
    double v = params.nu * lap_w1[i] + ft0[i] + params.nu * der.aterm[i].eval(x);
    // -((a_i^j)_t(0) q0),_j = sum_j d_j(G[j][i] q0)
    for (int j = 0; j < 2; ++j) {
      const Poly2 dG = (j == 0) ? der.G[j][i].dx() : der.G[j][i].dy();
      v += dG.eval(x) * q0v + der.G[j][i].eval(x) * gq0[j];
    }
    V[i] = v;
  }
  return V;
}

}  // namespace

Vec solve_q1(const DataSpec& spec, const Vec& w1, const Vec& q0,
             const VelocitySpace& space, const FluidScalarSpace& scalar,
             const MaterialParams& params, PoissonSolveInfo* info) {
  const Derived der(spec, params);
  const Mesh& mesh = scalar.mesh();
  const std::vector<Vec3> normals = interface_vertex_normals(mesh);
  const std::vector<int> adj = interface_vertex_fluid_elem(mesh);
  const ElasticityTensor ct(params, 2);

  MixedPoissonData data;
  data.flux = [&](std::size_t e, const Vec3& x) {
    return q1_flux(der, spec, w1, q0, space, scalar, params, e, x);
  };
  data.source = [&](std::size_t e, const Vec3& x) {
    // 2 (a_i^j)_t(0) w1^i,_j + (a_i^j)_{tt}(0) u0^i,_j
    const Mat gw1 = space.grad_at_point(w1, e, x);
    const Mat gu0 = der.grad_u0_at(x);
    const Mat att = gu0.matmul(gu0) * 2.0 - gw1;  // a_tt(0)
    double s = 0.0;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        s += -2.0 * gu0(j, i) * gw1(i, j) + att(j, i) * gu0(i, j);
    return s;
  };
  data.dirichlet = [&](const Vec3& x) {
    double best = 1e300;
    int vert = -1;
    for (const auto& f : mesh.interface_facets)
      for (int v : {f.n0, f.n1}) {
        const double d = norm(mesh.nodes[v] - x, 2);
        if (d < best) {
          best = d;
          vert = v;
        }
      }
    const Vec3 n = normals[vert];
    const Mat gw1 = space.grad_at_point(w1, adj[vert], x);
    const Mat gu0 = der.grad_u0_at(x);
    double val = params.nu * dot(gw1.apply(n), n, 2);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 2; ++k)
          val += params.nu * der.b[k][j].eval(x) * gu0(i, k) * n[j] * n[i];
    const Mat sig = ct.contract(gu0);
    val -= dot(sig.apply(n), n, 2);
    const double q0v = q0[scalar.node_of_vertex(vert)];
    val += q0v * -dot(gu0.transpose().apply(n), n, 2);  // (a_i^j)_t(0) N_j N_i
    return val;
  };
  // The outer-boundary Neumann row equals V.N, which the integration by
  // parts of the flux term supplies; no extra boundary data needed.
  return solve_mixed_poisson(scalar, data, info);
}

Vec compute_w2(const DataSpec& spec, const Vec& w1, const Vec& q0, const Vec& q1,
               const VelocitySpace& space, const FluidScalarSpace& scalar,
               const MaterialParams& params) {
  const Derived der(spec, params);
  const Mesh& mesh = space.mesh();
  const double dv0 = profile_derivative(spec.f.profile, 0.0);
  return l2_project(space, [&](std::size_t e, const Vec3& x) {
    if (mesh.tags[e] == Subdomain::Solid) {
      const Vec3 ft0 = spec.f.space.eval(x) * dv0;
      return ft0 + Vec3{{der.elast_div[0].eval(x), der.elast_div[1].eval(x), 0.0}};
    }
    const Vec3 V = q1_flux(der, spec, w1, q0, space, scalar, params, e, x);
    return V - scalar.gradient_on(q1, e);
  });
}

std::vector<std::pair<std::string, double>> check_compatibility(
    const DataSpec& spec, const InitialData& data, const VelocitySpace& space,
    const FluidScalarSpace& scalar, const MaterialParams& params) {
  const Derived der(spec, params);
  const Mesh& mesh = space.mesh();
  const ElasticityTensor ct(params, 2);
  double r_tan_u0 = 0.0, r_w1_bdry = 0.0, r_balance = 0.0, r_tan_w1 = 0.0;

  for (std::size_t fi = 0; fi < mesh.interface_facets.size(); ++fi) {
    const auto& f = mesh.interface_facets[fi];
    const Vec3 n = mesh.interface_normal(fi);
    const SegmentQuad sq = segment_quadrature(mesh.nodes[f.n0], mesh.nodes[f.n1]);
    for (int q = 0; q < 2; ++q) {
      const Vec3& x = sq.points[q];
      const double w = sq.weights[q];
      Mat S = der.grad_u0_at(x);
      if (params.constitutive == FluidConstitutive::Def) S = S + S.transpose();
      const Vec3 t1 = tangential_part(S.apply(n), n);
      r_tan_u0 += w * dot(t1, t1, 2);

      const Vec3 lap = der.lap_u0.eval(x);
      const Vec3 bal = lap * params.nu - scalar.gradient_on(data.q0, f.fluid_elem);
      r_balance += w * dot(bal, bal, 2);

      const Mat gw1 = space.grad_at_point(data.w1, f.fluid_elem, x);
      const Mat gu0 = der.grad_u0_at(x);
      Vec3 lhs = gw1.apply(n) * params.nu;
      for (int i = 0; i < 2; ++i)
        for (int k = 0; k < 2; ++k)
          for (int j = 0; j < 2; ++j)
            lhs[i] += params.nu * gu0(i, k) * der.b[k][j].eval(x) * n[j];
      const Vec3 rhs = ct.contract(gu0).apply(n);
      const Vec3 t2 = tangential_part(lhs - rhs, n);
      r_tan_w1 += w * dot(t2, t2, 2);
    }
  }

  for (std::size_t fi = 0; fi < mesh.outer_facets.size(); ++fi) {
    const auto& f = mesh.outer_facets[fi];
    const SegmentQuad sq = segment_quadrature(mesh.nodes[f.n0], mesh.nodes[f.n1]);
    for (int q = 0; q < 2; ++q) {
      const Vec3 v = space.value_at_point(data.w1, f.elem, sq.points[q]);
      r_w1_bdry += sq.weights[q] * dot(v, v, 2);
    }
  }

  return {{"tangential_stress_u0", std::sqrt(r_tan_u0)},
          {"w1_outer_boundary", std::sqrt(r_w1_bdry)},
          {"interface_balance", std::sqrt(r_balance)},
          {"tangential_stress_w1", std::sqrt(r_tan_w1)}};
}

InitialData build_initial_data(const DataSpec& spec, const VelocitySpace& space,
                               const FluidScalarSpace& scalar,
                               const MaterialParams& params) {
  InitialData data;
  data.u0 = space.interpolate([&](const Vec3& x) { return spec.u0.eval(x); });
  data.q0 = solve_q0(spec, scalar, params);
  data.w1 = compute_w1(spec, data.q0, space, scalar, params);
  data.q1 = solve_q1(spec, data.w1, data.q0, space, scalar, params);
  data.w2 = compute_w2(spec, data.w1, data.q0, data.q1, space, scalar, params);
  data.compat_residuals = check_compatibility(spec, data, space, scalar, params);
  return data;
}

}  // namespace lagfsi
