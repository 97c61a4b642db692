#include "lagfsi/oracles.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace lagfsi {

namespace {

/// Sparse polynomial in the barycentric coordinates (lam0, lam1, lam2).
struct TriPoly {
  struct Term {
    int e[3] = {0, 0, 0};
    double c = 0.0;
  };
  std::vector<Term> terms;

  void add(int e0, int e1, int e2, double c) {
    if (c == 0.0) return;
    for (Term& t : terms)
      if (t.e[0] == e0 && t.e[1] == e1 && t.e[2] == e2) {
        t.c += c;
        return;
      }
    terms.push_back({{e0, e1, e2}, c});
  }
};

TriPoly multiply(const TriPoly& a, const TriPoly& b) {
  TriPoly out;
  for (const auto& ta : a.terms)
    for (const auto& tb : b.terms)
      out.add(ta.e[0] + tb.e[0], ta.e[1] + tb.e[1], ta.e[2] + tb.e[2], ta.c * tb.c);
  return out;
}

double integrate(const TriPoly& p, double area) {
  double s = 0.0;
  for (const auto& t : p.terms)
    s += t.c * barycentric_integral(t.e[0], t.e[1], t.e[2], area);
  return s;
}

/// P2 shape functions, node order {v0, v1, v2, m01, m12, m20}.
std::array<TriPoly, 6> p2_bary_shapes() {
  std::array<TriPoly, 6> phi;
  for (int v = 0; v < 3; ++v) {  // lam_v (2 lam_v - 1)
    int e[3] = {0, 0, 0};
    e[v] = 2;
    phi[v].add(e[0], e[1], e[2], 2.0);
    e[v] = 1;
    phi[v].add(e[0], e[1], e[2], -1.0);
  }
  const int mids[3][2] = {{0, 1}, {1, 2}, {2, 0}};
  for (int m = 0; m < 3; ++m) {  // 4 lam_i lam_j
    int e[3] = {0, 0, 0};
    e[mids[m][0]] = 1;
    e[mids[m][1]] = 1;
    phi[3 + m].add(e[0], e[1], e[2], 4.0);
  }
  return phi;
}

struct TriangleGeometry {
  double area = 0.0;
  Vec3 grad_lambda[3];  // constant barycentric gradients
};

TriangleGeometry triangle_geometry(const Vec3& p0, const Vec3& p1, const Vec3& p2) {
  TriangleGeometry g;
  const double twice = (p1[0] - p0[0]) * (p2[1] - p0[1]) -
                       (p2[0] - p0[0]) * (p1[1] - p0[1]);
  g.area = 0.5 * std::abs(twice);
  if (g.area < 1e-14)
    throw std::runtime_error("symbolic element oracle: degenerate triangle");
  const Vec3* p[3] = {&p0, &p1, &p2};
  for (int i = 0; i < 3; ++i) {
    // grad lam_i is perpendicular to the opposite edge, scaled by 1/(2A)
    const Vec3& a = *p[(i + 1) % 3];
    const Vec3& b = *p[(i + 2) % 3];
    g.grad_lambda[i][0] = (a[1] - b[1]) / twice;
    g.grad_lambda[i][1] = (b[0] - a[0]) / twice;
  }
  return g;
}

/// d phi_n / d x_d as a barycentric polynomial (chain rule through lam_i).
TriPoly shape_partial(const std::array<TriPoly, 6>& phi, const TriangleGeometry& g,
                      int n, int d) {
  TriPoly out;
  for (const auto& t : phi[n].terms)
    for (int i = 0; i < 3; ++i) {
      if (t.e[i] == 0) continue;
      int e[3] = {t.e[0], t.e[1], t.e[2]};
      e[i] -= 1;
      out.add(e[0], e[1], e[2], t.c * t.e[i] * g.grad_lambda[i][d]);
    }
  return out;
}

}  // namespace

double barycentric_integral(int a, int b, int c, double area) {
  // int lam0^a lam1^b lam2^c dx = 2A a! b! c! / (a + b + c + 2)!
  double value = 2.0 * area;
  // a! b! c! / (a+b+c+2)! evaluated as a product of small ratios
  int denom = a + b + c + 2;
  auto fold = [&](int k) {
    for (int i = 1; i <= k; ++i) value *= static_cast<double>(i);
  };
  fold(a);
  fold(b);
  fold(c);
  for (int i = 2; i <= denom; ++i) value /= static_cast<double>(i);
  return value;
}

DenseMatrix symbolic_element_oracle(ElementForm form, const Vec3& p0, const Vec3& p1,
                                    const Vec3& p2, const MaterialParams& params,
                                    double eps) {
  const TriangleGeometry g = triangle_geometry(p0, p1, p2);
  const std::array<TriPoly, 6> phi = p2_bary_shapes();

  // precompute all integrated products once
  double mass[6][6];
  double stiff[6][6][2][2];  // int d_i phi_a d_j phi_b
  TriPoly dphi[6][2];
  for (int n = 0; n < 6; ++n)
    for (int d = 0; d < 2; ++d) dphi[n][d] = shape_partial(phi, g, n, d);
  for (int a = 0; a < 6; ++a)
    for (int b = 0; b < 6; ++b) {
      mass[a][b] = integrate(multiply(phi[a], phi[b]), g.area);
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
          stiff[a][b][i][j] = integrate(multiply(dphi[a][i], dphi[b][j]), g.area);
    }

  DenseMatrix out(12, 12);
  for (int a = 0; a < 6; ++a)
    for (int c = 0; c < 2; ++c)
      for (int b = 0; b < 6; ++b)
        for (int c2 = 0; c2 < 2; ++c2) {
          const double grad_dot = stiff[a][b][0][0] + stiff[a][b][1][1];
          double v = 0.0;
          switch (form) {
            case ElementForm::MassP2:
              v = (c == c2) ? mass[a][b] : 0.0;
              break;
            case ElementForm::ViscousIdentity:
              v = (c == c2) ? params.nu * grad_dot : 0.0;
              break;
            case ElementForm::Elastic:
              v = params.lambda * stiff[a][b][c][c2] +
                  params.mu * stiff[a][b][c2][c];
              if (c == c2) v += params.mu * grad_dot;
              break;
            case ElementForm::PenaltyIdentity:
              if (eps <= 0.0)
                throw std::runtime_error("symbolic element oracle: eps must be > 0");
              v = stiff[a][b][c][c2] / eps;
              break;
          }
          out(a * 2 + c, b * 2 + c2) = v;
        }
  return out;
}

DenseMatrix p1_mass_oracle(const Vec3& p0, const Vec3& p1, const Vec3& p2) {
  const TriangleGeometry g = triangle_geometry(p0, p1, p2);
  DenseMatrix out(3, 3);
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) out(a, b) = (g.area / 12.0) * (a == b ? 2.0 : 1.0);
  return out;
}

Vec dense_oracle_solve(const CsrMatrix& A, const Vec& b) {
  if (A.size() > 5000)
    throw std::runtime_error("dense oracle solve: system too large (> 5000)");
  if (b.size() != A.size())
    throw std::runtime_error("dense oracle solve: size mismatch");
  const CholeskyFactor chol(A.to_dense());
  return chol.solve(b);
}

EigenmodeOracle eigenmode_oracle(const CsrMatrix& K, const CsrMatrix& M, double tol,
                                 std::size_t max_iter) {
  if (K.size() != M.size() || K.size() == 0)
    throw std::runtime_error("eigenmode oracle: size mismatch");
  if (K.size() > 5000)
    throw std::runtime_error("eigenmode oracle: system too large (> 5000)");
  const CholeskyFactor chol(K.to_dense());

  const std::size_t n = K.size();
  Vec x(n);
  for (std::size_t i = 0; i < n; ++i)  // deterministic, mode-rich start
    x[i] = 1.0 + 0.5 * std::sin(static_cast<double>(i + 1));

  EigenmodeOracle result;
  double lambda = 0.0;
  for (std::size_t it = 0; it < max_iter; ++it) {
    Vec y = chol.solve(M.multiply(x));
    const double ymy = dot(y, M.multiply(y));
    if (ymy <= 0.0) throw std::runtime_error("eigenmode oracle: M not positive");
    const double scale = 1.0 / std::sqrt(ymy);
    for (double& v : y) v *= scale;
    const double next = dot(y, K.multiply(y)) / dot(y, M.multiply(y));
    x = std::move(y);
    result.iterations = it + 1;
    if (it > 0 && std::abs(next - lambda) <= tol * std::abs(next)) {
      lambda = next;
      break;
    }
    lambda = next;
  }
  result.lambda_min = lambda;
  result.period = 2.0 * std::acos(-1.0) / std::sqrt(lambda);
  result.mode = std::move(x);
  return result;
}

}  // namespace lagfsi
