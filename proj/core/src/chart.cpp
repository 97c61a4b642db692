#include "lagfsi/chart.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace lagfsi {

LocalChart::LocalChart(std::function<double(double)> gamma,
                       std::function<double(double)> gamma_prime, double radius)
    : tangent{{1.0, 0.0, 0.0}},
      normal_to_fluid{{0.0, 1.0, 0.0}},
      gamma_(std::move(gamma)),
      gamma_prime_(std::move(gamma_prime)),
      radius_(radius) {}

Vec3 LocalChart::psi(const Vec3& y) const {
  return Vec3{{y[0], y[1] + gamma_(y[0]), 0.0}};
}

Vec3 LocalChart::phi(const Vec3& x) const {
  return Vec3{{x[0], x[1] - gamma_(x[0]), 0.0}};
}

Mat LocalChart::grad_psi(const Vec3& y) const {
  Mat g(2);
  g(0, 0) = 1.0;
  g(0, 1) = 0.0;
  g(1, 0) = gamma_prime_(y[0]);
  g(1, 1) = 1.0;
  return g;
}

Mat LocalChart::metric(const Vec3& y) const {
  Mat g(2);
  g(0, 0) = 1.0;
  g(0, 1) = 0.0;
  g(1, 0) = -gamma_prime_(y[0]);
  g(1, 1) = 1.0;
  return g;
}

double LocalChart::det_grad_psi(const Vec3& y) const { return det(grad_psi(y)); }

Vec3 LocalChart::to_world(const Vec3& local) const {
  return anchor + tangent * local[0] + normal_to_fluid * local[1];
}

Vec3 LocalChart::to_local(const Vec3& world) const {
  const Vec3 r = world - anchor;
  return Vec3{{dot(r, tangent, 2), dot(r, normal_to_fluid, 2), 0.0}};
}

namespace {

double point_segment_distance(const Vec3& p, const Vec3& a, const Vec3& b) {
  const Vec3 ab = b - a;
  const double len2 = dot(ab, ab, 2);
  double t = len2 > 0.0 ? dot(p - a, ab, 2) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  const Vec3 proj = a + ab * t;
  return norm(p - proj, 2);
}

}  // namespace

LocalChart straighten_interface(const Mesh& mesh, const Vec3& anchor, double radius) {
  if (mesh.interface_facets.empty())
    throw std::runtime_error("straighten_interface: mesh has no interface");

  // locate the facet the anchor sits on
  std::size_t host = 0;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < mesh.interface_facets.size(); ++i) {
    const auto& f = mesh.interface_facets[i];
    const double d = point_segment_distance(anchor, mesh.nodes[f.n0], mesh.nodes[f.n1]);
    if (d < best) {
      best = d;
      host = i;
    }
  }
  if (best > 1e-8 * (1.0 + norm(anchor, 2)))
    throw std::runtime_error("straighten_interface: anchor does not lie on Gamma_0");

  const Vec3 n_solid = mesh.interface_normal(host);
  const Vec3 n_fluid = n_solid * -1.0;
  const Vec3 tangent{{-n_fluid[1], n_fluid[0], 0.0}};

  // interface nodes in the patch, expressed in the local frame
  std::vector<std::pair<double, double>> samples;  // (xi, zeta)
  auto add_sample = [&](int node) {
    const Vec3 r = mesh.nodes[node] - anchor;
    const double xi = dot(r, tangent, 2);
    const double zeta = dot(r, n_fluid, 2);
    if (std::abs(xi) <= radius) samples.emplace_back(xi, zeta);
  };
  std::vector<char> seen(mesh.num_nodes(), 0);
  for (const auto& f : mesh.interface_facets)
    for (int node : {f.n0, f.n1})
      if (!seen[node]) {
        seen[node] = 1;
        const double d = norm(mesh.nodes[node] - anchor, 2);
        if (d <= radius * 1.5) add_sample(node);
      }
  std::sort(samples.begin(), samples.end());
  if (samples.size() < 2)
    throw std::runtime_error("straighten_interface: patch has too few interface nodes");
  for (std::size_t i = 1; i < samples.size(); ++i)
    if (samples[i].first - samples[i - 1].first < 1e-12 * radius)
      throw std::runtime_error(
          "straighten_interface: interface patch is not a graph over the tangent line");

  auto gamma = [samples](double xi) {
    // piecewise-linear interpolation with end-slope extrapolation
    if (xi <= samples.front().first) {
      const auto& a = samples[0];
      const auto& b = samples[1];
      return a.second + (xi - a.first) * (b.second - a.second) / (b.first - a.first);
    }
    for (std::size_t i = 1; i < samples.size(); ++i)
      if (xi <= samples[i].first) {
        const auto& a = samples[i - 1];
        const auto& b = samples[i];
        return a.second + (xi - a.first) * (b.second - a.second) / (b.first - a.first);
      }
    const auto& a = samples[samples.size() - 2];
    const auto& b = samples.back();
    return a.second + (xi - a.first) * (b.second - a.second) / (b.first - a.first);
  };
  auto gamma_prime = [samples](double xi) {
    std::size_t i = 1;
    while (i + 1 < samples.size() && xi > samples[i].first) ++i;
    const auto& a = samples[i - 1];
    const auto& b = samples[i];
    return (b.second - a.second) / (b.first - a.first);
  };

  LocalChart chart(gamma, gamma_prime, radius);
  chart.anchor = anchor;
  chart.tangent = tangent;
  chart.normal_to_fluid = n_fluid;
  return chart;
}

}  // namespace lagfsi
