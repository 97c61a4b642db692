#pragma once

// Interface-straightening charts. The chart is a volume-preserving shear:
// in local frame coordinates (xi, zeta) anchored on Gamma_0,
//   Psi(y)  = (y1, y2 + gamma(y1))   maps {y2 > 0} onto the fluid side,
//   Phi(x)  = (x1, x2 - gamma(x1))   is its inverse,
// so det(grad Psi) = 1 identically.

#include <functional>
#include <vector>

#include "lagfsi/mesh.hpp"
#include "lagfsi/tensor.hpp"

namespace lagfsi {

class LocalChart {
public:
  /// gamma and its derivative, in the local tangent/normal frame.
  LocalChart(std::function<double(double)> gamma,
             std::function<double(double)> gamma_prime, double radius);

  double radius() const { return radius_; }

  /// Chart-local forward/inverse maps (shear only, frame not applied).
  Vec3 psi(const Vec3& y) const;
  Vec3 phi(const Vec3& x) const;

  Mat grad_psi(const Vec3& y) const;
  /// Metric factor g = (grad Psi)^{-1}.
  Mat metric(const Vec3& y) const;
  double det_grad_psi(const Vec3& y) const;

  /// Frame: world = anchor + xi * tangent + zeta * normal_to_fluid.
  Vec3 anchor;
  Vec3 tangent;
  Vec3 normal_to_fluid;

  Vec3 to_world(const Vec3& local) const;
  Vec3 to_local(const Vec3& world) const;

private:
  std::function<double(double)> gamma_;
  std::function<double(double)> gamma_prime_;
  double radius_;
};

/// Builds a chart around an anchor point on Gamma_0 from the mesh's interface
/// polyline, with gamma the piecewise-linear graph of the interface over the
/// tangent line at the anchor. Throws if the patch is not a graph (fold-over)
/// or the anchor is not on Gamma_0.
LocalChart straighten_interface(const Mesh& mesh, const Vec3& anchor, double radius);

}  // namespace lagfsi
