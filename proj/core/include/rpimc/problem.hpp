// Problem statement types shared by assembly, time stepping and the
// benchmark/monodomain drivers.
#pragma once

#include <functional>
#include <stdexcept>

#include "rpimc/geometry.hpp"

namespace rpimc {

struct Mat3 {
  double a[3][3] = {{0, 0, 0}, {0, 0, 0}, {0, 0, 0}};

  static Mat3 identity(double s = 1.0) {
    Mat3 m;
    m.a[0][0] = m.a[1][1] = m.a[2][2] = s;
    return m;
  }
  Vec3 apply(const Vec3& v) const {
    return {a[0][0] * v.x + a[0][1] * v.y + a[0][2] * v.z,
            a[1][0] * v.x + a[1][1] * v.y + a[1][2] * v.z,
            a[2][0] * v.x + a[2][1] * v.y + a[2][2] * v.z};
  }
};

// Scalar conductivity k, or a per-node symmetric positive definite tensor.
struct Conductivity {
  double scalar = 1.0;
  std::function<Mat3(std::size_t)> tensor;  // wins over scalar when set

  Vec3 flux_factor(std::size_t node, const Vec3& grad) const {
    if (tensor) return tensor(node).apply(grad) * -1.0;
    return grad * -scalar;
  }
};

using ScalarField = std::function<double(const Vec3&, double)>;  // (x, t)

struct TransientProblem {
  double c_rho = 1.0;  // volumetric heat capacity
  Conductivity conductivity;
  ScalarField dirichlet_value;  // ubar(x, t), required where dirichlet nodes exist
  ScalarField neumann_value;    // qbar(x, t), zero-flux when unset
  ScalarField source;           // f(x, t), zero when unset
  std::function<double(double)> reaction_coeff;  // optional r(t), adds r(t)*u to the rhs
  ScalarField initial;          // u(x, 0)
  double t_final = 1.0;
};

struct PenaltyConfig {
  double alpha = 1e6;

  bool in_recommended_band() const { return alpha >= 1e4 && alpha <= 1e7; }
};

}  // namespace rpimc
