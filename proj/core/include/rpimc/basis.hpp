// Meshfree trial functions: radial point interpolation (multiquadric RBF
// plus linear polynomial augmentation) and moving least squares with a
// quartic spline weight. Both provide values and first derivatives.
#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "rpimc/geometry.hpp"

namespace rpimc {

struct RpiParams {
  double alpha_c = 1.5;  // dimensionless shape constant
  double d_c = 0.0;      // average nodal spacing; 0 means "use cloud.spacing"
  double q_exp = 1.03;   // multiquadric exponent, positive and non-integer

  double shape_length(double fallback_spacing) const {
    return alpha_c * (d_c > 0.0 ? d_c : fallback_spacing);
  }
};

struct MlsParams {
  double support_radius = 0.0;  // quartic weight radius
  int basis_order = 1;          // linear basis only
};

// phi and grad(phi) over the nodes of one support domain, evaluated at one
// point. `support` references storage owned by the caller (or the
// BasisTable the set belongs to).
struct ShapeFunctionSet {
  std::vector<double> values;
  std::vector<Vec3> gradients;
  const SupportDomain* support = nullptr;

  std::size_t size() const { return values.size(); }
};

// Multiquadric (d^2 + r_c^2)^q and its derivative with respect to d.
std::pair<double, double> mq_rbf(double d, double r_c, double q_exp);

// RPI shape functions at `point`. The augmented moment system G^T y = [r; p]
// is solved by dense LU with partial pivoting; a condition estimate beyond
// 1e14 raises an error naming the support's center node.
ShapeFunctionSet build_rpi(const Vec3& point, const NodeCloud& cloud,
                           const SupportDomain& support, const RpiParams& params);

// MLS shape functions with linear basis and quartic spline weight
// w(s) = 1 - 6s^2 + 8s^3 - 3s^4, s = d / support_radius.
ShapeFunctionSet build_mls(const Vec3& point, const NodeCloud& cloud,
                           const SupportDomain& support, const MlsParams& params);

enum class BasisKind { rpi, mls };

// Shape functions of every node's support evaluated at the node itself --
// the inputs the collocation operators are assembled from.
struct BasisTable {
  BasisKind kind = BasisKind::rpi;
  std::vector<SupportDomain> supports;
  std::vector<ShapeFunctionSet> sets;

  std::size_t size() const { return sets.size(); }
};

// MLS weight radius rule: dilatation * h * sqrt(dim), circumscribing the
// search box so every box neighbor carries nonzero weight.
double default_mls_radius(const NodeCloud& cloud, double dilatation);

BasisTable build_basis_table(const NodeCloud& cloud, std::vector<SupportDomain> supports,
                             BasisKind kind, const RpiParams& rpi, int threads = 1);

}  // namespace rpimc
