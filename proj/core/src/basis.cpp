#include "rpimc/basis.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <string>

#include "rpimc/parallel.hpp"

namespace rpimc {

namespace {

constexpr double kConditionLimit = 1e14;

double quartic_weight(double s) {
  if (s >= 1.0) return 0.0;
  const double s2 = s * s;
  return 1.0 - 6.0 * s2 + 8.0 * s2 * s - 3.0 * s2 * s2;
}

// w'(s)/s, finite at s = 0: w'(s) = -12 s (1-s)^2.
double quartic_weight_slope(double s) {
  if (s >= 1.0) return 0.0;
  const double r = 1.0 - s;
  return -12.0 * r * r;
}

}  // namespace

std::pair<double, double> mq_rbf(double d, double r_c, double q_exp) {
  if (d < 0.0 || r_c <= 0.0) throw std::invalid_argument("mq_rbf requires d >= 0 and r_c > 0");
  const double base = d * d + r_c * r_c;
  const double value = std::pow(base, q_exp);
  const double radial = 2.0 * q_exp * d * std::pow(base, q_exp - 1.0);
  return {value, radial};
}

ShapeFunctionSet build_rpi(const Vec3& point, const NodeCloud& cloud,
                           const SupportDomain& support, const RpiParams& params) {
  const int dim = cloud.dim;
  const int n = static_cast<int>(support.neighbor_indices.size());
  const int m = dim + 1;
  const double r_c = params.shape_length(cloud.spacing);
  const double q = params.q_exp;

  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(n + m, n + m);
  for (int i = 0; i < n; ++i) {
    const Vec3& xi = cloud.positions[support.neighbor_indices[i]];
    for (int j = i; j < n; ++j) {
      const Vec3& xj = cloud.positions[support.neighbor_indices[j]];
      const double d2 = (xi - xj).dot(xi - xj);
      const double v = std::pow(d2 + r_c * r_c, q);
      g(i, j) = v;
      g(j, i) = v;
    }
    g(i, n) = 1.0;
    g(n, i) = 1.0;
    for (int k = 0; k < dim; ++k) {
      g(i, n + 1 + k) = xi[k];
      g(n + 1 + k, i) = xi[k];
    }
  }

  Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(n + m, 1 + dim);
  for (int i = 0; i < n; ++i) {
    const Vec3 diff = point - cloud.positions[support.neighbor_indices[i]];
    const double base = diff.dot(diff) + r_c * r_c;
    rhs(i, 0) = std::pow(base, q);
    const double slope = 2.0 * q * std::pow(base, q - 1.0);
    for (int k = 0; k < dim; ++k) rhs(i, 1 + k) = slope * diff[k];
  }
  rhs(n, 0) = 1.0;
  for (int k = 0; k < dim; ++k) {
    rhs(n + 1 + k, 0) = point[k];
    rhs(n + 1 + k, 1 + k) = 1.0;
  }

  Eigen::PartialPivLU<Eigen::MatrixXd> lu(g.transpose());
  const double rcond = lu.rcond();
  if (!(rcond > 1.0 / kConditionLimit))
    throw std::runtime_error("ill-conditioned moment matrix at node " +
                             std::to_string(support.center_index) +
                             " (condition estimate " + std::to_string(1.0 / rcond) + ")");
  const Eigen::MatrixXd sol = lu.solve(rhs);

  ShapeFunctionSet set;
  set.support = &support;
  set.values.resize(n);
  set.gradients.resize(n);
  for (int i = 0; i < n; ++i) {
    set.values[i] = sol(i, 0);
    for (int k = 0; k < dim; ++k) set.gradients[i][k] = sol(i, 1 + k);
  }
  return set;
}

ShapeFunctionSet build_mls(const Vec3& point, const NodeCloud& cloud,
                           const SupportDomain& support, const MlsParams& params) {
  if (params.support_radius <= 0.0)
    throw std::invalid_argument("MLS support radius must be positive");
  if (params.basis_order != 1)
    throw std::invalid_argument("MLS supports the linear basis only");
  const int dim = cloud.dim;
  const int n = static_cast<int>(support.neighbor_indices.size());
  const int m = dim + 1;
  const double rw = params.support_radius;

  Eigen::MatrixXd p(n, m);
  Eigen::VectorXd w(n), slope_over_rw2(n);
  for (int i = 0; i < n; ++i) {
    const Vec3& xi = cloud.positions[support.neighbor_indices[i]];
    const double s = (point - xi).norm() / rw;
    w(i) = quartic_weight(s);
    slope_over_rw2(i) = quartic_weight_slope(s) / (rw * rw);
    p(i, 0) = 1.0;
    for (int k = 0; k < dim; ++k) p(i, 1 + k) = xi[k];
  }

  const Eigen::MatrixXd moment = p.transpose() * w.asDiagonal() * p;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(moment);
  if (!(lu.rcond() > 1.0 / kConditionLimit))
    throw std::runtime_error("rank-deficient MLS moment matrix at node " +
                             std::to_string(support.center_index));

  Eigen::VectorXd px(m);
  px(0) = 1.0;
  for (int k = 0; k < dim; ++k) px(1 + k) = point[k];
  const Eigen::VectorXd gamma = lu.solve(px);
  const Eigen::VectorXd fit = p * gamma;  // p_i^T gamma per node

  ShapeFunctionSet set;
  set.support = &support;
  set.values.resize(n);
  set.gradients.resize(n);
  for (int i = 0; i < n; ++i) set.values[i] = w(i) * fit(i);

  for (int k = 0; k < dim; ++k) {
    Eigen::VectorXd wk(n);
    for (int i = 0; i < n; ++i) {
      const double dxk = point[k] - cloud.positions[support.neighbor_indices[i]][k];
      wk(i) = slope_over_rw2(i) * dxk;
    }
    const Eigen::MatrixXd moment_k = p.transpose() * wk.asDiagonal() * p;
    Eigen::VectorXd pk = Eigen::VectorXd::Zero(m);
    pk(1 + k) = 1.0;
    const Eigen::VectorXd gamma_k = lu.solve(pk - moment_k * gamma);
    const Eigen::VectorXd fit_k = p * gamma_k;
    for (int i = 0; i < n; ++i) set.gradients[i][k] = wk(i) * fit(i) + w(i) * fit_k(i);
  }
  return set;
}

double default_mls_radius(const NodeCloud& cloud, double dilatation) {
  return dilatation * cloud.spacing * std::sqrt(double(cloud.dim));
}

BasisTable build_basis_table(const NodeCloud& cloud, std::vector<SupportDomain> supports,
                             BasisKind kind, const RpiParams& rpi, int threads) {
  BasisTable table;
  table.kind = kind;
  table.supports = std::move(supports);
  table.sets.resize(table.supports.size());
  parallel_for(table.supports.size(), threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const SupportDomain& s = table.supports[i];
      const Vec3& x = cloud.positions[i];
      if (kind == BasisKind::rpi) {
        table.sets[i] = build_rpi(x, cloud, s, rpi);
      } else {
        MlsParams mls;
        Vec3 half = s.box_half_widths;
        if (cloud.dim == 2) half.z = 0.0;
        mls.support_radius = half.norm();
        table.sets[i] = build_mls(x, cloud, s, mls);
      }
    }
  });
  return table;
}

}  // namespace rpimc
