#include "rpimc/assembly.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace rpimc {

namespace {

void check_table(const NodeCloud& cloud, const BasisTable& basis) {
  if (basis.size() != cloud.size())
    throw std::invalid_argument("basis table does not cover every node");
}

}  // namespace

SparseOperator assemble_flux_operator(const NodeCloud& cloud, const BasisTable& basis,
                                      const Conductivity& conductivity, int threads) {
  check_table(cloud, basis);
  const int dim = cloud.dim;
  const std::size_t n = cloud.size();
  return SparseOperator::assemble_rows(
      dim * n, n, threads, [&](std::size_t row, auto& out) {
        const std::size_t node = row / dim;
        const int axis = static_cast<int>(row % dim);
        const ShapeFunctionSet& set = basis.sets[node];
        out.reserve(set.size());
        for (std::size_t li = 0; li < set.size(); ++li) {
          const std::uint32_t gi = set.support->neighbor_indices[li];
          const Vec3 flux = conductivity.flux_factor(node, set.gradients[li]);
          out.emplace_back(gi, flux[axis]);
        }
      });
}

SparseOperator assemble_divergence_operator(const NodeCloud& cloud, const BasisTable& basis,
                                            int threads) {
  check_table(cloud, basis);
  const int dim = cloud.dim;
  const std::size_t n = cloud.size();
  return SparseOperator::assemble_rows(
      n, dim * n, threads, [&](std::size_t node, auto& out) {
        const ShapeFunctionSet& set = basis.sets[node];
        out.reserve(set.size() * dim);
        for (std::size_t li = 0; li < set.size(); ++li) {
          const std::uint32_t gi = set.support->neighbor_indices[li];
          for (int k = 0; k < dim; ++k)
            out.emplace_back(std::uint32_t(dim) * gi + std::uint32_t(k),
                             set.gradients[li][k]);
        }
      });
}

std::vector<double> assemble_lumped_mass(const NodeCloud& cloud, const BasisTable& basis,
                                         double c_rho) {
  check_table(cloud, basis);
  if (c_rho <= 0.0) throw std::invalid_argument("c_rho must be positive");
  std::vector<double> mass(cloud.size());
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    double sum = 0.0;
    for (double phi : basis.sets[i].values) sum += phi;
    mass[i] = c_rho * sum;
  }
  return mass;
}

std::vector<double> PenalizedSystem::rhs_correction(const NodeCloud& cloud,
                                                    const ScalarField& qbar, double t) const {
  std::vector<double> correction(k_mod.rows(), 0.0);
  if (neumann_nodes.empty() || !qbar) return correction;
  std::vector<double> qvals(neumann_nodes.size());
  for (std::size_t r = 0; r < neumann_nodes.size(); ++r)
    qvals[r] = qbar(cloud.positions[neumann_nodes[r]], t);
  neumann_rhs_map.multiply(qvals, correction);
  return correction;
}

PenalizedSystem apply_neumann_penalty(const SparseOperator& k_a, const SparseOperator& k_s,
                                      const NodeCloud& cloud, const PenaltyConfig& penalty,
                                      int threads) {
  const int dim = cloud.dim;
  const std::size_t n = cloud.size();
  if (k_a.rows() != dim * n || k_a.cols() != n || k_s.rows() != n || k_s.cols() != dim * n)
    throw std::invalid_argument("operator dimensions do not match the cloud");

  PenalizedSystem system;
  system.alpha = penalty.alpha;
  std::vector<char> is_neumann(n, 0);
  std::vector<std::uint32_t> column_of(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (cloud.tags[i] != BoundaryTag::neumann) continue;
    const double norm = cloud.normals[i].norm();
    if (std::abs(norm - 1.0) > 1e-9)
      throw std::invalid_argument("neumann node " + std::to_string(i) +
                                  " has a non-unit normal (|n| = " + std::to_string(norm) + ")");
    is_neumann[i] = 1;
    column_of[i] = static_cast<std::uint32_t>(system.neumann_nodes.size());
    system.neumann_nodes.push_back(static_cast<std::uint32_t>(i));
  }

  if (system.neumann_nodes.empty()) {
    system.k_mod = multiply(k_s, k_a, threads);
    system.neumann_rhs_map = SparseOperator(n, 0);
    SparseOperator::RowBuilder empty(n, 0);
    for (std::size_t i = 0; i < n; ++i) empty.commit_row();
    system.neumann_rhs_map = empty.finish();
    return system;
  }

  // Scale the flux rows of every neumann node by Q^{-1} = I - a/(1+a) n n^T.
  // The d rows of one node share a column pattern, so the combination keeps
  // the layout.
  const double shrink = penalty.alpha / (1.0 + penalty.alpha);
  SparseOperator k_a_scaled = k_a;
  for (std::uint32_t node : system.neumann_nodes) {
    const Vec3 normal = cloud.normals[node];
    std::array<std::span<double>, 3> rows;
    for (int k = 0; k < dim; ++k) rows[k] = k_a_scaled.row_values(std::size_t(dim) * node + k);
    const std::size_t width = rows[0].size();
    std::vector<double> original(width * dim);
    for (int k = 0; k < dim; ++k)
      std::copy(rows[k].begin(), rows[k].end(), original.begin() + k * width);
    for (int k = 0; k < dim; ++k) {
      for (std::size_t p = 0; p < width; ++p) {
        double ndotq = 0.0;
        for (int l = 0; l < dim; ++l) ndotq += normal[l] * original[l * width + p];
        rows[k][p] = original[k * width + p] - shrink * normal[k] * ndotq;
      }
    }
  }

  // Neumann balance rows collocate the penalized fluxes, all other rows the
  // raw ones.
  system.k_mod = multiply_rowwise(k_s, k_a, k_a_scaled, is_neumann, threads);

  SparseOperator::RowBuilder map_builder(n, system.neumann_nodes.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (is_neumann[i]) {
      const auto cols = k_s.row_cols(i);
      const auto vals = k_s.row_values(i);
      std::size_t p = 0;
      while (p < cols.size()) {
        const std::uint32_t gi = cols[p] / std::uint32_t(dim);
        Vec3 grad;
        while (p < cols.size() && cols[p] / std::uint32_t(dim) == gi) {
          grad[static_cast<int>(cols[p] % std::uint32_t(dim))] = vals[p];
          ++p;
        }
        if (is_neumann[gi])
          map_builder.add(column_of[gi], -shrink * grad.dot(cloud.normals[gi]));
      }
    }
    map_builder.commit_row();
  }
  system.neumann_rhs_map = map_builder.finish();
  return system;
}

void apply_dirichlet(std::vector<double>& u, const NodeCloud& cloud, const ScalarField& ubar,
                     double t) {
  if (u.size() != cloud.size()) throw std::invalid_argument("state size mismatch");
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    if (cloud.tags[i] != BoundaryTag::dirichlet) continue;
    if (!ubar)
      throw std::invalid_argument("dirichlet value undefined at tagged node " +
                                  std::to_string(i));
    u[i] = ubar(cloud.positions[i], t);
  }
}

}  // namespace rpimc
