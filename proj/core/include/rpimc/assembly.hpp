// Global mixed-collocation operators. The flux operator maps nodal field
// values to stacked nodal flux vectors, the divergence operator collocates
// the flux divergence back onto nodes, and the penalty path folds prescribed
// normal fluxes into the composed system.
#pragma once

#include <vector>

#include "rpimc/basis.hpp"
#include "rpimc/problem.hpp"
#include "rpimc/sparse.hpp"

namespace rpimc {

// K_a: d*N rows by N columns. The d rows of node I hold -(D grad(phi_i))(x_I)
// per support node i, so q = K_a u stacks the nodal flux vectors.
SparseOperator assemble_flux_operator(const NodeCloud& cloud, const BasisTable& basis,
                                      const Conductivity& conductivity, int threads = 1);

// K_s: N rows by d*N columns. Row I dots grad(phi_i)(x_I) against the flux
// components of support node i.
SparseOperator assemble_divergence_operator(const NodeCloud& cloud, const BasisTable& basis,
                                            int threads = 1);

// Row-sum lumped mass diagonal, entry c_rho * sum_i phi_i(x_I).
std::vector<double> assemble_lumped_mass(const NodeCloud& cloud, const BasisTable& basis,
                                         double c_rho);

struct PenalizedSystem {
  SparseOperator k_mod;                        // K'
  SparseOperator neumann_rhs_map;              // N x gamma_r; correction = map * qbar
  std::vector<std::uint32_t> neumann_nodes;    // node index per column of the map
  double alpha = 0.0;

  // -alpha * Ks^1 Q^{-1} Nr^T qbar evaluated at the given time.
  std::vector<double> rhs_correction(const NodeCloud& cloud, const ScalarField& qbar,
                                     double t) const;
};

// Builds K' from K_a and K_s. Neumann balance rows collocate the penalized
// fluxes q^1 = Q^{-1} K_a^1 u with the per-node analytic inverse
// Q^{-1} = I - alpha/(1+alpha) n n^T; all other rows collocate the raw
// fluxes. Throws if a neumann-tagged node has a missing or non-unit normal.
PenalizedSystem apply_neumann_penalty(const SparseOperator& k_a, const SparseOperator& k_s,
                                      const NodeCloud& cloud, const PenaltyConfig& penalty,
                                      int threads = 1);

// Strong imposition: overwrite dirichlet-tagged entries with ubar(x_I, t).
void apply_dirichlet(std::vector<double>& u, const NodeCloud& cloud, const ScalarField& ubar,
                     double t);

}  // namespace rpimc
