// Gerschgorin-bounded explicit time integration: dt_s from the row bound
// m_ii / (k_ii + sum_{j!=i} |k_ij|), forward Euler with lumped mass.
#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "rpimc/sparse.hpp"

namespace rpimc {

struct GerschgorinEstimate {
  double dt_s = 0.0;
  std::size_t binding_row = 0;
  std::size_t skipped_rows = 0;  // rows with non-positive denominator
};

// Throws when every row denominator is non-positive (no stable step under
// this bound).
GerschgorinEstimate stable_timestep(std::span<const double> mass_diag, const SparseOperator& k);

struct TimeIntegrator {
  double dt = 0.0;
  double safety = 0.9;
  double t = 0.0;
  std::int64_t step_count = 0;
};

// Fills f(t, u) into the rhs buffer.
using RhsFn = std::function<void(double, std::span<const double>, std::span<double>)>;
// Boundary overwrite hook, called with the newly reached time.
using BoundaryFn = std::function<void(double, std::vector<double>&)>;

// One forward Euler step of size dt_step (<= integrator.dt):
//   u <- u + dt_step * M^{-1} (f(t, u) - K u), then the boundary hook.
// Throws on NaN/Inf in the state, reporting the step number.
void advance(std::vector<double>& u, std::span<const double> mass_diag, const SparseOperator& k,
             const RhsFn& rhs, const BoundaryFn& boundary, TimeIntegrator& integrator,
             double dt_step, int threads = 1);

struct MarchOptions {
  double t_final = 1.0;
  double safety = 0.9;
  double snapshot_interval = 0.0;  // 0: only initial and final snapshots
  int threads = 1;
  bool progress = false;  // per-snapshot "t=... max|u|=... dt=..." on stderr
  std::function<void(double, std::span<const double>)> on_snapshot;
};

struct MarchResult {
  double dt = 0.0;
  GerschgorinEstimate bound;
  std::int64_t steps = 0;
};

// Runs forward Euler from t=0 to exactly t_final (the last step shrinks to
// land on it). dt = safety * dt_s.
MarchResult march(std::vector<double>& u, std::span<const double> mass_diag,
                  const SparseOperator& k, const RhsFn& rhs, const BoundaryFn& boundary,
                  const MarchOptions& options);

}  // namespace rpimc
