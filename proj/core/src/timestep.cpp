#include "rpimc/timestep.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <string>

#include "rpimc/parallel.hpp"

namespace rpimc {

GerschgorinEstimate stable_timestep(std::span<const double> mass_diag, const SparseOperator& k) {
  if (k.rows() != k.cols()) throw std::invalid_argument("operator must be square");
  if (mass_diag.size() != k.rows()) throw std::invalid_argument("mass diagonal size mismatch");

  GerschgorinEstimate est;
  est.dt_s = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < k.rows(); ++i) {
    const auto cols = k.row_cols(i);
    const auto vals = k.row_values(i);
    double diag = 0.0, off = 0.0;
    for (std::size_t p = 0; p < cols.size(); ++p) {
      if (cols[p] == i)
        diag = vals[p];
      else
        off += std::abs(vals[p]);
    }
    const double denom = diag + off;
    if (denom <= 0.0) {
      ++est.skipped_rows;
      continue;
    }
    const double bound = mass_diag[i] / denom;
    if (bound < est.dt_s) {
      est.dt_s = bound;
      est.binding_row = i;
    }
  }
  if (!std::isfinite(est.dt_s))
    throw std::runtime_error("no stable timestep: all row denominators are non-positive");
  return est;
}

void advance(std::vector<double>& u, std::span<const double> mass_diag, const SparseOperator& k,
             const RhsFn& rhs, const BoundaryFn& boundary, TimeIntegrator& integrator,
             double dt_step, int threads) {
  const std::size_t n = u.size();
  static thread_local std::vector<double> ku_buffer, f_buffer;
  ku_buffer.assign(n, 0.0);
  f_buffer.assign(n, 0.0);
  // bind the calling thread's buffers; worker threads must not re-resolve
  // the thread_local names
  const std::span<double> ku(ku_buffer), f(f_buffer);
  double* const state = u.data();

  k.multiply(u, ku, threads);
  if (rhs) rhs(integrator.t, u, f);

  bool bad = false;
  parallel_for(
      n, threads,
      [&bad, state, ku, f, mass_diag, dt_step](std::size_t begin, std::size_t end) {
        bool local_bad = false;
        for (std::size_t i = begin; i < end; ++i) {
          state[i] += dt_step * (f[i] - ku[i]) / mass_diag[i];
          local_bad |= !std::isfinite(state[i]);
        }
        if (local_bad) bad = true;
      },
      8192);
  integrator.t += dt_step;
  ++integrator.step_count;
  if (bad)
    throw std::runtime_error("non-finite state detected at step " +
                             std::to_string(integrator.step_count));
  if (boundary) boundary(integrator.t, u);
}

MarchResult march(std::vector<double>& u, std::span<const double> mass_diag,
                  const SparseOperator& k, const RhsFn& rhs, const BoundaryFn& boundary,
                  const MarchOptions& options) {
  if (options.safety <= 0.0 || options.safety > 1.0)
    throw std::invalid_argument("safety factor must lie in (0, 1]");

  MarchResult result;
  result.bound = stable_timestep(mass_diag, k);
  result.dt = options.safety * result.bound.dt_s;

  TimeIntegrator integrator{result.dt, options.safety, 0.0, 0};

  auto emit = [&](double t) {
    if (options.on_snapshot) options.on_snapshot(t, u);
    if (options.progress) {
      double umax = 0.0;
      for (double v : u) umax = std::max(umax, std::abs(v));
      std::fprintf(stderr, "t=%.9g max|u|=%.9g dt=%.9g\n", t, umax, integrator.dt);
    }
  };

  emit(0.0);
  const double tf = options.t_final;
  const double tol = 1e-12 * std::max(1.0, tf);
  double next_snapshot = options.snapshot_interval > 0.0
                             ? options.snapshot_interval
                             : std::numeric_limits<double>::infinity();
  double last_emitted = 0.0;
  while (integrator.t < tf - tol) {
    // time is tracked as step_count * dt; the final partial step shrinks to
    // land exactly on t_final
    const double t_next = double(integrator.step_count + 1) * integrator.dt;
    const bool final_step = t_next >= tf - tol;
    const double dt_step = final_step ? tf - integrator.t : integrator.dt;
    advance(u, mass_diag, k, rhs, boundary, integrator, dt_step, options.threads);
    integrator.t = final_step ? tf : t_next;
    if (integrator.t >= next_snapshot - tol) {
      emit(integrator.t);
      last_emitted = integrator.t;
      while (next_snapshot <= integrator.t + tol) next_snapshot += options.snapshot_interval;
    }
  }
  integrator.t = tf;
  if (last_emitted < tf - tol) emit(tf);
  result.steps = integrator.step_count;
  return result;
}

}  // namespace rpimc
