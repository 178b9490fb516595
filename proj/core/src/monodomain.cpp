#include "rpimc/monodomain.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>

#include "rpimc/parallel.hpp"
#include "rpimc/timestep.hpp"

namespace rpimc {

FiberField FiberField::uniform(std::size_t nodes, const Vec3& f, double d0, double rho) {
  FiberField field;
  field.direction.assign(nodes, f.normalized());
  field.d0 = d0;
  field.rho_aniso = rho;
  return field;
}

Mat3 diffusion_tensor(const FiberField& fiber, std::size_t node) {
  const Vec3& f = fiber.direction[node];
  if (std::abs(f.norm() - 1.0) > 1e-9)
    throw std::invalid_argument("fiber direction at node " + std::to_string(node) +
                                " is not a unit vector");
  Mat3 d;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      d.a[i][j] = fiber.d0 * ((1.0 - fiber.rho_aniso) * f[i] * f[j] +
                              (i == j ? fiber.rho_aniso : 0.0));
  return d;
}

void TwoCurrentCellModel::initialize(std::span<double> v, std::span<double> gates) const {
  std::fill(v.begin(), v.end(), p_.v_rest_mv);
  std::fill(gates.begin(), gates.end(), 1.0);
}

void TwoCurrentCellModel::step(double dt, std::span<double> v, std::span<double> gates,
                               std::span<const double> stimulus) const {
  const std::size_t n = v.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double vn = (v[i] - p_.v_rest_mv) / p_.v_span_mv;  // dimensionless
    const double w = gates[i];
    const double inward = w * vn * vn * (1.0 - vn) / p_.tau_in;
    const double outward = -vn / p_.tau_out;
    const double stim = stimulus.empty() ? 0.0 : stimulus[i] / p_.v_span_mv;
    const double vnext = vn + dt * (inward + outward + stim);
    const double wnext =
        vn < p_.v_gate ? w + dt * (1.0 - w) / p_.tau_open : w - dt * w / p_.tau_close;
    v[i] = p_.v_rest_mv + p_.v_span_mv * vnext;
    gates[i] = wnext;
  }
}

void reaction_step(IonicState& state, const IonicModel& model, double dt_reaction,
                   const Stimulus& stimulus, double t_ms) {
  const std::size_t n = state.v.size();
  static thread_local std::vector<double> stim_buffer;
  std::span<const double> stim;
  const bool active = !stimulus.nodes.empty() && t_ms >= stimulus.start_ms &&
                      t_ms < stimulus.start_ms + stimulus.duration_ms;
  if (active) {
    stim_buffer.assign(n, 0.0);
    for (std::uint32_t idx : stimulus.nodes) stim_buffer[idx] = stimulus.amplitude;
    stim = stim_buffer;
  }
  model.step(dt_reaction, state.v, state.gates, stim);

  const int gates = model.gate_count();
  for (int g = 0; g < gates; ++g) {
    const auto [lo, hi] = model.gate_bounds(g);
    for (std::size_t i = 0; i < n; ++i) {
      const double value = state.gates[i * gates + g];
      if (!(value >= lo - 1e-9 && value <= hi + 1e-9))
        throw std::runtime_error("gate '" + model.gate_name(g) + "' out of bounds at node " +
                                 std::to_string(i) + " (value " + std::to_string(value) + ")");
    }
  }
}

double find_diastolic_threshold(const IonicModel& model, double pulse_ms, int iterations,
                                double window_ms) {
  const double dt = 0.01;
  auto activates = [&](double amplitude) {
    IonicState cell;
    cell.v.resize(1);
    cell.gates.resize(std::size_t(model.gate_count()));
    model.initialize(cell.v, cell.gates);
    Stimulus stim;
    stim.nodes = {0};
    stim.start_ms = 0.0;
    stim.duration_ms = pulse_ms;
    stim.amplitude = amplitude;
    double t = 0.0;
    while (t < window_ms) {
      reaction_step(cell, model, dt, stim, t);
      t += dt;
      if (cell.v[0] >= 0.0) return true;
    }
    return false;
  };

  double lo = 0.0, hi = 1.0;
  int guard = 0;
  while (!activates(hi)) {
    hi *= 2.0;
    if (++guard > 30) throw std::runtime_error("no activating stimulus amplitude found");
  }
  for (int it = 0; it < iterations; ++it) {
    const double mid = 0.5 * (lo + hi);
    (activates(mid) ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

ActivationMap compute_lat(const VoltageHistory& history, double threshold_mv) {
  if (history.frames.empty()) throw std::invalid_argument("empty voltage history");
  const std::size_t n = history.frames.front().size();
  ActivationMap map;
  map.threshold_mv = threshold_mv;
  map.lat_ms.assign(n, ActivationMap::kUnactivated);
  for (std::size_t i = 0; i < n; ++i) {
    if (history.frames[0][i] >= threshold_mv) {
      map.lat_ms[i] = history.times_ms[0];
      continue;
    }
    for (std::size_t k = 1; k < history.frames.size(); ++k) {
      const double prev = history.frames[k - 1][i];
      const double cur = history.frames[k][i];
      if (prev < threshold_mv && cur >= threshold_mv) {
        const double f = (threshold_mv - prev) / (cur - prev);
        map.lat_ms[i] =
            history.times_ms[k - 1] + f * (history.times_ms[k] - history.times_ms[k - 1]);
        break;
      }
    }
  }
  return map;
}

SlabResult run_slab(const SlabConfig& config, const IonicModel& model) {
  SlabResult result;
  StopWatch watch;

  NodeCloud cloud = tag_boundaries(generate_regular_grid(config.box, config.h),
                                   FaceTags::all(BoundaryTag::neumann));
  if (config.jitter > 0.0)
    cloud = perturb_interior(std::move(cloud), config.jitter * config.h, config.seed);

  const FiberField fiber =
      FiberField::uniform(cloud.size(), config.fiber, config.d0, config.rho_aniso);

  std::vector<SupportDomain> supports =
      find_all_supports(cloud, config.dilatation, config.threads);
  RpiParams rpi = config.rpi;
  if (rpi.d_c <= 0.0) rpi.d_c = cloud.spacing;
  const BasisKind kind = config.method == Method::rpimc ? BasisKind::rpi : BasisKind::mls;
  BasisTable basis = build_basis_table(cloud, std::move(supports), kind, rpi, config.threads);
  result.timings.basis_s = watch.lap();

  Conductivity conductivity;
  conductivity.tensor = [&fiber](std::size_t node) { return diffusion_tensor(fiber, node); };
  std::vector<double> mass = assemble_lumped_mass(cloud, basis, 1.0);
  PenalizedSystem system;
  {
    SparseOperator k_a = assemble_flux_operator(cloud, basis, conductivity, config.threads);
    SparseOperator k_s = assemble_divergence_operator(cloud, basis, config.threads);
    system = apply_neumann_penalty(k_a, k_s, cloud, config.penalty, config.threads);
  }
  result.timings.assembly_s = watch.lap();

  Stimulus stim;
  stim.start_ms = 0.0;
  stim.duration_ms = config.stim_duration_ms;
  const double tol = 1e-9 * std::max(1.0, config.h);
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    bool pick = false;
    switch (config.stim_site) {
      case StimulusSite::bottom_face:
        pick = std::abs(cloud.positions[i].z - config.box.lo.z) <= tol;
        break;
      case StimulusSite::x_min_face:
        pick = std::abs(cloud.positions[i].x - config.box.lo.x) <= tol;
        break;
      case StimulusSite::center_node:
        break;
    }
    if (pick) stim.nodes.push_back(static_cast<std::uint32_t>(i));
  }
  if (config.stim_site == StimulusSite::center_node) {
    const Vec3 center = (config.box.lo + config.box.hi) * 0.5;
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::max();
    for (std::size_t i = 0; i < cloud.size(); ++i) {
      const double d = (cloud.positions[i] - center).norm();
      if (d < best_d) {
        best_d = d;
        best = i;
      }
    }
    stim.nodes = {static_cast<std::uint32_t>(best)};
  }

  const GerschgorinEstimate bound = stable_timestep(mass, system.k_mod);
  const double dt = config.safety * bound.dt_s;
  result.dt_ms = dt;

  // Diastolic threshold of the coupled configuration: the single-cell value
  // underestimates it because the stimulated layer loses charge to its
  // neighbors during the pulse. Bisect on short runs of the slab itself;
  // capture means a non-stimulated node crosses 0 mV.
  std::vector<char> stimulated(cloud.size(), 0);
  for (std::uint32_t i : stim.nodes) stimulated[i] = 1;
  auto captures = [&](double amplitude) {
    IonicState probe;
    probe.v.resize(cloud.size());
    probe.gates.resize(cloud.size() * std::size_t(model.gate_count()));
    model.initialize(probe.v, probe.gates);
    Stimulus pulse = stim;
    pulse.amplitude = amplitude;
    std::vector<double> flux(cloud.size());
    const double window_ms = 10.0 * std::max(1.0, config.stim_duration_ms);
    double t = 0.0;
    while (t < window_ms) {
      const double dt_step = std::min(dt, window_ms - t);
      const int substeps = std::max(1, int(std::ceil(dt_step / config.reaction_substep_ms)));
      const double dt_reaction = dt_step / substeps;
      for (int s = 0; s < substeps; ++s)
        reaction_step(probe, model, dt_reaction, pulse, t + s * dt_reaction);
      system.k_mod.multiply(probe.v, flux, config.threads);
      for (std::size_t i = 0; i < cloud.size(); ++i) probe.v[i] -= dt_step * flux[i] / mass[i];
      t += dt_step;
      for (std::size_t i = 0; i < cloud.size(); ++i)
        if (!stimulated[i] && probe.v[i] >= 0.0) return true;
    }
    return false;
  };
  double lo = 0.0, hi = find_diastolic_threshold(model);
  int guard = 0;
  while (!captures(hi)) {
    hi *= 2.0;
    if (++guard > 20) throw std::runtime_error("no capturing stimulus amplitude found");
  }
  for (int it = 0; it < 12; ++it) {
    const double mid = 0.5 * (lo + hi);
    (captures(mid) ? hi : lo) = mid;
  }
  result.diastolic_threshold = 0.5 * (lo + hi);
  stim.amplitude = config.stim_threshold_multiple * result.diastolic_threshold;

  IonicState state;
  state.v.resize(cloud.size());
  state.gates.resize(cloud.size() * std::size_t(model.gate_count()));
  model.initialize(state.v, state.gates);

  // snapshot bookkeeping doubles as incremental LAT detection
  ActivationMap lat;
  lat.threshold_mv = 0.0;
  lat.lat_ms.assign(cloud.size(), ActivationMap::kUnactivated);
  std::vector<double> prev_frame = state.v;
  double prev_time = 0.0;
  auto record = [&](double t) {
    for (std::size_t i = 0; i < cloud.size(); ++i) {
      if (lat.lat_ms[i] != ActivationMap::kUnactivated) continue;
      const double prev = prev_frame[i], cur = state.v[i];
      if (t == 0.0 && cur >= lat.threshold_mv) {
        lat.lat_ms[i] = 0.0;
      } else if (prev < lat.threshold_mv && cur >= lat.threshold_mv) {
        const double f = (lat.threshold_mv - prev) / (cur - prev);
        lat.lat_ms[i] = prev_time + f * (t - prev_time);
      }
    }
    prev_frame = state.v;
    prev_time = t;
    if (config.keep_history) {
      result.history.times_ms.push_back(t);
      result.history.frames.push_back(state.v);
    }
    if (config.progress) {
      double vmax = 0.0;
      for (double v : state.v) vmax = std::max(vmax, std::abs(v));
      std::fprintf(stderr, "t=%.9g max|u|=%.9g dt=%.9g\n", t, vmax, dt);
    }
  };
  record(0.0);

  TimeIntegrator integrator{dt, config.safety, 0.0, 0};
  std::vector<double> ku(cloud.size(), 0.0);
  double next_snapshot = config.snapshot_ms;
  const double tf = config.t_final_ms;
  const double ttol = 1e-12 * std::max(1.0, tf);
  while (integrator.t < tf - ttol) {
    const double t_next = double(integrator.step_count + 1) * dt;
    const bool final_step = t_next >= tf - ttol;
    const double dt_step = final_step ? tf - integrator.t : dt;

    // first-order splitting: reaction substeps covering dt_step, then one
    // diffusion step of dt_step
    const int substeps = std::max(1, int(std::ceil(dt_step / config.reaction_substep_ms)));
    const double dt_reaction = dt_step / substeps;
    for (int s = 0; s < substeps; ++s)
      reaction_step(state, model, dt_reaction, stim, integrator.t + s * dt_reaction);

    system.k_mod.multiply(state.v, ku, config.threads);
    bool bad = false;
    parallel_for(
        cloud.size(), config.threads,
        [&](std::size_t begin, std::size_t end) {
          bool local_bad = false;
          for (std::size_t i = begin; i < end; ++i) {
            state.v[i] -= dt_step * ku[i] / mass[i];
            local_bad |= !std::isfinite(state.v[i]);
          }
          if (local_bad) bad = true;
        },
        8192);
    ++integrator.step_count;
    integrator.t = final_step ? tf : t_next;
    if (bad)
      throw std::runtime_error("non-finite voltage at step " +
                               std::to_string(integrator.step_count));

    if (integrator.t >= next_snapshot - ttol || final_step) {
      record(integrator.t);
      while (next_snapshot <= integrator.t + ttol) next_snapshot += config.snapshot_ms;
    }
  }
  result.diffusion_steps = integrator.step_count;
  result.timings.march_s = watch.lap();

  result.lat = std::move(lat);
  result.cloud = std::move(cloud);
  result.timings.output_s = watch.lap();
  return result;
}

double wavefront_speed(const NodeCloud& cloud, const ActivationMap& lat, int axis, double lo,
                       double hi) {
  const double a = cloud.bounds.lo[axis], b = cloud.bounds.hi[axis];
  const double clo = a + lo * (b - a), chi = a + hi * (b - a);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const double c = cloud.positions[i][axis];
    if (c < clo || c > chi || !lat.activated(i)) continue;
    sx += c;
    sy += lat.lat_ms[i];
    sxx += c * c;
    sxy += c * lat.lat_ms[i];
    ++count;
  }
  if (count < 2) throw std::runtime_error("not enough activated nodes for a speed fit");
  const double n = double(count);
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  if (slope <= 0.0) throw std::runtime_error("wavefront does not advance along the axis");
  return 1.0 / slope;
}

}  // namespace rpimc
