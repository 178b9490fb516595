// Acceptance suite: one pass/fail line per criterion, tolerances pinned in
// code. Exits nonzero if any criterion fails.
#include <Eigen/Dense>

#include <chrono>
#include <cmath>
#include <cstring>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "rpimc/assembly.hpp"
#include "rpimc/benchmarks.hpp"
#include "rpimc/io.hpp"
#include "rpimc/monodomain.hpp"
#include "rpimc/timestep.hpp"

using namespace rpimc;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kThreads = 8;

struct Check {
  bool pass = true;
  std::ostringstream details;

  void require(bool ok, const std::string& what) {
    pass &= ok;
    if (!ok) details << (details.str().empty() ? "" : "; ") << what;
  }
  void note(const std::string& what) {
    details << (details.str().empty() ? "" : "; ") << what;
  }
};

struct IdentitySample {
  std::string label;
  double e2, nrms, sum_an2, range;
};
std::vector<IdentitySample> g_identity_samples;

void collect_identity(const std::string& label, const CaseResult& result) {
  double sum_an2 = 0.0, max_abs = 0.0, min_abs = 1e300;
  for (double v : result.u_exact) {
    sum_an2 += v * v;
    max_abs = std::max(max_abs, std::abs(v));
    min_abs = std::min(min_abs, std::abs(v));
  }
  g_identity_samples.push_back(
      {label, result.errors.e2, result.errors.nrms, sum_an2, max_abs - min_abs});
}

struct Ladder {
  std::vector<double> spacings;
  std::vector<double> e2;
  std::vector<double> rates;
};

Ladder run_ladder_collect(CaseId id, Method method, const std::vector<double>& spacings,
                          double dilatation) {
  const BenchmarkCase bench = make_case(id);
  Ladder ladder;
  ladder.spacings = spacings;
  RunParams params;
  params.method = method;
  params.dilatation = dilatation;
  params.threads = kThreads;
  for (double h : spacings) {
    params.h = h;
    const CaseResult result = run_case(bench, params);
    collect_identity(to_string(id) + "/" + to_string(method) + "/h=" + std::to_string(h),
                     result);
    ladder.e2.push_back(result.errors.e2);
  }
  for (std::size_t i = 1; i < ladder.e2.size(); ++i)
    ladder.rates.push_back(
        convergence_rate(ladder.e2[i - 1], ladder.e2[i], spacings[i - 1], spacings[i]));
  return ladder;
}

std::string fmt(double v) {
  std::ostringstream ss;
  ss << std::setprecision(4) << v;
  return ss.str();
}

bool within_band(double value, double reference, double relative) {
  return value >= reference * (1.0 - relative) && value <= reference * (1.0 + relative);
}

// ---- criterion 1 -----------------------------------------------------

Check criterion1_basis_properties() {
  Check check;
  std::mt19937_64 rng(42);
  auto unit = [&rng] { return double(rng() >> 11) * 0x1.0p-53; };

  struct CloudSpec {
    Box box;
    double h;
    const char* name;
  };
  const CloudSpec specs[] = {
      {Box{{0, 0, 0}, {1, 1, 0}, 2}, 0.1, "2d/h=0.1"},
      {Box{{0, 0, 0}, {kPi, kPi, kPi}, 3}, kPi / 10.0, "3d/h=pi_10"},
  };

  for (const auto& spec : specs) {
    const NodeCloud cloud = generate_regular_grid(spec.box, spec.h);
    SupportSearch search(cloud, 1.5);
    RpiParams rpi;
    rpi.d_c = cloud.spacing;

    // Kronecker delta over every support
    double kron = 0.0;
    for (std::size_t center = 0; center < cloud.size(); ++center) {
      const SupportDomain support = search.find(center);
      for (std::size_t j = 0; j < support.neighbor_indices.size(); ++j) {
        const ShapeFunctionSet set =
            build_rpi(cloud.positions[support.neighbor_indices[j]], cloud, support, rpi);
        for (std::size_t i = 0; i < set.size(); ++i)
          kron = std::max(kron, std::abs(set.values[i] - (i == j ? 1.0 : 0.0)));
      }
    }
    check.require(kron < 1e-9,
                  std::string(spec.name) + " kronecker deviation " + fmt(kron));

    // partition of unity / linear completeness at 100 random points,
    // gradient-vs-FD at 50
    double pou = 0.0, lin = 0.0, grad_rel = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
      Vec3 x;
      for (int k = 0; k < cloud.dim; ++k)
        x[k] = spec.box.lo[k] + spec.box.edge(k) * (0.05 + 0.9 * unit());
      std::size_t nearest = 0;
      double best = 1e300;
      for (std::size_t i = 0; i < cloud.size(); ++i) {
        const double d = (cloud.positions[i] - x).norm();
        if (d < best) {
          best = d;
          nearest = i;
        }
      }
      const SupportDomain support = search.find(nearest);
      const ShapeFunctionSet set = build_rpi(x, cloud, support, rpi);
      double sum = 0.0;
      Vec3 xsum;
      for (std::size_t i = 0; i < set.size(); ++i) {
        sum += set.values[i];
        xsum += cloud.positions[support.neighbor_indices[i]] * set.values[i];
      }
      pou = std::max(pou, std::abs(sum - 1.0));
      for (int k = 0; k < cloud.dim; ++k) lin = std::max(lin, std::abs(xsum[k] - x[k]));

      if (trial < 50) {
        auto rebuild = [&](const Vec3& p) { return build_rpi(p, cloud, support, rpi); };
        const std::size_t li = std::size_t(trial) % set.size();
        const Vec3 fd =
            oracle::fd_gradient(rebuild, x, cloud.dim, li, 1e-6 * cloud.spacing);
        const double scale = std::max(1.0, set.gradients[li].norm());
        for (int k = 0; k < cloud.dim; ++k)
          grad_rel = std::max(grad_rel, std::abs(set.gradients[li][k] - fd[k]) / scale);
      }
    }
    check.require(pou < 1e-9, std::string(spec.name) + " partition-of-unity " + fmt(pou));
    check.require(lin < 1e-9, std::string(spec.name) + " linear completeness " + fmt(lin));
    check.require(grad_rel < 1e-5, std::string(spec.name) + " gradient-vs-fd " + fmt(grad_rel));
  }
  return check;
}

// ---- criteria 2-5: benchmark reproduction ----------------------------

Check criterion2_heat2d(const Ladder& ladder) {
  Check check;
  const std::vector<double> table{1.10e-2, 3.14e-3, 8.19e-4, 2.07e-4};
  const std::vector<double> table_rates{1.82, 1.94, 1.98};
  for (std::size_t i = 0; i < table.size(); ++i) {
    check.require(within_band(ladder.e2[i], table[i], 0.30),
                  "E2(h=" + fmt(ladder.spacings[i]) + ") = " + fmt(ladder.e2[i]) +
                      " vs " + fmt(table[i]) + " +-30%");
  }
  for (std::size_t i = 0; i < table_rates.size(); ++i) {
    check.require(std::abs(ladder.rates[i] - table_rates[i]) <= 0.15,
                  "rate" + std::to_string(i + 1) + " = " + fmt(ladder.rates[i]) + " vs " +
                      fmt(table_rates[i]) + " +-0.15");
  }
  check.note("E2 = {" + fmt(ladder.e2[0]) + ", " + fmt(ladder.e2[1]) + ", " +
             fmt(ladder.e2[2]) + ", " + fmt(ladder.e2[3]) + "}, rates = {" +
             fmt(ladder.rates[0]) + ", " + fmt(ladder.rates[1]) + ", " +
             fmt(ladder.rates[2]) + "}");
  return check;
}

Check criterion3_heat3d_insulated(const Ladder& ladder) {
  Check check;
  const std::vector<double> table{2.17e-3, 4.21e-4, 1.85e-4};
  for (std::size_t i = 0; i < table.size(); ++i) {
    check.require(within_band(ladder.e2[i], table[i], 0.30),
                  "E2(h=" + fmt(ladder.spacings[i]) + ") = " + fmt(ladder.e2[i]) +
                      " vs " + fmt(table[i]) + " +-30%");
  }
  check.require(ladder.rates[0] >= 2.0 && ladder.rates[0] <= 2.6,
                "rate after first refinement = " + fmt(ladder.rates[0]) +
                    " outside [2.0, 2.6]");
  check.note("E2 = {" + fmt(ladder.e2[0]) + ", " + fmt(ladder.e2[1]) + ", " +
             fmt(ladder.e2[2]) + "}, rates = {" + fmt(ladder.rates[0]) + ", " +
             fmt(ladder.rates[1]) + "}");
  return check;
}

Check criterion4_heat3d_inhomogeneous(const Ladder& ladder) {
  Check check;
  const std::vector<double> table{5.20e-3, 1.60e-3, 7.40e-4};
  const std::vector<double> table_rates{1.73, 1.88};
  for (std::size_t i = 0; i < table.size(); ++i) {
    check.require(within_band(ladder.e2[i], table[i], 0.30),
                  "E2(h=" + fmt(ladder.spacings[i]) + ") = " + fmt(ladder.e2[i]) +
                      " vs " + fmt(table[i]) + " +-30%");
  }
  for (std::size_t i = 0; i < table_rates.size(); ++i) {
    check.require(std::abs(ladder.rates[i] - table_rates[i]) <= 0.2,
                  "rate" + std::to_string(i + 1) + " = " + fmt(ladder.rates[i]) + " vs " +
                      fmt(table_rates[i]) + " +-0.2");
  }
  check.note("E2 = {" + fmt(ladder.e2[0]) + ", " + fmt(ladder.e2[1]) + ", " +
             fmt(ladder.e2[2]) + "}, rates = {" + fmt(ladder.rates[0]) + ", " +
             fmt(ladder.rates[1]) + "}");
  return check;
}

Check criterion5_mlpg_baseline(const Ladder& rpimc, const Ladder& mlpg) {
  Check check;
  const std::vector<double> table{2.90e-2, 7.37e-3, 1.87e-3, 4.73e-4};
  for (std::size_t i = 0; i < table.size(); ++i) {
    check.require(mlpg.e2[i] > rpimc.e2[i],
                  "ordering at h=" + fmt(mlpg.spacings[i]) + ": mlpg " + fmt(mlpg.e2[i]) +
                      " <= rpimc " + fmt(rpimc.e2[i]));
    const double ratio = mlpg.e2[i] / table[i];
    check.require(ratio <= 3.0 && ratio >= 1.0 / 3.0,
                  "mlpg E2(h=" + fmt(mlpg.spacings[i]) + ") = " + fmt(mlpg.e2[i]) +
                      " not within 3x of " + fmt(table[i]));
  }
  check.note("mlpg/rpimc E2 ratios = {" + fmt(mlpg.e2[0] / rpimc.e2[0]) + ", " +
             fmt(mlpg.e2[1] / rpimc.e2[1]) + ", " + fmt(mlpg.e2[2] / rpimc.e2[2]) + ", " +
             fmt(mlpg.e2[3] / rpimc.e2[3]) + "}");
  return check;
}

Check criterion6_identity() {
  Check check;
  double worst = 0.0;
  for (const IdentitySample& s : g_identity_samples) {
    const double lhs = s.e2 * std::sqrt(s.sum_an2);
    const double rhs = s.nrms * s.range;
    const double rel = std::abs(lhs - rhs) / std::max(lhs, rhs);
    worst = std::max(worst, rel);
    check.require(rel <= 1e-12, s.label + " identity mismatch " + fmt(rel));
  }
  check.note(std::to_string(g_identity_samples.size()) + " runs, worst relative gap " +
             fmt(worst));
  return check;
}

// ---- criterion 7: penalty sweep --------------------------------------

Check criterion7_penalty_sweep() {
  Check check;
  const BenchmarkCase bench = make_case(CaseId::heat3d_insulated);
  std::vector<double> residuals;
  for (double alpha : {1e4, 1e5, 1e6}) {
    RunParams params;
    params.h = kPi / 10.0;
    params.threads = kThreads;
    params.penalty.alpha = alpha;
    const CaseResult result = run_case(bench, params);

    // rebuild flux operator to evaluate the penalized normal flux at the
    // final state
    RpiParams rpi;
    rpi.d_c = result.cloud.spacing;
    const BasisTable basis = build_basis_table(
        result.cloud, find_all_supports(result.cloud, params.dilatation, kThreads),
        BasisKind::rpi, rpi, kThreads);
    Conductivity cond;
    const SparseOperator k_a = assemble_flux_operator(result.cloud, basis, cond, kThreads);
    std::vector<double> q(3 * result.cloud.size());
    k_a.multiply(result.u, q, kThreads);
    double residual = 0.0;
    const double shrink = alpha / (1.0 + alpha);
    for (std::size_t i = 0; i < result.cloud.size(); ++i) {
      if (result.cloud.tags[i] != BoundaryTag::neumann) continue;
      const Vec3 n = result.cloud.normals[i];
      const Vec3 flux{q[3 * i], q[3 * i + 1], q[3 * i + 2]};
      residual = std::max(residual, std::abs((1.0 - shrink) * n.dot(flux)));
    }
    residuals.push_back(residual);
  }
  check.require(residuals[1] < residuals[0],
                "residual(1e5) = " + fmt(residuals[1]) + " !< residual(1e4) = " +
                    fmt(residuals[0]));
  check.require(residuals[2] < residuals[1],
                "residual(1e6) = " + fmt(residuals[2]) + " !< residual(1e5) = " +
                    fmt(residuals[1]));
  check.note("residuals = {" + fmt(residuals[0]) + ", " + fmt(residuals[1]) + ", " +
             fmt(residuals[2]) + "}");
  return check;
}

// ---- criterion 8: Gerschgorin ----------------------------------------

Check criterion8_gerschgorin() {
  Check check;

  // dense-oracle row scan reproduces dt_s exactly on small lattices
  for (double h : {0.2, 1.0 / 9.0}) {
    FaceTags spec = FaceTags::all(BoundaryTag::dirichlet);
    spec.set(Face::xmax, BoundaryTag::neumann);
    const NodeCloud cloud =
        tag_boundaries(generate_regular_grid(Box{{0, 0, 0}, {1, 1, 0}, 2}, h), spec);
    RpiParams rpi;
    rpi.d_c = cloud.spacing;
    const BasisTable basis =
        build_basis_table(cloud, find_all_supports(cloud, 1.5), BasisKind::rpi, rpi);
    Conductivity cond;
    const SparseOperator k_a = assemble_flux_operator(cloud, basis, cond);
    const SparseOperator k_s = assemble_divergence_operator(cloud, basis);
    const PenalizedSystem pen = apply_neumann_penalty(k_a, k_s, cloud, PenaltyConfig{1e6});
    const std::vector<double> mass = assemble_lumped_mass(cloud, basis, 1.0);

    const Eigen::MatrixXd dense =
        oracle::dense_penalized(cloud, oracle::dense_flux(cloud, basis, cond),
                                oracle::dense_divergence(cloud, basis), 1e6);
    Eigen::VectorXd mass_e(Eigen::Index(cloud.size()));
    for (std::size_t i = 0; i < cloud.size(); ++i) mass_e(Eigen::Index(i)) = mass[i];

    const double sparse_dt = stable_timestep(mass, pen.k_mod).dt_s;
    const double dense_dt = oracle::dense_stable_timestep(dense, mass_e);
    check.require(sparse_dt == dense_dt, "h=" + fmt(h) + ": sparse " + fmt(sparse_dt) +
                                             " != dense " + fmt(dense_dt));
  }

  // no growth of the discrete deviation energy on the insulated problem
  const BenchmarkCase bench = make_case(CaseId::heat3d_insulated);
  NodeCloud cloud =
      tag_boundaries(generate_regular_grid(bench.domain, kPi / 10.0), bench.bc_spec);
  RpiParams rpi;
  rpi.d_c = cloud.spacing;
  const BasisTable basis = build_basis_table(
      cloud, find_all_supports(cloud, 1.5, kThreads), BasisKind::rpi, rpi, kThreads);
  Conductivity cond;
  const SparseOperator k_a = assemble_flux_operator(cloud, basis, cond, kThreads);
  const SparseOperator k_s = assemble_divergence_operator(cloud, basis, kThreads);
  const PenalizedSystem pen = apply_neumann_penalty(k_a, k_s, cloud, PenaltyConfig{1e6});
  const std::vector<double> mass = assemble_lumped_mass(cloud, basis, 1.0);

  std::vector<double> u(cloud.size());
  for (std::size_t i = 0; i < cloud.size(); ++i)
    u[i] = bench.problem.initial(cloud.positions[i], 0.0);

  std::vector<double> energies;
  MarchOptions options;
  options.t_final = 1.0;
  options.safety = 0.9;
  options.snapshot_interval = 0.02;
  options.threads = kThreads;
  options.on_snapshot = [&](double, std::span<const double> state) {
    double mean = 0.0, mass_sum = 0.0;
    for (std::size_t i = 0; i < state.size(); ++i) {
      mean += mass[i] * state[i];
      mass_sum += mass[i];
    }
    mean /= mass_sum;
    double energy = 0.0;
    for (std::size_t i = 0; i < state.size(); ++i)
      energy += mass[i] * (state[i] - mean) * (state[i] - mean);
    energies.push_back(energy);
  };
  march(u, mass, pen.k_mod, nullptr, nullptr, options);

  bool monotone = true;
  for (std::size_t i = 1; i < energies.size(); ++i)
    monotone &= energies[i] <= energies[i - 1] * (1.0 + 1e-12);
  check.require(monotone, "deviation energy grew during the insulated run");
  check.note("energy " + fmt(energies.front()) + " -> " + fmt(energies.back()) + " over " +
             std::to_string(energies.size()) + " snapshots");
  return check;
}

// ---- criterion 9: monodomain slab ------------------------------------

Check criterion9_monodomain() {
  Check check;
  const TwoCurrentCellModel model;

  SlabConfig config;
  config.box = Box{{0, 0, 0}, {1, 1, 1}, 3};
  config.h = 0.05;  // 0.5 mm
  config.t_final_ms = 100.0;
  config.snapshot_ms = 0.5;
  config.threads = kThreads;

  // longitudinal run (stimulate z = 0 face), twice for determinism
  const SlabResult long_a = run_slab(config, model);
  const SlabResult long_b = run_slab(config, model);

  std::ostringstream csv_a, csv_b;
  write_lat_csv(long_a.cloud, long_a.lat, csv_a);
  write_lat_csv(long_b.cloud, long_b.lat, csv_b);
  check.require(csv_a.str() == csv_b.str(), "repeated runs differ (LAT CSV not identical)");

  // strict monotonicity along the fiber axis, plane by plane
  std::map<double, std::pair<double, double>> planes;
  bool all_activated = true;
  for (std::size_t i = 0; i < long_a.cloud.size(); ++i) {
    all_activated &= long_a.lat.activated(i);
    const double z = long_a.cloud.positions[i].z;
    auto it = planes.find(z);
    if (it == planes.end()) {
      planes[z] = {long_a.lat.lat_ms[i], long_a.lat.lat_ms[i]};
    } else {
      it->second.first = std::min(it->second.first, long_a.lat.lat_ms[i]);
      it->second.second = std::max(it->second.second, long_a.lat.lat_ms[i]);
    }
  }
  check.require(all_activated, "some nodes never activated");
  bool monotone = true;
  double prev_max = -1.0;
  for (const auto& [z, span] : planes) {
    monotone &= span.first > prev_max;
    prev_max = span.second;
  }
  check.require(monotone, "LAT not strictly monotone along the fiber axis");

  // transverse run (stimulate x = 0 face)
  SlabConfig trans = config;
  trans.stim_site = StimulusSite::x_min_face;
  const SlabResult trans_run = run_slab(trans, model);
  const double cv_long = wavefront_speed(long_a.cloud, long_a.lat, 2, 0.25, 0.75);
  const double cv_trans = wavefront_speed(trans_run.cloud, trans_run.lat, 0, 0.25, 0.75);
  const double ratio = cv_trans / cv_long;
  check.require(std::abs(ratio - 0.5) <= 0.15 * 0.5,
                "velocity ratio " + fmt(ratio) + " outside 0.5 +-15%");
  check.note("cv_long = " + fmt(cv_long) + " cm/ms, cv_trans = " + fmt(cv_trans) +
             " cm/ms, ratio = " + fmt(ratio));

  // relative setup-timing ordering on a jittered slab (box supports on a
  // perfect lattice give identical neighbor sets for a_c = 2.1 and 2.5)
  auto setup_seconds = [&](Method method, double dilatation) {
    SlabConfig timing = config;
    timing.method = method;
    timing.dilatation = dilatation;
    timing.jitter = 0.25;
    timing.t_final_ms = 1.0;
    double best = 1e300;
    for (int rep = 0; rep < 2; ++rep) {
      const SlabResult r = run_slab(timing, model);
      best = std::min(best, r.timings.basis_s + r.timings.assembly_s);
    }
    return best;
  };
  const double rpimc_21 = setup_seconds(Method::rpimc, 2.1);
  const double rpimc_25 = setup_seconds(Method::rpimc, 2.5);
  const double mlpg_21 = setup_seconds(Method::mlpg_mc, 2.1);
  check.require(rpimc_25 > rpimc_21, "assembly(a_c=2.5) = " + fmt(rpimc_25) +
                                         " !> assembly(a_c=2.1) = " + fmt(rpimc_21));
  check.require(rpimc_21 > mlpg_21, "rpimc assembly = " + fmt(rpimc_21) +
                                        " !> mlpg assembly = " + fmt(mlpg_21));
  check.note("setup seconds: rpimc(2.1) = " + fmt(rpimc_21) + ", rpimc(2.5) = " +
             fmt(rpimc_25) + ", mlpg(2.1) = " + fmt(mlpg_21));
  return check;
}

// ---- criterion 10: dense-oracle equivalence --------------------------

Check criterion10_dense_equivalence() {
  Check check;

  auto compare = [&](const Box& box, double h, const char* name) {
    FaceTags spec = FaceTags::all(BoundaryTag::dirichlet);
    spec.set(Face::xmin, BoundaryTag::neumann);
    spec.set(Face::ymax, BoundaryTag::neumann);
    const NodeCloud cloud = tag_boundaries(generate_regular_grid(box, h), spec);
    RpiParams rpi;
    rpi.d_c = cloud.spacing;
    const BasisTable basis =
        build_basis_table(cloud, find_all_supports(cloud, 1.5), BasisKind::rpi, rpi);
    Conductivity cond;
    const SparseOperator k_a = assemble_flux_operator(cloud, basis, cond);
    const SparseOperator k_s = assemble_divergence_operator(cloud, basis);
    const PenalizedSystem pen = apply_neumann_penalty(k_a, k_s, cloud, PenaltyConfig{1e6});

    const Eigen::MatrixXd dense =
        oracle::dense_penalized(cloud, oracle::dense_flux(cloud, basis, cond),
                                oracle::dense_divergence(cloud, basis), 1e6);
    double worst = 0.0;
    for (std::size_t i = 0; i < pen.k_mod.rows(); ++i) {
      Eigen::VectorXd row = dense.row(Eigen::Index(i));
      const auto cols = pen.k_mod.row_cols(i);
      const auto vals = pen.k_mod.row_values(i);
      for (std::size_t p = 0; p < cols.size(); ++p) {
        worst = std::max(worst, std::abs(vals[p] - row(Eigen::Index(cols[p]))));
        row(Eigen::Index(cols[p])) = 0.0;
      }
      worst = std::max(worst, row.cwiseAbs().maxCoeff());
    }
    check.require(worst < 1e-12, std::string(name) + " max deviation " + fmt(worst));
    check.note(std::string(name) + " max entry gap " + fmt(worst));
  };

  compare(Box{{0, 0, 0}, {1, 1, 0}, 2}, 0.25, "5x5 2d");
  compare(Box{{0, 0, 0}, {1, 1, 1}, 3}, 1.0 / 3.0, "4x4x4 3d");
  return check;
}

struct Criterion {
  int id;
  std::string label;
  std::function<Check()> run;
  double budget_seconds = 0.0;  // 0: no runtime budget
};

}  // namespace

int main() {
  std::cout.setf(std::ios::unitbuf);

  // shared ladders (criteria 2, 5, 6 reuse them)
  Ladder heat2d_rpimc, heat2d_mlpg, heat3d_ins, heat3d_inh;

  const std::vector<Criterion> criteria = {
      {1, "basis property suite (Kronecker, reproduction, gradients)",
       criterion1_basis_properties, 10.0},
      {2, "benchmark 2D lateral heat loss, RPIMC E2 ladder and rates",
       [&] {
         heat2d_rpimc = run_ladder_collect(CaseId::heat2d_dirichlet, Method::rpimc,
                                           {0.1, 0.05, 0.025, 0.0125}, 1.5);
         return criterion2_heat2d(heat2d_rpimc);
       },
       300.0},
      {3, "benchmark 3D insulated borders, RPIMC E2 ladder and first rate",
       [&] {
         heat3d_ins = run_ladder_collect(CaseId::heat3d_insulated, Method::rpimc,
                                         {kPi / 10.0, kPi / 20.0, kPi / 30.0}, 1.5);
         return criterion3_heat3d_insulated(heat3d_ins);
       },
       900.0},
      {4, "benchmark 3D inhomogeneous, RPIMC E2 ladder and rates",
       [&] {
         heat3d_inh = run_ladder_collect(CaseId::heat3d_inhomogeneous, Method::rpimc,
                                         {kPi / 10.0, kPi / 20.0, kPi / 30.0}, 1.5);
         return criterion4_heat3d_inhomogeneous(heat3d_inh);
       },
       0.0},
      {5, "MLPG-MC baseline ordering and 3x band on the 2D benchmark",
       [&] {
         heat2d_mlpg = run_ladder_collect(CaseId::heat2d_dirichlet, Method::mlpg_mc,
                                          {0.1, 0.05, 0.025, 0.0125}, 1.5);
         return criterion5_mlpg_baseline(heat2d_rpimc, heat2d_mlpg);
       },
       0.0},
      {6, "NRMS/E2 cross-identity on every benchmark run", criterion6_identity, 0.0},
      {7, "penalty sweep: neumann flux residual decreases with alpha",
       criterion7_penalty_sweep, 0.0},
      {8, "Gerschgorin bound: dense-oracle match and non-growing energy",
       criterion8_gerschgorin, 0.0},
      {9, "monodomain slab: monotone LAT, velocity ratio, determinism, timing trends",
       criterion9_monodomain, 0.0},
      {10, "sparse K' equals dense brute-force assembly on mixed-tag lattices",
       criterion10_dense_equivalence, 0.0},
  };

  int failures = 0;
  for (const Criterion& criterion : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Check check;
    try {
      check = criterion.run();
    } catch (const std::exception& e) {
      check.pass = false;
      check.note(std::string("exception: ") + e.what());
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (criterion.budget_seconds > 0.0 && seconds > criterion.budget_seconds) {
      check.pass = false;
      check.note("runtime " + fmt(seconds) + " s exceeded budget " +
                 fmt(criterion.budget_seconds) + " s");
    }
    failures += check.pass ? 0 : 1;
    std::cout << (check.pass ? "[PASS]" : "[FAIL]") << " criterion " << criterion.id << ": "
              << criterion.label << " (" << fmt(seconds) << " s)";
    if (!check.details.str().empty()) std::cout << " -- " << check.details.str();
    std::cout << "\n";
  }
  std::cout << (failures == 0 ? "ACCEPTANCE PASSED" : "ACCEPTANCE FAILED") << " ("
            << (criteria.size() - std::size_t(failures)) << "/" << criteria.size()
            << " criteria)\n";
  return failures == 0 ? 0 : 1;
}
