#include "rpimc/benchmarks.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numbers>
#include <ostream>
#include <random>
#include <stdexcept>

#include "rpimc/parallel.hpp"

namespace rpimc {

namespace {

constexpr double kPi = std::numbers::pi;

}  // namespace

std::string to_string(CaseId id) {
  switch (id) {
    case CaseId::heat2d_dirichlet: return "heat2d_dirichlet";
    case CaseId::heat3d_insulated: return "heat3d_insulated";
    case CaseId::heat3d_inhomogeneous: return "heat3d_inhomogeneous";
  }
  return "?";
}

std::string to_string(Method m) { return m == Method::rpimc ? "rpimc" : "mlpg_mc"; }

CaseId case_from_string(const std::string& name) {
  if (name == "heat2d_dirichlet") return CaseId::heat2d_dirichlet;
  if (name == "heat3d_insulated") return CaseId::heat3d_insulated;
  if (name == "heat3d_inhomogeneous") return CaseId::heat3d_inhomogeneous;
  throw std::invalid_argument("unknown benchmark case: " + name);
}

Method method_from_string(const std::string& name) {
  if (name == "rpimc") return Method::rpimc;
  if (name == "mlpg_mc") return Method::mlpg_mc;
  throw std::invalid_argument("unknown method: " + name);
}

BenchmarkCase make_case(CaseId id) {
  BenchmarkCase bench;
  bench.id = id;
  switch (id) {
    case CaseId::heat2d_dirichlet: {
      bench.domain = Box{{0, 0, 0}, {1, 1, 0}, 2};
      bench.analytic = [](const Vec3& x, double t) {
        return std::exp(-t) * std::sin(kPi * x.x) * std::cos(kPi * x.y);
      };
      bench.analytic_gradient = [](const Vec3& x, double t) -> Vec3 {
        const double e = std::exp(-t);
        return {e * kPi * std::cos(kPi * x.x) * std::cos(kPi * x.y),
                -e * kPi * std::sin(kPi * x.x) * std::sin(kPi * x.y), 0.0};
      };
      // u_t = lap(u) + (1+t^2) u + f; the source carries the e^{-t} factor
      // the analytic solution requires
      bench.problem.source = [](const Vec3& x, double t) {
        return (2.0 * kPi * kPi - t * t - 2.0) * std::exp(-t) * std::sin(kPi * x.x) *
               std::cos(kPi * x.y);
      };
      bench.problem.reaction_coeff = [](double t) { return 1.0 + t * t; };
      bench.bc_spec = FaceTags::all(BoundaryTag::dirichlet);
      bench.ladder = {0.1, 0.05, 0.025, 0.0125};
      bench.full_ladder = bench.ladder;
      break;
    }
    case CaseId::heat3d_insulated: {
      bench.domain = Box{{0, 0, 0}, {kPi, kPi, kPi}, 3};
      bench.analytic = [](const Vec3& x, double t) {
        return 1.0 +
               2.0 * std::exp(-3.0 * t) * std::cos(x.x) * std::cos(x.y) * std::cos(x.z) +
               3.0 * std::exp(-29.0 * t) * std::cos(2.0 * x.x) * std::cos(3.0 * x.y) *
                   std::cos(4.0 * x.z);
      };
      bench.analytic_gradient = [](const Vec3& x, double t) -> Vec3 {
        const double a = 2.0 * std::exp(-3.0 * t);
        const double b = 3.0 * std::exp(-29.0 * t);
        return {-a * std::sin(x.x) * std::cos(x.y) * std::cos(x.z) -
                    2.0 * b * std::sin(2.0 * x.x) * std::cos(3.0 * x.y) * std::cos(4.0 * x.z),
                -a * std::cos(x.x) * std::sin(x.y) * std::cos(x.z) -
                    3.0 * b * std::cos(2.0 * x.x) * std::sin(3.0 * x.y) * std::cos(4.0 * x.z),
                -a * std::cos(x.x) * std::cos(x.y) * std::sin(x.z) -
                    4.0 * b * std::cos(2.0 * x.x) * std::cos(3.0 * x.y) * std::sin(4.0 * x.z)};
      };
      bench.bc_spec = FaceTags::all(BoundaryTag::neumann);
      bench.ladder = {kPi / 10.0, kPi / 20.0, kPi / 30.0};
      bench.full_ladder = {kPi / 10.0, kPi / 20.0, kPi / 30.0, kPi / 40.0};
      break;
    }
    case CaseId::heat3d_inhomogeneous: {
      bench.domain = Box{{0, 0, 0}, {kPi, kPi, kPi}, 3};
      bench.analytic = [](const Vec3& x, double t) {
        return std::sin(x.z) + std::exp(-2.0 * t) * std::sin(x.x + x.y);
      };
      bench.analytic_gradient = [](const Vec3& x, double t) -> Vec3 {
        const double e = std::exp(-2.0 * t);
        return {e * std::cos(x.x + x.y), e * std::cos(x.x + x.y), std::cos(x.z)};
      };
      bench.problem.source = [](const Vec3& x, double) { return std::sin(x.z); };
      bench.bc_spec = FaceTags::all(BoundaryTag::dirichlet);
      bench.ladder = {kPi / 10.0, kPi / 20.0, kPi / 30.0};
      bench.full_ladder = {kPi / 10.0, kPi / 20.0, kPi / 30.0, kPi / 40.0};
      break;
    }
  }
  bench.problem.t_final = 1.0;
  bench.problem.c_rho = 1.0;
  bench.problem.conductivity.scalar = 1.0;
  bench.problem.initial = [analytic = bench.analytic](const Vec3& x, double) {
    return analytic(x, 0.0);
  };
  bench.problem.dirichlet_value = bench.analytic;
  return bench;
}

double pde_residual(const BenchmarkCase& bench, unsigned seed, int samples) {
  std::mt19937_64 rng(seed);
  auto unit = [&rng] { return double(rng() >> 11) * 0x1.0p-53; };
  const double dx = 1e-4, dt = 1e-5;
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    Vec3 x;
    for (int k = 0; k < bench.domain.dim; ++k) {
      const double lo = bench.domain.lo[k] + 2.0 * dx;
      const double hi = bench.domain.hi[k] - 2.0 * dx;
      x[k] = lo + (hi - lo) * unit();
    }
    const double t = 2.0 * dt + (1.0 - 4.0 * dt) * unit();

    const double u = bench.analytic(x, t);
    const double ut = (bench.analytic(x, t + dt) - bench.analytic(x, t - dt)) / (2.0 * dt);
    double lap = 0.0;
    for (int k = 0; k < bench.domain.dim; ++k) {
      Vec3 xp = x, xm = x;
      xp[k] += dx;
      xm[k] -= dx;
      lap += (bench.analytic(xp, t) - 2.0 * u + bench.analytic(xm, t)) / (dx * dx);
    }
    const double f = bench.problem.source ? bench.problem.source(x, t) : 0.0;
    const double r = bench.problem.reaction_coeff ? bench.problem.reaction_coeff(t) : 0.0;
    worst = std::max(worst, std::abs(ut - lap - r * u - f));
  }
  return worst;
}

ErrorPair compute_errors(std::span<const double> u_h, std::span<const double> u_an) {
  if (u_h.size() != u_an.size()) throw std::invalid_argument("state size mismatch");
  double sum_diff2 = 0.0, sum_an2 = 0.0;
  double max_abs = -std::numeric_limits<double>::infinity();
  double min_abs = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < u_h.size(); ++i) {
    const double d = u_h[i] - u_an[i];
    sum_diff2 += d * d;
    sum_an2 += u_an[i] * u_an[i];
    max_abs = std::max(max_abs, std::abs(u_an[i]));
    min_abs = std::min(min_abs, std::abs(u_an[i]));
  }
  ErrorPair errors;
  const double range = max_abs - min_abs;
  errors.e2_defined = sum_an2 > 0.0;
  errors.nrms_defined = range > 0.0;
  errors.e2 = errors.e2_defined ? std::sqrt(sum_diff2 / sum_an2) : 0.0;
  errors.nrms = errors.nrms_defined ? std::sqrt(sum_diff2) / range : 0.0;
  return errors;
}

double convergence_rate(double e_a, double e_b, double h_a, double h_b) {
  if (e_a <= 0.0 || e_b <= 0.0 || h_a <= 0.0 || h_b <= 0.0)
    throw std::invalid_argument("convergence rate needs positive errors and spacings");
  if (h_a == h_b) throw std::invalid_argument("spacings must differ");
  return std::log(e_a / e_b) / std::log(h_a / h_b);
}

CaseResult run_case(const BenchmarkCase& bench, const RunParams& params) {
  CaseResult result;
  StopWatch watch;

  NodeCloud cloud = tag_boundaries(generate_regular_grid(bench.domain, params.h),
                                   bench.bc_spec);

  std::vector<SupportDomain> supports =
      find_all_supports(cloud, params.dilatation, params.threads);
  RpiParams rpi = params.rpi;
  if (rpi.d_c <= 0.0) rpi.d_c = cloud.spacing;
  const BasisKind kind = params.method == Method::rpimc ? BasisKind::rpi : BasisKind::mls;
  BasisTable basis = build_basis_table(cloud, std::move(supports), kind, rpi, params.threads);
  result.timings.basis_s = watch.lap();

  std::vector<double> mass = assemble_lumped_mass(cloud, basis, bench.problem.c_rho);
  PenalizedSystem system;
  {
    SparseOperator k_a = assemble_flux_operator(cloud, basis, bench.problem.conductivity,
                                                params.threads);
    SparseOperator k_s = assemble_divergence_operator(cloud, basis, params.threads);
    system = apply_neumann_penalty(k_a, k_s, cloud, params.penalty, params.threads);
  }
  result.timings.assembly_s = watch.lap();

  std::vector<double> u(cloud.size());
  for (std::size_t i = 0; i < cloud.size(); ++i)
    u[i] = bench.problem.initial(cloud.positions[i], 0.0);
  const bool has_dirichlet =
      std::any_of(cloud.tags.begin(), cloud.tags.end(),
                  [](BoundaryTag t) { return t == BoundaryTag::dirichlet; });
  if (has_dirichlet) apply_dirichlet(u, cloud, bench.problem.dirichlet_value, 0.0);

  RhsFn rhs;
  const bool has_source = bool(bench.problem.source);
  const bool has_reaction = bool(bench.problem.reaction_coeff);
  const bool has_qbar = bool(bench.problem.neumann_value) && !system.neumann_nodes.empty();
  if (has_source || has_reaction || has_qbar) {
    rhs = [&, threads = params.threads](double t, std::span<const double> state,
                                        std::span<double> f) {
      const double r = has_reaction ? bench.problem.reaction_coeff(t) : 0.0;
      parallel_for(
          state.size(), threads,
          [&](std::size_t begin, std::size_t end) {
            for (std::size_t i = begin; i < end; ++i) {
              double v = r * state[i];
              if (has_source) v += bench.problem.source(cloud.positions[i], t);
              f[i] = v;
            }
          },
          4096);
      if (has_qbar) {
        const std::vector<double> corr =
            system.rhs_correction(cloud, bench.problem.neumann_value, t);
        for (std::size_t i = 0; i < f.size(); ++i) f[i] += corr[i];
      }
    };
  }
  BoundaryFn boundary;
  if (has_dirichlet) {
    boundary = [&](double t, std::vector<double>& state) {
      apply_dirichlet(state, cloud, bench.problem.dirichlet_value, t);
    };
  }

  MarchOptions options;
  options.t_final = bench.problem.t_final;
  options.safety = params.safety;
  options.threads = params.threads;
  const MarchResult marched = march(u, mass, system.k_mod, rhs, boundary, options);
  result.timings.march_s = watch.lap();

  result.u_exact.resize(cloud.size());
  for (std::size_t i = 0; i < cloud.size(); ++i)
    result.u_exact[i] = bench.analytic(cloud.positions[i], bench.problem.t_final);
  result.errors = compute_errors(u, result.u_exact);
  result.dt = marched.dt;
  result.dt_s = marched.bound.dt_s;
  result.steps = marched.steps;
  result.u = std::move(u);
  result.cloud = std::move(cloud);
  result.timings.output_s = watch.lap();
  return result;
}

ConvergenceReport run_ladder(const BenchmarkCase& bench, const RunParams& params,
                             const std::vector<double>& spacings) {
  if (spacings.empty()) throw std::invalid_argument("empty refinement ladder");
  for (std::size_t i = 1; i < spacings.size(); ++i)
    if (spacings[i] >= spacings[i - 1])
      throw std::invalid_argument("ladder spacings must be strictly decreasing");

  ConvergenceReport report;
  report.id = bench.id;
  report.method = params.method;
  for (double h : spacings) {
    StopWatch watch;
    RunParams rung = params;
    rung.h = h;
    const CaseResult r = run_case(bench, rung);
    LadderRow row;
    row.h = h;
    row.nodes = r.cloud.size();
    row.dt = r.dt;
    row.errors = r.errors;
    row.wall_seconds = watch.lap();
    if (!report.rows.empty()) {
      const LadderRow& prev = report.rows.back();
      row.rate_e2 = convergence_rate(prev.errors.e2, row.errors.e2, prev.h, row.h);
      if (prev.errors.nrms_defined && row.errors.nrms_defined)
        row.rate_nrms = convergence_rate(prev.errors.nrms, row.errors.nrms, prev.h, row.h);
    }
    report.rows.push_back(row);
  }
  return report;
}

void write_report_csv(const ConvergenceReport& report, std::ostream& out) {
  out << "benchmark,method,h,nodes,dt,E2,NRMS,rate_E2,rate_NRMS,wall_seconds\n";
  out << std::setprecision(10);
  for (const LadderRow& row : report.rows) {
    out << to_string(report.id) << ',' << to_string(report.method) << ',' << row.h << ','
        << row.nodes << ',' << row.dt << ',' << row.errors.e2 << ',';
    if (row.errors.nrms_defined) out << row.errors.nrms;
    out << ',';
    if (row.rate_e2) out << *row.rate_e2;
    out << ',';
    if (row.rate_nrms) out << *row.rate_nrms;
    out << ',' << row.wall_seconds << '\n';
  }
}

}  // namespace rpimc
