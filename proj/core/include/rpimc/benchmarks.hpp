// The three analytic heat-conduction benchmarks, error metrics and the
// refinement-ladder driver.
#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rpimc/assembly.hpp"
#include "rpimc/basis.hpp"
#include "rpimc/problem.hpp"
#include "rpimc/timestep.hpp"
#include "rpimc/timing.hpp"

namespace rpimc {

enum class CaseId { heat2d_dirichlet, heat3d_insulated, heat3d_inhomogeneous };
enum class Method { rpimc, mlpg_mc };

std::string to_string(CaseId id);
std::string to_string(Method m);
CaseId case_from_string(const std::string& name);
Method method_from_string(const std::string& name);

struct BenchmarkCase {
  CaseId id;
  Box domain;
  ScalarField analytic;
  std::function<Vec3(const Vec3&, double)> analytic_gradient;
  TransientProblem problem;  // bc values, source, reaction, initial, t_final
  FaceTags bc_spec;
  std::vector<double> ladder;       // default refinement spacings
  std::vector<double> full_ladder;  // including the finest (--full) rung
};

BenchmarkCase make_case(CaseId id);

// Central-difference residual of the analytic solution in the PDE at
// `samples` random space-time points; used at setup to validate the case.
double pde_residual(const BenchmarkCase& bench, unsigned seed, int samples = 20);

struct ErrorPair {
  double e2 = 0.0;
  double nrms = 0.0;
  bool e2_defined = true;
  bool nrms_defined = true;
};

// E2 = sqrt(sum(diff^2) / sum(u_an^2));
// NRMS = sqrt(sum(diff^2)) / (max|u_an| - min|u_an|).
// Zero denominators flag the metric as undefined instead of throwing.
ErrorPair compute_errors(std::span<const double> u_h, std::span<const double> u_an);

// log(E_a/E_b) / log(h_a/h_b); throws on non-positive inputs or h_a == h_b.
double convergence_rate(double e_a, double e_b, double h_a, double h_b);

struct RunParams {
  Method method = Method::rpimc;
  double h = 0.1;
  double dilatation = 1.5;
  RpiParams rpi;
  PenaltyConfig penalty;
  double safety = 0.9;
  int threads = 1;
  unsigned seed = 42;
};

struct CaseResult {
  NodeCloud cloud;
  std::vector<double> u;         // state at t_final
  std::vector<double> u_exact;   // analytic at t_final
  ErrorPair errors;
  double dt = 0.0;
  double dt_s = 0.0;
  std::int64_t steps = 0;
  PhaseTimings timings;
};

CaseResult run_case(const BenchmarkCase& bench, const RunParams& params);

struct LadderRow {
  double h = 0.0;
  std::size_t nodes = 0;
  double dt = 0.0;
  ErrorPair errors;
  std::optional<double> rate_e2;
  std::optional<double> rate_nrms;
  double wall_seconds = 0.0;
};

struct ConvergenceReport {
  CaseId id;
  Method method;
  std::vector<LadderRow> rows;
};

// Runs each spacing (strictly decreasing) and fills consecutive rates.
ConvergenceReport run_ladder(const BenchmarkCase& bench, const RunParams& params,
                             const std::vector<double>& spacings);

// CSV columns: benchmark, method, h, nodes, dt, E2, NRMS, rate_E2,
// rate_NRMS, wall_seconds.
void write_report_csv(const ConvergenceReport& report, std::ostream& out);

}  // namespace rpimc
