#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "rpimc/benchmarks.hpp"

using namespace rpimc;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("analytic solutions at pinned points") {
  SUBCASE("2D case at (0.5, 0), t = 1") {
    const BenchmarkCase bench = make_case(CaseId::heat2d_dirichlet);
    CHECK(bench.analytic({0.5, 0.0, 0.0}, 1.0) ==
          doctest::Approx(0.367879441171442).epsilon(1e-12));
  }
  SUBCASE("insulated case approaches 1 as t grows") {
    const BenchmarkCase bench = make_case(CaseId::heat3d_insulated);
    CHECK(bench.analytic({1.1, 0.7, 2.0}, 100.0) == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("inhomogeneous case on the z = 0 face") {
    const BenchmarkCase bench = make_case(CaseId::heat3d_inhomogeneous);
    for (double t : {0.0, 0.4, 1.0}) {
      const double x = 0.8, y = 1.9;
      CHECK(bench.analytic({x, y, 0.0}, t) ==
            doctest::Approx(std::exp(-2.0 * t) * std::sin(x + y)).epsilon(1e-12));
    }
  }
  SUBCASE("unknown case name") { CHECK_THROWS(case_from_string("heat4d")); }
}

TEST_CASE("every analytic solution satisfies its PDE (finite differences)") {
  for (CaseId id : {CaseId::heat2d_dirichlet, CaseId::heat3d_insulated,
                    CaseId::heat3d_inhomogeneous}) {
    const BenchmarkCase bench = make_case(id);
    CHECK(pde_residual(bench, 42, 20) < 1e-6);
  }
}

TEST_CASE("boundary data matches the analytic solution on every face") {
  std::mt19937_64 rng(42);
  auto unit = [&rng] { return double(rng() >> 11) * 0x1.0p-53; };
  for (CaseId id : {CaseId::heat2d_dirichlet, CaseId::heat3d_insulated,
                    CaseId::heat3d_inhomogeneous}) {
    const BenchmarkCase bench = make_case(id);
    const int dim = bench.domain.dim;
    for (int face = 0; face < 2 * dim; ++face) {
      const int axis = face / 2;
      for (int sample = 0; sample < 10; ++sample) {
        Vec3 x;
        for (int k = 0; k < dim; ++k)
          x[k] = bench.domain.lo[k] + bench.domain.edge(k) * unit();
        x[axis] = face % 2 == 0 ? bench.domain.lo[axis] : bench.domain.hi[axis];
        const double t = unit();
        if (bench.bc_spec.tag[face] == BoundaryTag::dirichlet) {
          CHECK(std::abs(bench.problem.dirichlet_value(x, t) - bench.analytic(x, t)) < 1e-9);
        } else {
          // insulated faces: closed-form normal derivative vanishes
          const Vec3 grad = bench.analytic_gradient(x, t);
          CHECK(std::abs(grad[axis]) < 1e-9);
        }
      }
    }
  }
}

TEST_CASE("error metrics") {
  SUBCASE("exact solution gives zero") {
    const std::vector<double> u{0.5, -1.0, 2.0};
    const ErrorPair e = compute_errors(u, u);
    CHECK(e.e2 == 0.0);
    CHECK(e.nrms == 0.0);
  }
  SUBCASE("hand-computed E2, constant reference flags NRMS") {
    const std::vector<double> u_h{1.0, 2.0};
    const std::vector<double> u_an{1.0, 1.0};
    const ErrorPair e = compute_errors(u_h, u_an);
    CHECK(e.e2 == doctest::Approx(0.7071067811865476).epsilon(1e-15));
    CHECK_FALSE(e.nrms_defined);
  }
  SUBCASE("homogeneity: u_h = 2 u_an gives E2 = 1") {
    const std::vector<double> u_an{0.3, -0.7, 1.1, 0.25};
    std::vector<double> u_h(u_an);
    for (double& v : u_h) v *= 2.0;
    CHECK(compute_errors(u_h, u_an).e2 == doctest::Approx(1.0).epsilon(1e-15));
  }
}

TEST_CASE("convergence rate formula") {
  CHECK(convergence_rate(4e-2, 1e-2, 0.2, 0.1) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(convergence_rate(1.10e-2, 3.14e-3, 0.1, 0.05) ==
        doctest::Approx(1.80866705952).epsilon(1e-9));
  CHECK(convergence_rate(5e-3, 5e-3, 0.2, 0.1) == 0.0);
  CHECK_THROWS(convergence_rate(-1e-2, 1e-2, 0.2, 0.1));
  CHECK_THROWS(convergence_rate(1e-2, 1e-2, 0.1, 0.1));
}

TEST_CASE("single benchmark run reproduces the published error level") {
  const BenchmarkCase bench = make_case(CaseId::heat2d_dirichlet);
  RunParams params;
  params.threads = 2;
  const CaseResult result = run_case(bench, params);
  CHECK(result.cloud.size() == 121);
  CHECK(result.errors.e2 == doctest::Approx(1.10e-2).epsilon(0.30));
  CHECK(result.dt == doctest::Approx(0.9 * result.dt_s).epsilon(1e-12));

  // cross-identity between the two metrics, 1e-12
  double sum_an2 = 0.0, max_abs = 0.0, min_abs = 1e300;
  for (double v : result.u_exact) {
    sum_an2 += v * v;
    max_abs = std::max(max_abs, std::abs(v));
    min_abs = std::min(min_abs, std::abs(v));
  }
  const double lhs = result.errors.e2 * std::sqrt(sum_an2);
  const double rhs = result.errors.nrms * (max_abs - min_abs);
  CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
}

TEST_CASE("refinement ladder") {
  const BenchmarkCase bench = make_case(CaseId::heat2d_dirichlet);
  RunParams params;
  params.threads = 2;

  SUBCASE("spacings must decrease") {
    CHECK_THROWS(run_ladder(bench, params, {0.1, 0.1}));
    CHECK_THROWS(run_ladder(bench, params, {0.05, 0.1}));
    CHECK_THROWS(run_ladder(bench, params, {}));
  }
  SUBCASE("single rung has no rates") {
    const ConvergenceReport report = run_ladder(bench, params, {0.1});
    REQUIRE(report.rows.size() == 1);
    CHECK_FALSE(report.rows[0].rate_e2.has_value());
  }
  SUBCASE("three rungs: monotone errors, second-order band, CSV output") {
    const ConvergenceReport report = run_ladder(bench, params, {0.1, 0.05, 0.025});
    REQUIRE(report.rows.size() == 3);
    for (std::size_t i = 1; i < report.rows.size(); ++i) {
      CHECK(report.rows[i].errors.e2 < report.rows[i - 1].errors.e2);
      REQUIRE(report.rows[i].rate_e2.has_value());
      CHECK(*report.rows[i].rate_e2 >= 1.6);
      CHECK(*report.rows[i].rate_e2 <= 2.5);
    }

    std::stringstream csv;
    write_report_csv(report, csv);
    std::string line;
    std::getline(csv, line);
    CHECK(line == "benchmark,method,h,nodes,dt,E2,NRMS,rate_E2,rate_NRMS,wall_seconds");
    int rows = 0;
    while (std::getline(csv, line)) {
      ++rows;
      CHECK(line.find("heat2d_dirichlet,rpimc,") == 0);
    }
    CHECK(rows == 3);
  }
}

TEST_CASE("mass is conserved for the insulated problem") {
  const BenchmarkCase bench = make_case(CaseId::heat3d_insulated);
  RunParams params;
  params.h = kPi / 10.0;
  params.threads = 2;
  const CaseResult result = run_case(bench, params);

  double start = 0.0, end = 0.0;
  for (std::size_t i = 0; i < result.cloud.size(); ++i) {
    start += bench.problem.initial(result.cloud.positions[i], 0.0);
    end += result.u[i];
  }
  CHECK(std::abs(end - start) / std::abs(start) < 1e-6);  // per unit simulated time
}
