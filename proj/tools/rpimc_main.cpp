// Command line front end: benchmark and ladder runs, the monodomain slab,
// and a shape-function dump for debugging.
#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <string>

#include "rpimc/benchmarks.hpp"
#include "rpimc/config.hpp"
#include "rpimc/io.hpp"
#include "rpimc/monodomain.hpp"

namespace fs = std::filesystem;
using namespace rpimc;

namespace {

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

void write_common_outputs(const RunConfig& config, const PhaseTimings& timings) {
  const fs::path dir(config.output_dir);
  fs::create_directories(dir);
  auto echo = open_output(dir / "config_echo.txt");
  echo_config(config, echo);
  auto times = open_output(dir / "timings.csv");
  write_timings_csv(timings, times);
}

RunParams params_from_config(const RunConfig& config) {
  RunParams params;
  params.method = method_from_string(config.method);
  params.dilatation = config.dilatation_or_default();
  params.rpi.alpha_c = config.alpha_c;
  params.rpi.q_exp = config.q_exp;
  params.penalty.alpha = config.penalty_alpha;
  params.safety = config.safety;
  params.threads = config.threads;
  params.seed = config.seed;
  return params;
}

void warn_penalty(const RunConfig& config) {
  PenaltyConfig penalty{config.penalty_alpha};
  if (!penalty.in_recommended_band())
    std::cerr << "warning: penalty alpha " << config.penalty_alpha
              << " is outside the recommended band [1e4, 1e7]\n";
}

int cmd_benchmark(const RunConfig& config) {
  warn_penalty(config);
  const BenchmarkCase bench = make_case(case_from_string(config.case_id));
  RunParams params = params_from_config(config);
  params.h = config.h.value_or(bench.ladder.front());

  const CaseResult result = run_case(bench, params);
  ConvergenceReport report;
  report.id = bench.id;
  report.method = params.method;
  LadderRow row;
  row.h = params.h;
  row.nodes = result.cloud.size();
  row.dt = result.dt;
  row.errors = result.errors;
  row.wall_seconds = result.timings.total();
  report.rows.push_back(row);

  const fs::path dir(config.output_dir);
  fs::create_directories(dir);
  auto csv = open_output(dir / "report.csv");
  write_report_csv(report, csv);
  auto vtk = open_output(dir / "solution.vtk");
  write_vtk_points(result.cloud, result.u, "u", vtk);
  write_common_outputs(config, result.timings);

  std::cout << to_string(bench.id) << " " << to_string(params.method) << " h=" << params.h
            << " nodes=" << result.cloud.size() << " dt=" << result.dt
            << " E2=" << result.errors.e2 << " NRMS=" << result.errors.nrms << "\n";
  return 0;
}

int cmd_ladder(const RunConfig& config) {
  warn_penalty(config);
  const BenchmarkCase bench = make_case(case_from_string(config.case_id));
  RunParams params = params_from_config(config);
  const std::vector<double>& spacings =
      !config.ladder.empty() ? config.ladder
                             : (config.full_ladder ? bench.full_ladder : bench.ladder);

  PhaseTimings totals;
  ConvergenceReport report = run_ladder(bench, params, spacings);
  for (const LadderRow& row : report.rows) totals.march_s += row.wall_seconds;

  const fs::path dir(config.output_dir);
  fs::create_directories(dir);
  auto csv = open_output(dir / "report.csv");
  write_report_csv(report, csv);
  write_common_outputs(config, totals);
  write_report_csv(report, std::cout);
  return 0;
}

int cmd_monodomain(const RunConfig& config) {
  warn_penalty(config);
  SlabConfig slab;
  slab.box = Box{{0, 0, 0},
                 {config.slab_edge_cm, config.slab_edge_cm, config.slab_edge_cm},
                 3};
  slab.h = config.h.value_or(0.05);
  slab.method = method_from_string(config.method);
  slab.dilatation = config.dilatation_or_default();
  slab.rpi.alpha_c = config.alpha_c;
  slab.rpi.q_exp = config.q_exp;
  slab.penalty.alpha = config.penalty_alpha;
  slab.safety = config.safety;
  slab.snapshot_ms = config.snapshot_interval > 0.0 ? config.snapshot_interval : 0.5;
  slab.t_final_ms = config.t_final_ms;
  slab.threads = config.threads;
  slab.seed = config.seed;
  slab.progress = true;

  TwoCurrentCellModel model;
  const SlabResult result = run_slab(slab, model);

  const fs::path dir(config.output_dir);
  fs::create_directories(dir);
  auto csv = open_output(dir / "lat.csv");
  write_lat_csv(result.cloud, result.lat, csv);
  auto vtk = open_output(dir / "lat.vtk");
  write_vtk_points(result.cloud, result.lat.lat_ms, "lat_ms", vtk);
  write_common_outputs(config, result.timings);

  std::cout << "slab nodes=" << result.cloud.size() << " dt=" << result.dt_ms
            << "ms steps=" << result.diffusion_steps
            << " threshold=" << result.diastolic_threshold << "\n";
  return 0;
}

int cmd_shape_debug(const RunConfig& config) {
  const BenchmarkCase bench = make_case(case_from_string(config.case_id));
  const double h = config.h.value_or(bench.ladder.front());
  NodeCloud cloud = tag_boundaries(generate_regular_grid(bench.domain, h), bench.bc_spec);
  if (config.debug_node >= cloud.size())
    throw std::runtime_error("node index out of range (cloud has " +
                             std::to_string(cloud.size()) + " nodes)");

  SupportSearch search(cloud, config.dilatation_or_default());
  const SupportDomain support = search.find(config.debug_node);
  RpiParams rpi{config.alpha_c, cloud.spacing, config.q_exp};
  ShapeFunctionSet set;
  if (method_from_string(config.method) == Method::rpimc) {
    set = build_rpi(cloud.positions[config.debug_node], cloud, support, rpi);
  } else {
    MlsParams mls;
    mls.support_radius = default_mls_radius(cloud, config.dilatation_or_default());
    set = build_mls(cloud.positions[config.debug_node], cloud, support, mls);
  }

  const fs::path dir(config.output_dir);
  fs::create_directories(dir);
  auto csv = open_output(dir / "shape.csv");
  csv << std::setprecision(std::numeric_limits<double>::max_digits10);
  csv << "local_index,node,x,y,z,phi,dphi_x,dphi_y,dphi_z\n";
  for (std::size_t li = 0; li < set.size(); ++li) {
    const std::uint32_t gi = support.neighbor_indices[li];
    const Vec3& p = cloud.positions[gi];
    csv << li << ',' << gi << ',' << p.x << ',' << p.y << ',' << p.z << ',' << set.values[li]
        << ',' << set.gradients[li].x << ',' << set.gradients[li].y << ','
        << set.gradients[li].z << '\n';
  }
  PhaseTimings timings;
  write_common_outputs(config, timings);
  std::cout << "wrote " << (dir / "shape.csv").string() << " (" << set.size() << " nodes)\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"meshfree mixed-collocation transient diffusion solver"};
  app.require_subcommand(1);
  app.set_help_flag("--help", "print help");  // frees -h / --h for the spacing flag

  // flags override config-file values override defaults
  std::string config_path;
  RunConfig config;
  for (int i = 1; i + 1 < argc; ++i)
    if (std::string(argv[i]) == "--config") config_path = argv[i + 1];
  try {
    if (!config_path.empty()) config = load_config_file(config_path, config);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  app.add_option("--config", config_path, "key = value configuration file");

  double h_value = 0.0;
  std::string ladder_text;
  double dilatation_value = 0.0;

  auto add_common = [&](CLI::App* cmd) {
    cmd->set_help_flag("--help", "print help");
    cmd->add_option("--method", config.method, "rpimc or mlpg_mc");
    auto* ac = cmd->add_option("--a-c", dilatation_value, "support dilatation coefficient");
    ac->each([&config](const std::string& s) { config.dilatation = std::stod(s); });
    cmd->add_option("--alpha-c", config.alpha_c, "RPI shape constant");
    cmd->add_option("--q-exp", config.q_exp, "multiquadric exponent");
    cmd->add_option("--alpha", config.penalty_alpha, "Neumann penalty factor");
    cmd->add_option("--safety", config.safety, "timestep safety factor");
    cmd->add_option("--snapshot-interval", config.snapshot_interval, "snapshot spacing");
    cmd->add_option("-o,--output", config.output_dir, "output directory");
    cmd->add_option("--threads", config.threads, "worker thread cap");
    cmd->add_option("--seed", config.seed, "seed for sampled checks");
    return cmd;
  };
  auto add_h = [&](CLI::App* cmd) {
    auto* opt = cmd->add_option("--h", h_value, "nodal spacing");
    opt->each([&config](const std::string& s) { config.h = std::stod(s); });
    return opt;
  };

  CLI::App* benchmark = add_common(app.add_subcommand("benchmark", "run one benchmark case"));
  benchmark->add_option("--case", config.case_id, "benchmark case id");
  add_h(benchmark);

  CLI::App* ladder = add_common(app.add_subcommand("ladder", "run a refinement ladder"));
  ladder->add_option("--case", config.case_id, "benchmark case id");
  auto* h_opt = add_h(ladder);
  auto* ladder_opt =
      ladder->add_option("--ladder", ladder_text, "colon-separated spacings, coarse to fine");
  ladder_opt->excludes(h_opt);
  h_opt->excludes(ladder_opt);
  ladder->add_flag("--full", config.full_ladder, "include the finest published rung");

  CLI::App* monodomain = add_common(app.add_subcommand("monodomain", "run the tissue slab"));
  add_h(monodomain);
  monodomain->add_option("--slab-edge", config.slab_edge_cm, "slab edge length, cm");
  monodomain->add_option("--t-final-ms", config.t_final_ms, "simulated time, ms");

  CLI::App* shape = add_common(app.add_subcommand("shape-debug", "dump phi and grad(phi)"));
  shape->add_option("--case", config.case_id, "benchmark case id (for the cloud)");
  add_h(shape);
  shape->add_option("--node", config.debug_node, "node index to inspect");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  if (!ladder_text.empty()) {
    config.ladder.clear();
    std::stringstream ss(ladder_text);
    std::string item;
    while (std::getline(ss, item, ':'))
      if (!item.empty()) config.ladder.push_back(std::stod(item));
  }

  try {
    if (benchmark->parsed()) {
      config.command = "benchmark";
      return cmd_benchmark(config);
    }
    if (ladder->parsed()) {
      config.command = "ladder";
      return cmd_ladder(config);
    }
    if (monodomain->parsed()) {
      config.command = "monodomain";
      return cmd_monodomain(config);
    }
    if (shape->parsed()) {
      config.command = "shape-debug";
      return cmd_shape_debug(config);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
