// Run configuration: defaults, key=value config files, echo for
// reproducibility. Flags override file values override defaults.
#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rpimc/benchmarks.hpp"

namespace rpimc {

struct RunConfig {
  std::string command;  // benchmark | ladder | monodomain | shape-debug
  std::string case_id = "heat2d_dirichlet";
  std::string method = "rpimc";
  std::optional<double> h;
  std::vector<double> ladder;      // explicit spacing ladder, empty = case default
  std::optional<double> dilatation;  // empty = per-command default
  double alpha_c = 1.5;
  double q_exp = 1.03;
  double penalty_alpha = 1e6;
  double safety = 0.9;
  double snapshot_interval = 0.0;
  std::string output_dir = ".";
  int threads = 1;
  bool full_ladder = false;
  unsigned seed = 42;
  // monodomain extras
  double slab_edge_cm = 1.0;
  double t_final_ms = 100.0;
  // shape-debug extras
  std::size_t debug_node = 0;

  double dilatation_or_default() const;
};

// One "key = value" per line, '#' starts a comment. Unknown keys throw.
RunConfig load_config_file(const std::string& path, RunConfig base = {});
void apply_config_line(RunConfig& config, const std::string& line, int line_number);

// Echo in the same format; load_config_file on the echo reproduces the
// config exactly.
void echo_config(const RunConfig& config, std::ostream& out);

bool operator==(const RunConfig& a, const RunConfig& b);

}  // namespace rpimc
