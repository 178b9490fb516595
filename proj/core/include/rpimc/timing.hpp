#pragma once

#include <chrono>
#include <iosfwd>

namespace rpimc {

struct PhaseTimings {
  double basis_s = 0.0;
  double assembly_s = 0.0;
  double march_s = 0.0;
  double output_s = 0.0;

  double total() const { return basis_s + assembly_s + march_s + output_s; }
};

class StopWatch {
 public:
  StopWatch() : start_(std::chrono::steady_clock::now()) {}
  double lap() {
    const auto now = std::chrono::steady_clock::now();
    const double s = std::chrono::duration<double>(now - start_).count();
    start_ = now;
    return s;
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

// CSV rows "phase, seconds".
void write_timings_csv(const PhaseTimings& timings, std::ostream& out);

}  // namespace rpimc
