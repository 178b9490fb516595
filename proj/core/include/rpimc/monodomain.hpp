// Operator-split monodomain reaction-diffusion on a tissue slab: pluggable
// explicit ionic model, anisotropic diffusion through the mixed-collocation
// operator with zero-flux penalty, and activation-time extraction.
#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "rpimc/assembly.hpp"
#include "rpimc/benchmarks.hpp"
#include "rpimc/timing.hpp"

namespace rpimc {

struct FiberField {
  std::vector<Vec3> direction;  // unit vector per node
  double d0 = 0.001;            // longitudinal diffusion coefficient, cm^2/ms
  double rho_aniso = 0.25;      // transverse-to-longitudinal conductivity ratio

  static FiberField uniform(std::size_t nodes, const Vec3& f, double d0, double rho);
};

// D = d0 [(1 - rho) f f^T + rho I]; throws on a non-unit fiber vector.
Mat3 diffusion_tensor(const FiberField& fiber, std::size_t node);

// Explicit-update cell model. Voltages are physical (mV); gates live in
// model-declared bounds. step() adds stimulus as dV/dt in mV/ms.
class IonicModel {
 public:
  virtual ~IonicModel() = default;
  virtual int gate_count() const = 0;
  virtual std::string gate_name(int g) const = 0;
  virtual std::pair<double, double> gate_bounds(int g) const = 0;
  virtual double rest_voltage() const = 0;
  virtual double peak_voltage() const = 0;
  virtual void initialize(std::span<double> v, std::span<double> gates) const = 0;
  virtual void step(double dt, std::span<double> v, std::span<double> gates,
                    std::span<const double> stimulus) const = 0;
};

// Two-current phenomenological model: cubic excitation v^2 (1 - v) driven by
// a single recovery gate, mapped to V = -80 + 100 v mV. Rest is an exact
// equilibrium; action-potential duration is near 250 ms.
class TwoCurrentCellModel final : public IonicModel {
 public:
  struct Params {
    double tau_in = 0.4;
    double tau_out = 6.0;
    double tau_open = 120.0;
    double tau_close = 150.0;
    double v_gate = 0.13;
    double v_rest_mv = -80.0;
    double v_span_mv = 100.0;
  };

  TwoCurrentCellModel() = default;
  explicit TwoCurrentCellModel(const Params& p) : p_(p) {}

  int gate_count() const override { return 1; }
  std::string gate_name(int) const override { return "recovery"; }
  std::pair<double, double> gate_bounds(int) const override { return {0.0, 1.0}; }
  double rest_voltage() const override { return p_.v_rest_mv; }
  double peak_voltage() const override { return p_.v_rest_mv + p_.v_span_mv; }
  void initialize(std::span<double> v, std::span<double> gates) const override;
  void step(double dt, std::span<double> v, std::span<double> gates,
            std::span<const double> stimulus) const override;

  const Params& params() const { return p_; }

 private:
  Params p_;
};

struct IonicState {
  std::vector<double> v;      // transmembrane voltage per node, mV
  std::vector<double> gates;  // node-major, gate_count entries per node
  double capacitance = 1.0;   // per unit area
};

struct Stimulus {
  std::vector<std::uint32_t> nodes;
  double start_ms = 0.0;
  double duration_ms = 1.0;
  double amplitude = 0.0;  // dV/dt in mV/ms while active
};

// Advances reaction by dt_reaction; throws (naming node and gate) if a gate
// leaves its declared bounds.
void reaction_step(IonicState& state, const IonicModel& model, double dt_reaction,
                   const Stimulus& stimulus, double t_ms);

// Minimal 1 ms pulse amplitude that triggers an upstroke (V crossing 0 mV)
// in a single-cell run; bisection with the given iteration count.
double find_diastolic_threshold(const IonicModel& model, double pulse_ms = 1.0,
                                int iterations = 12, double window_ms = 50.0);

struct VoltageHistory {
  std::vector<double> times_ms;
  std::vector<std::vector<double>> frames;
};

struct ActivationMap {
  static constexpr double kUnactivated = -1.0;
  std::vector<double> lat_ms;
  double threshold_mv = 0.0;

  bool activated(std::size_t i) const { return lat_ms[i] >= 0.0; }
};

// First upward threshold crossing per node, linearly interpolated between
// snapshots; nodes that never cross are marked unactivated.
ActivationMap compute_lat(const VoltageHistory& history, double threshold_mv = 0.0);

enum class StimulusSite { bottom_face, x_min_face, center_node };

struct SlabConfig {
  Box box{{0, 0, 0}, {1, 1, 1}, 3};  // cm
  double h = 0.05;                   // cm
  Method method = Method::rpimc;
  double dilatation = 2.85;
  RpiParams rpi;
  PenaltyConfig penalty;
  double d0 = 0.001;
  double rho_aniso = 0.25;
  Vec3 fiber{0, 0, 1};
  double t_final_ms = 100.0;
  double snapshot_ms = 0.5;
  double reaction_substep_ms = 0.02;
  double safety = 0.9;
  StimulusSite stim_site = StimulusSite::bottom_face;
  double stim_duration_ms = 1.0;
  double stim_threshold_multiple = 2.0;
  int threads = 1;
  double jitter = 0.0;   // interior jitter amplitude as a fraction of h
  unsigned seed = 42;
  bool keep_history = false;
  bool progress = false;
};

struct SlabResult {
  NodeCloud cloud;
  ActivationMap lat;
  VoltageHistory history;  // filled when keep_history is set
  double dt_ms = 0.0;
  double diastolic_threshold = 0.0;
  std::int64_t diffusion_steps = 0;
  PhaseTimings timings;
};

SlabResult run_slab(const SlabConfig& config, const IonicModel& model);

// Least-squares slope of LAT against the coordinate along `axis`, restricted
// to nodes inside the fractional span [lo, hi] of the slab; returns the
// conduction velocity (coordinate units per ms).
double wavefront_speed(const NodeCloud& cloud, const ActivationMap& lat, int axis, double lo,
                       double hi);

}  // namespace rpimc
