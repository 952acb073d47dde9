#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "memsosc/pierce.hpp"
#include "memsosc/transduction.hpp"

namespace memsosc {

/// Fixed-step transient settings. dt and duration are in seconds; use
/// `SimConfig::defaults_for` to get 200 steps per cycle and a run long
/// enough for the high-Q resonator to settle.
struct SimConfig {
  double dt = 0.0;
  double duration = 0.0;
  std::uint64_t noise_seed = 1;
  double initial_kick = 1e-9;      // [V] on the amplifier input
  double v_limit = 10e-6;          // [V] tanh saturation scale
  double r_feedback = 10e9;        // [ohm] gate-drain bias resistor
  double r_output = 1e9;           // [ohm] drain to ground
  std::size_t stride = 1;          // keep every n-th step in the trace

  static constexpr double kStepsPerCycle = 200.0;
  static constexpr double kDefaultCycles = 6000.0;
  static constexpr double kMinCycles = 50.0;

  static SimConfig defaults_for(double f0);

  /// dt <= 1/(200 f0) and duration >= 50/f0, resistors positive (inf allowed).
  void validate(double f0) const;
};

struct Trace {
  std::vector<double> time;
  std::vector<double> v_in;
  std::vector<double> v_out;
  std::vector<double> x;  // [m] motional charge / eta
  double dt = 0.0;        // spacing of the stored samples
  double v_limit = std::numeric_limits<double>::infinity();
  bool pulled_in = false;

  std::size_t size() const noexcept { return time.size(); }
};

struct LoopState {
  double v_in = 0.0;
  double v_out = 0.0;
  double current = 0.0;  // motional branch, input node -> output node
  double charge = 0.0;   // on C_x
};

/// Closed Pierce loop: series R_x L_x C_x between the amplifier input and
/// output, C1/C2 to ground, C0 and r_feedback bridging, drain current
/// gm v_limit tanh(v_in / v_limit) plus r_output to ground.
class LoopModel {
 public:
  LoopModel(const EquivalentCircuit& ec, const PierceCapacitors& caps, double gm,
            double v_limit, double r_feedback, double r_output);

  LoopState derivative(const LoopState& s) const;
  LoopState rk4_step(const LoopState& s, double dt) const;
  /// Energy in L_x, C_x, C1, C2 and C0 [J].
  double stored_energy(const LoopState& s) const;

 private:
  double r_, l_, c_;
  PierceCapacitors caps_;
  double gm_, v_limit_, g_feedback_, g_output_;
  double det_;
};

/// Integrates the loop from a seeded perturbation of the input node.
/// Stops early with `pulled_in` set once |x| reaches x_max. Throws
/// invalid_input for a bad SimConfig and numerical on a non-finite state.
Trace simulate_startup(const EquivalentCircuit& ec, const PierceConfig& cfg, const SimConfig& sim,
                       double eta, double x_max);

struct EnvelopePoint {
  double t = 0.0;
  double amplitude = 0.0;
};

/// Per-cycle peak |v| between upward zero crossings.
std::vector<EnvelopePoint> envelope(std::span<const double> time, std::span<const double> v);
/// Envelope of the amplifier output.
std::vector<EnvelopePoint> envelope(const Trace& trace);

/// Mean frequency over the last `cycles` full periods of v_out.
double measure_frequency(const Trace& trace, std::size_t cycles = 20);

/// Small-signal exponential growth rate [1/s] of the v_out envelope, fitted
/// on the portion below 0.1 v_limit. Throws no_growth when the envelope is
/// not growing there.
double growth_rate(const Trace& trace);

/// Mean envelope over the trailing `fraction` of the run.
double final_amplitude(const Trace& trace, double fraction = 0.05);

}  // namespace memsosc
