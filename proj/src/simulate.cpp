#include "memsosc/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "memsosc/error.hpp"

namespace memsosc {

SimConfig SimConfig::defaults_for(double f0) {
  SimConfig s;
  s.dt = 1.0 / (kStepsPerCycle * f0);
  s.duration = kDefaultCycles / f0;
  return s;
}

void SimConfig::validate(double f0) const {
  const auto fail = [](const std::string& msg) { throw Error(ErrorKind::invalid_input, msg); };
  if (!(f0 > 0.0)) fail("simulation needs a positive resonance frequency");
  if (!(dt > 0.0) || dt > (1.0 + 1e-12) / (kStepsPerCycle * f0)) {
    std::ostringstream os;
    os << "dt = " << dt << " s exceeds 1/(200 f0) = " << 1.0 / (kStepsPerCycle * f0) << " s";
    fail(os.str());
  }
  if (!std::isfinite(duration) || duration < (1.0 - 1e-12) * kMinCycles / f0) {
    std::ostringstream os;
    os << "duration = " << duration << " s is shorter than 50 cycles";
    fail(os.str());
  }
  if (!(std::isfinite(initial_kick) && initial_kick >= 0.0)) fail("initial_kick must be >= 0");
  if (!(v_limit > 0.0)) fail("v_limit must be positive");
  if (!(r_feedback > 0.0)) fail("r_feedback must be positive");
  if (!(r_output > 0.0)) fail("r_output must be positive");
  if (stride == 0) fail("stride must be at least 1");
}

LoopModel::LoopModel(const EquivalentCircuit& ec, const PierceCapacitors& caps, double gm,
                     double v_limit, double r_feedback, double r_output)
    : r_(ec.resistance()),
      l_(ec.inductance()),
      c_(ec.capacitance()),
      caps_(caps),
      gm_(gm),
      v_limit_(v_limit),
      g_feedback_(1.0 / r_feedback),
      g_output_(1.0 / r_output),
      det_((caps.c1 + caps.c0) * (caps.c2 + caps.c0) - caps.c0 * caps.c0) {}

LoopState LoopModel::derivative(const LoopState& s) const {
  const double drain = std::isinf(v_limit_) ? gm_ * s.v_in
                                            : gm_ * v_limit_ * std::tanh(s.v_in / v_limit_);
  const double bridge = s.current + (s.v_in - s.v_out) * g_feedback_;
  // Node equations with C0 coupling:
  //   (C1+C0) v1' - C0 v2' = -bridge
  //   -C0 v1' + (C2+C0) v2' = bridge - drain - v2/r_out
  const double r1 = -bridge;
  const double r2 = bridge - drain - s.v_out * g_output_;
  LoopState d;
  d.v_in = ((caps_.c2 + caps_.c0) * r1 + caps_.c0 * r2) / det_;
  d.v_out = (caps_.c0 * r1 + (caps_.c1 + caps_.c0) * r2) / det_;
  d.current = (s.v_in - s.v_out - r_ * s.current - s.charge / c_) / l_;
  d.charge = s.current;
  return d;
}

namespace {

LoopState axpy(const LoopState& s, double h, const LoopState& d) {
  return {s.v_in + h * d.v_in, s.v_out + h * d.v_out, s.current + h * d.current,
          s.charge + h * d.charge};
}

bool finite(const LoopState& s) {
  return std::isfinite(s.v_in) && std::isfinite(s.v_out) && std::isfinite(s.current) &&
         std::isfinite(s.charge);
}

// Uniform in [-1, 1) from the raw 64-bit stream, independent of the standard
// library's distribution implementation.
double symmetric_unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-52 - 1.0;
}

}  // namespace

LoopState LoopModel::rk4_step(const LoopState& s, double dt) const {
  const LoopState k1 = derivative(s);
  const LoopState k2 = derivative(axpy(s, 0.5 * dt, k1));
  const LoopState k3 = derivative(axpy(s, 0.5 * dt, k2));
  const LoopState k4 = derivative(axpy(s, dt, k3));
  const double h = dt / 6.0;
  return {s.v_in + h * (k1.v_in + 2.0 * k2.v_in + 2.0 * k3.v_in + k4.v_in),
          s.v_out + h * (k1.v_out + 2.0 * k2.v_out + 2.0 * k3.v_out + k4.v_out),
          s.current + h * (k1.current + 2.0 * k2.current + 2.0 * k3.current + k4.current),
          s.charge + h * (k1.charge + 2.0 * k2.charge + 2.0 * k3.charge + k4.charge)};
}

double LoopModel::stored_energy(const LoopState& s) const {
  const double dv = s.v_in - s.v_out;
  return 0.5 * l_ * s.current * s.current + 0.5 * s.charge * s.charge / c_ +
         0.5 * caps_.c1 * s.v_in * s.v_in + 0.5 * caps_.c2 * s.v_out * s.v_out +
         0.5 * caps_.c0 * dv * dv;
}

Trace simulate_startup(const EquivalentCircuit& ec, const PierceConfig& cfg, const SimConfig& sim,
                       double eta, double x_max) {
  cfg.caps.validate();
  if (!(std::isfinite(cfg.gm) && cfg.gm >= 0.0)) {
    throw Error(ErrorKind::invalid_input, "gm must be finite and non-negative");
  }
  if (!(eta > 0.0) || !(x_max > 0.0)) {
    throw Error(ErrorKind::invalid_input, "simulation needs positive eta and x_max");
  }
  sim.validate(ec.f0());

  const LoopModel model(ec, cfg.caps, cfg.gm, sim.v_limit, sim.r_feedback, sim.r_output);
  std::mt19937_64 rng(sim.noise_seed);

  LoopState s;
  s.v_in = sim.initial_kick + sim.initial_kick * symmetric_unit(rng);

  const auto steps = static_cast<std::size_t>(std::llround(sim.duration / sim.dt));
  Trace trace;
  trace.dt = sim.dt * static_cast<double>(sim.stride);
  trace.v_limit = sim.v_limit;
  const std::size_t expected = steps / sim.stride + 2;
  trace.time.reserve(expected);
  trace.v_in.reserve(expected);
  trace.v_out.reserve(expected);
  trace.x.reserve(expected);

  const auto record = [&](std::size_t n, const LoopState& st) {
    trace.time.push_back(static_cast<double>(n) * sim.dt);
    trace.v_in.push_back(st.v_in);
    trace.v_out.push_back(st.v_out);
    trace.x.push_back(st.charge / eta);
  };
  record(0, s);

  for (std::size_t n = 1; n <= steps; ++n) {
    s = model.rk4_step(s, sim.dt);
    if (!finite(s)) {
      std::ostringstream os;
      os << "state became non-finite at step " << n << " (t = " << static_cast<double>(n) * sim.dt
         << " s)";
      throw Error(ErrorKind::numerical, os.str());
    }
    const bool pulled = std::abs(s.charge / eta) >= x_max;
    if (pulled || n % sim.stride == 0) record(n, s);
    if (pulled) {
      trace.pulled_in = true;
      break;
    }
  }
  return trace;
}

namespace {

// Indices i with v[i-1] < 0 <= v[i].
std::vector<std::size_t> upward_crossings(std::span<const double> v) {
  std::vector<std::size_t> out;
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i - 1] < 0.0 && v[i] >= 0.0) out.push_back(i);
  }
  return out;
}

double crossing_time(std::span<const double> t, std::span<const double> v, std::size_t i) {
  const double frac = -v[i - 1] / (v[i] - v[i - 1]);
  return t[i - 1] + frac * (t[i] - t[i - 1]);
}

}  // namespace

std::vector<EnvelopePoint> envelope(std::span<const double> time, std::span<const double> v) {
  if (time.size() != v.size()) {
    throw Error(ErrorKind::invalid_input, "time and signal lengths differ");
  }
  const auto crossings = upward_crossings(v);
  if (crossings.size() < 4) {
    throw Error(ErrorKind::insufficient_data, "fewer than 3 full cycles in signal");
  }
  std::vector<EnvelopePoint> out;
  out.reserve(crossings.size() - 1);
  for (std::size_t c = 0; c + 1 < crossings.size(); ++c) {
    const std::size_t a = crossings[c];
    const std::size_t b = crossings[c + 1];
    std::size_t k = a;
    for (std::size_t i = a; i < b; ++i) {
      if (std::abs(v[i]) > std::abs(v[k])) k = i;
    }
    double peak = std::abs(v[k]);
    double t_peak = time[k];
    if (k > 0 && k + 1 < v.size()) {
      // Parabolic refinement through the three samples around the maximum.
      const double y0 = std::abs(v[k - 1]);
      const double y1 = peak;
      const double y2 = std::abs(v[k + 1]);
      const double denom = y0 - 2.0 * y1 + y2;
      if (denom < 0.0) {
        const double p = 0.5 * (y0 - y2) / denom;
        peak = y1 - 0.25 * (y0 - y2) * p;
        t_peak = time[k] + p * (time[k + 1] - time[k]);
      }
    }
    out.push_back({t_peak, peak});
  }
  return out;
}

std::vector<EnvelopePoint> envelope(const Trace& trace) {
  if (trace.size() == 0) throw Error(ErrorKind::insufficient_data, "empty trace");
  return envelope(trace.time, trace.v_out);
}

double measure_frequency(const Trace& trace, std::size_t cycles) {
  if (cycles == 0) throw Error(ErrorKind::invalid_input, "frequency window must be non-empty");
  const auto crossings = upward_crossings(trace.v_out);
  if (crossings.size() < cycles + 1) {
    std::ostringstream os;
    os << "need " << cycles + 1 << " zero crossings, found " << crossings.size();
    throw Error(ErrorKind::insufficient_data, os.str());
  }
  const double t_end = crossing_time(trace.time, trace.v_out, crossings.back());
  const double t_start =
      crossing_time(trace.time, trace.v_out, crossings[crossings.size() - 1 - cycles]);
  return static_cast<double>(cycles) / (t_end - t_start);
}

double growth_rate(const Trace& trace) {
  std::vector<EnvelopePoint> env;
  try {
    env = envelope(trace);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::insufficient_data) throw;
    throw Error(ErrorKind::no_growth, std::string("no growing segment: ") + e.what());
  }
  const double threshold = 0.1 * trace.v_limit;
  std::size_t end = 0;
  while (end < env.size() && env[end].amplitude < threshold) ++end;
  // The first third of the small-signal run still carries the start-up
  // transient of the bias network.
  const std::size_t begin = end / 3;
  constexpr std::size_t kMinCycles = 10;
  if (end - begin < kMinCycles) {
    throw Error(ErrorKind::no_growth, "fewer than 10 small-signal cycles to fit");
  }
  const auto n = static_cast<double>(end - begin);
  double st = 0.0, sy = 0.0;
  for (std::size_t i = begin; i < end; ++i) {
    st += env[i].t;
    sy += std::log(env[i].amplitude);
  }
  const double mt = st / n, my = sy / n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = begin; i < end; ++i) {
    const double dt = env[i].t - mt;
    sxy += dt * (std::log(env[i].amplitude) - my);
    sxx += dt * dt;
  }
  const double slope = sxy / sxx;
  if (!(slope > 0.0)) {
    std::ostringstream os;
    os << "no growing segment: small-signal envelope slope is " << slope << " 1/s";
    throw Error(ErrorKind::no_growth, os.str());
  }
  return slope;
}

double final_amplitude(const Trace& trace, double fraction) {
  const auto env = envelope(trace);
  const double t_end = trace.time.back();
  const double t_from = t_end - fraction * (t_end - trace.time.front());
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& p : env) {
    if (p.t >= t_from) {
      sum += p.amplitude;
      ++n;
    }
  }
  if (n == 0) throw Error(ErrorKind::insufficient_data, "no cycles in the final window");
  return sum / static_cast<double>(n);
}

}  // namespace memsosc
