#include <doctest.h>

#include <random>

#include "memsosc/error.hpp"
#include "memsosc/simulate.hpp"
#include "oracles.hpp"

using namespace memsosc;

namespace {

// Design #1 motional branch and coupling (values from the transduction tests).
const EquivalentCircuit& design1() {
  static const EquivalentCircuit ec = extract_circuit(0.6048, 2.6592e-12, 4000, 2.102825e-8);
  return ec;
}
constexpr double kEta = 2.102825e-8;
constexpr double kXMax = 396e-9;
const PierceCapacitors kCaps{2e-12, 2e-12, 10e-15};

Trace synthetic(double f, double cycles, const std::function<double(double)>& amp) {
  Trace t;
  const double dt = 1.0 / (200 * f);
  const auto n = static_cast<std::size_t>(cycles * 200);
  for (std::size_t i = 0; i <= n; ++i) {
    const double time = static_cast<double>(i) * dt;
    t.time.push_back(time);
    const double v = amp(time) * std::sin(2 * oracle::kPi * f * time + 0.3);
    t.v_in.push_back(v);
    t.v_out.push_back(v);
    t.x.push_back(0.0);
  }
  t.dt = dt;
  return t;
}

SimConfig short_run(double cycles) {
  SimConfig s = SimConfig::defaults_for(design1().f0());
  s.duration = cycles / design1().f0();
  return s;
}

}  // namespace

TEST_SUITE("simulate") {
  TEST_CASE("envelope of a pure sinusoid") {
    const auto t = synthetic(75.9e3, 50, [](double) { return 2.5e-3; });
    const auto env = envelope(t);
    CHECK(env.size() >= 48);
    for (const auto& p : env) CHECK(p.amplitude == doctest::Approx(2.5e-3).epsilon(1e-3));
  }

  TEST_CASE("envelope of an exponentially growing sinusoid") {
    const double s = 4000.0;
    const auto t = synthetic(75.9e3, 200, [&](double x) { return 1e-6 * std::exp(s * x); });
    const auto env = envelope(t);
    const auto& a = env[5];
    const auto& b = env[env.size() - 5];
    const double slope = std::log(b.amplitude / a.amplitude) / (b.t - a.t);
    CHECK(slope == doctest::Approx(s).epsilon(0.02));
  }

  TEST_CASE("growth rate of a synthetic trace") {
    const auto t = synthetic(75.9e3, 300, [](double x) { return 1e-9 * std::exp(1000 * x); });
    CHECK(growth_rate(t) == doctest::Approx(1000).epsilon(0.02));
    const auto d = synthetic(75.9e3, 300, [](double x) { return 1e-3 * std::exp(-1000 * x); });
    try {
      growth_rate(d);
      FAIL("expected no_growth");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::no_growth);
    }
  }

  TEST_CASE("zero and DC signals") {
    const auto zero = synthetic(75.9e3, 20, [](double) { return 0.0; });
    try {
      envelope(zero);
      FAIL("expected insufficient data");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::insufficient_data);
    }
    Trace dc = zero;
    std::fill(dc.v_out.begin(), dc.v_out.end(), 0.5);
    CHECK_THROWS_AS(measure_frequency(dc), Error);
  }

  TEST_CASE("frequency of a synthetic sinusoid") {
    const auto t = synthetic(75.9e3, 60, [](double) { return 1.0; });
    CHECK(measure_frequency(t) == doctest::Approx(75.9e3).epsilon(1e-4));
  }

  TEST_CASE("configuration checks") {
    const double f0 = design1().f0();
    SimConfig s = SimConfig::defaults_for(f0);
    CHECK(s.dt == doctest::Approx(1.0 / (200 * f0)));
    CHECK(s.duration == doctest::Approx(6000 / f0));
    CHECK_NOTHROW(s.validate(f0));
    SimConfig coarse = s;
    coarse.dt *= 1.5;
    CHECK_THROWS_AS(coarse.validate(f0), Error);
    SimConfig brief = s;
    brief.duration = 10 / f0;
    CHECK_THROWS_AS(brief.validate(f0), Error);
    SimConfig open = s;
    open.r_feedback = std::numeric_limits<double>::infinity();
    CHECK_NOTHROW(open.validate(f0));
    CHECK_THROWS_AS(simulate_startup(design1(), {kCaps, -1e-6, f0}, s, kEta, kXMax), Error);
  }

  TEST_CASE("no gain: the passive network only loses energy") {
    const LoopModel model(design1(), kCaps, 0.0, 10e-6, 10e9, 1e9);
    LoopState s;
    s.v_in = 1e-6;
    const double dt = 1.0 / (200 * design1().f0());
    double e = model.stored_energy(s);
    for (int i = 0; i < 200 * 200; ++i) {
      s = model.rk4_step(s, dt);
      const double next = model.stored_energy(s);
      CHECK(next <= e * (1 + 1e-12));
      e = next;
    }
    const auto trace = simulate_startup(design1(), {kCaps, 0.0, design1().f0()}, short_run(400),
                                        kEta, kXMax);
    CHECK(std::abs(trace.v_in.back()) < std::abs(trace.v_in.front()));
  }

  TEST_CASE("lossless network conserves energy") {
    const auto ec = EquivalentCircuit::from_rlc(0.0, design1().inductance(), design1().capacitance());
    const double inf = std::numeric_limits<double>::infinity();
    const LoopModel model(ec, kCaps, 0.0, inf, inf, inf);
    LoopState s;
    s.current = 1e-9;
    const double e0 = model.stored_energy(s);
    const double dt = 1.0 / (200 * ec.f0());
    for (int i = 0; i < 200 * 100; ++i) s = model.rk4_step(s, dt);
    CHECK(std::abs(model.stored_energy(s) / e0 - 1) < 1e-3);
  }

  TEST_CASE("half the motional resistance decays") {
    const double f0 = design1().f0();
    const auto roots = required_gm(kCaps, f0, 0.5 * design1().resistance());
    REQUIRE(!roots.empty());
    const auto trace = simulate_startup(design1(), {kCaps, roots.front(), f0}, short_run(1500),
                                        kEta, kXMax);
    const auto env = envelope(trace);
    CHECK(env.back().amplitude < env[env.size() / 3].amplitude);
    CHECK_THROWS_AS(growth_rate(trace), Error);
  }

  TEST_CASE("seeded runs are reproducible") {
    const double f0 = design1().f0();
    const PierceConfig cfg{kCaps, 67.389e-6, f0};
    SimConfig s = short_run(300);
    const auto a = simulate_startup(design1(), cfg, s, kEta, kXMax);
    const auto b = simulate_startup(design1(), cfg, s, kEta, kXMax);
    CHECK(a.v_out == b.v_out);
    CHECK(a.x == b.x);
    s.noise_seed = 2;
    const auto c = simulate_startup(design1(), cfg, s, kEta, kXMax);
    CHECK(a.v_out != c.v_out);
  }

  TEST_CASE("stride keeps every n-th sample") {
    const double f0 = design1().f0();
    SimConfig s = short_run(100);
    const auto full = simulate_startup(design1(), {kCaps, 67.389e-6, f0}, s, kEta, kXMax);
    s.stride = 10;
    const auto thin = simulate_startup(design1(), {kCaps, 67.389e-6, f0}, s, kEta, kXMax);
    REQUIRE(thin.size() == full.size() / 10 + 1);
    for (std::size_t i = 0; i < thin.size(); ++i) CHECK(thin.v_out[i] == full.v_out[i * 10]);
  }

  TEST_CASE("a loose limiter drives the beam into pull-in") {
    // With a 0.1 V saturation scale the loop would settle near a millimetre
    // of motion, far beyond the allowed excursion.
    const double f0 = design1().f0();
    SimConfig s = SimConfig::defaults_for(f0);
    s.v_limit = 0.1;
    const auto t = simulate_startup(design1(), {kCaps, 67.389e-6, f0}, s, kEta, kXMax);
    CHECK(t.pulled_in);
    CHECK(std::abs(t.x.back()) >= kXMax);
  }
}
