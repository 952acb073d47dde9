#include <doctest.h>

#include <random>

#include "memsosc/error.hpp"
#include "memsosc/mechanics.hpp"
#include "memsosc/transduction.hpp"
#include "oracles.hpp"

using namespace memsosc;

namespace {

Transducer transducer_of(const oracle::TableColumn& c, double bias = 9.5,
                         Port port = Port::one_port) {
  return {oracle::kGap, c.electrode, oracle::kStack, bias, port};
}

double mass_of(const oracle::TableColumn& c) {
  return 2770.0 * oracle::kStack * c.width * c.length;
}

EquivalentCircuit circuit_of(int i) {
  const auto& c = oracle::kTable[i];
  const double q[3] = {4000, 4500, 5000};
  return extract_circuit(oracle::stiffness(c), mass_of(c), q[i],
                         coupling_coefficient(transducer_of(c)));
}

}  // namespace

TEST_SUITE("transduction") {
  TEST_CASE("coupling coefficient against sqrt(k C_x)") {
    for (int i : {0, 2}) {
      const auto& c = oracle::kTable[i];
      const double eta = coupling_coefficient(transducer_of(c));
      CHECK(oracle::rel(eta, std::sqrt(oracle::stiffness(c) * c.cx)) < 0.002);
    }
    CHECK(coupling_coefficient(transducer_of(oracle::kTable[0])) ==
          doctest::Approx(2.102825e-8).epsilon(1e-6));
    CHECK(coupling_coefficient(transducer_of(oracle::kTable[2])) ==
          doctest::Approx(2.24301e-8).epsilon(1e-5));
    CHECK(coupling_coefficient(transducer_of(oracle::kTable[0], 0.0)) == 0.0);
  }

  TEST_CASE("bias back-solved from the table") {
    // V_P = sqrt(k C_x) g^2 / (eps0 A): frozen at 9.4998 V for all designs.
    for (const auto& c : oracle::kTable) {
      const double vp = std::sqrt(oracle::stiffness(c) * c.cx) * oracle::kGap * oracle::kGap /
                        (oracle::kEps0 * c.electrode * oracle::kStack);
      CHECK(oracle::rel(vp, 9.5) < 0.002);
    }
  }

  TEST_CASE("electrode capacitance") {
    auto t = transducer_of(oracle::kTable[0]);
    const double c = electrode_capacitance(t);
    CHECK(c == doctest::Approx(2.6562e-15).epsilon(1e-4));
    t.gap *= 2;
    CHECK(electrode_capacitance(t) == doctest::Approx(c / 2));
    t.electrode_length = 1e-12;
    CHECK(electrode_capacitance(t) < 1e-21);
  }

  TEST_CASE("displacement limit") {
    CHECK(displacement_limit(transducer_of(oracle::kTable[0])) == doctest::Approx(396e-9));
    CHECK(displacement_limit(transducer_of(oracle::kTable[0], 9.5, Port::two_port)) ==
          doctest::Approx(132e-9));
    Transducer bad = transducer_of(oracle::kTable[0]);
    bad.gap = 0.0;
    CHECK_THROWS_AS(bad.validate(), Error);
  }

  TEST_CASE("motional resistance") {
    const double eta = coupling_coefficient(transducer_of(oracle::kTable[0]));
    const double k = oracle::stiffness(oracle::kTable[0]);
    const double f0 = resonant_frequency(k, mass_of(oracle::kTable[0]));
    const double rx = motional_resistance(k, f0, 4000, eta);
    CHECK(oracle::rel(rx, 717.0e3) < 0.01);
    CHECK(motional_resistance(k, f0, 8000, eta) == doctest::Approx(rx / 2));
    CHECK(oracle::rel(circuit_of(1).resistance(), 737.6e3) < 0.01);
  }

  TEST_CASE("quality factor back-solved from the table") {
    // Q = w0 L_x / R_x: frozen at 3999.85, 4499.5, 4999.8.
    const double q[3] = {4000, 4500, 5000};
    for (int i = 0; i < 3; ++i) {
      const auto& c = oracle::kTable[i];
      CHECK(oracle::rel(2 * oracle::kPi * c.f0 * c.lx / c.rx, q[i]) < 0.001);
    }
  }

  TEST_CASE("extracted circuits") {
    for (int i = 0; i < 3; ++i) {
      const auto ec = circuit_of(i);
      const auto& c = oracle::kTable[i];
      CHECK(oracle::rel(ec.resistance(), c.rx) < 0.01);
      CHECK(oracle::rel(ec.inductance(), c.lx) < 0.01);
      CHECK(oracle::rel(ec.capacitance(), c.cx) < 0.01);
    }
    const auto ec1 = circuit_of(0);
    CHECK(ec1.resistance() == doctest::Approx(716993).epsilon(1e-5));
    CHECK(ec1.inductance() == doctest::Approx(6013.74).epsilon(1e-5));
    CHECK(ec1.capacitance() == doctest::Approx(731.13e-18).epsilon(1e-5));
  }

  TEST_CASE("coupling scaling laws") {
    const double k = 0.6048, m = 2.6592e-12, eta = 2.1e-8;
    const auto a = extract_circuit(k, m, 4000, eta);
    const auto b = extract_circuit(k, m, 4000, 2 * eta);
    CHECK(b.inductance() == doctest::Approx(a.inductance() / 4));
    CHECK(b.capacitance() == doctest::Approx(a.capacitance() * 4));
    CHECK(b.resistance() == doctest::Approx(a.resistance() / 4));
    CHECK(b.f0() == doctest::Approx(a.f0()).epsilon(1e-12));
    CHECK_THROWS_AS(extract_circuit(k, m, 4000, 0.0), Error);
    CHECK_THROWS_AS(extract_circuit(-k, m, 4000, eta), Error);
  }

  TEST_CASE("series impedance") {
    const auto ec = circuit_of(0);
    const auto z0 = series_impedance(ec, ec.f0());
    CHECK(z0.real() == doctest::Approx(ec.resistance()));
    CHECK(std::abs(z0.imag()) < 1e-6 * ec.resistance());

    const auto zl = series_impedance(ec, 1e-3);
    CHECK(zl.imag() < -1e12);

    // Direct evaluation of R + j(wL - 1/(wC)) at 1% above resonance: frozen
    // 57.0755 MOhm; the narrowband estimate 2 Q delta R_x gives 57.36 MOhm.
    const double f = 1.01 * ec.f0();
    const double w = 2 * oracle::kPi * f;
    const double im = w * ec.inductance() - 1.0 / (w * ec.capacitance());
    const auto z = series_impedance(ec, f);
    CHECK(z.imag() == doctest::Approx(im).epsilon(1e-10));
    CHECK(z.imag() == doctest::Approx(57.0755e6).epsilon(1e-5));
    CHECK(oracle::rel(z.imag(), 2 * 4000 * 0.01 * ec.resistance()) < 0.006);
  }

  TEST_CASE("motional current") {
    // x_amp = I_x / (eta w0) from the table: frozen at 339 nm and 347 nm.
    const double eta1 = coupling_coefficient(transducer_of(oracle::kTable[0]));
    CHECK(motional_current(eta1, 75.9e3, 339e-9) == doctest::Approx(3.3996e-9).epsilon(1e-3));
    CHECK(oracle::rel(motional_current(eta1, 75.9e3, 339e-9), 3.4e-9) < 0.01);
    CHECK(motional_current(eta1, 75.9e3, 0.0) == 0.0);
    const double eta2 = coupling_coefficient(transducer_of(oracle::kTable[1]));
    CHECK(oracle::rel(motional_current(eta2, 105.4e3, 347e-9), 2.9e-9) < 0.01);
    for (int i = 0; i < 2; ++i) {
      const auto& c = oracle::kTable[i];
      const double eta = coupling_coefficient(transducer_of(c));
      const double x = c.ix / (eta * 2 * oracle::kPi * c.f0);
      CHECK(x == doctest::Approx(i == 0 ? 339e-9 : 347e-9).epsilon(0.01));
    }
  }

  TEST_CASE("lossless circuit") {
    const auto ec = EquivalentCircuit::from_rlc(0.0, 1.0, 1e-9);
    CHECK(std::isinf(ec.quality_factor()));
    CHECK_THROWS_AS(EquivalentCircuit::from_rlc(1.0, 0.0, 1e-9), Error);
    CHECK_THROWS_AS(EquivalentCircuit::from_rlc(-1.0, 1.0, 1e-9), Error);
  }

  TEST_CASE("property: circuit identities") {
    std::mt19937_64 rng(21);
    for (int i = 0; i < 1000; ++i) {
      const double k = oracle::log_uniform(rng, 1e-2, 1e3);
      const double m = oracle::log_uniform(rng, 1e-15, 1e-9);
      const double q = oracle::log_uniform(rng, 10, 1e6);
      const double eta = oracle::log_uniform(rng, 1e-10, 1e-5);
      const auto ec = extract_circuit(k, m, q, eta);
      const double w0 = 2 * oracle::kPi * ec.f0();
      CHECK(oracle::rel(w0, 1.0 / std::sqrt(ec.inductance() * ec.capacitance())) < 1e-9);
      CHECK(oracle::rel(ec.resistance() * ec.quality_factor(),
                        std::sqrt(ec.inductance() / ec.capacitance())) < 1e-9);
      CHECK(oracle::rel(ec.f0(), std::sqrt(k / m) / (2 * oracle::kPi)) < 1e-9);
      CHECK(oracle::rel(ec.quality_factor(), q) < 1e-9);
    }
  }
}
