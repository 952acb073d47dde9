#include "memsosc/transduction.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "memsosc/constants.hpp"
#include "memsosc/error.hpp"

namespace memsosc {

double electrode_area(const Transducer& t) { return t.electrode_length * t.electrode_height; }

double coupling_coefficient(const Transducer& t) {
  return t.bias * kEpsilon0 * electrode_area(t) / (t.gap * t.gap);
}

double electrode_capacitance(const Transducer& t) {
  return kEpsilon0 * electrode_area(t) / t.gap;
}

double displacement_limit(const Transducer& t) {
  const double fraction =
      t.port == Port::one_port ? kOnePortDeflectionFraction : kTwoPortDeflectionFraction;
  return fraction * t.gap;
}

double motional_resistance(double stiffness, double f0, double quality_factor, double eta) {
  return stiffness / (kTwoPi * f0 * quality_factor * eta * eta);
}

EquivalentCircuit::EquivalentCircuit(double r, double l, double c)
    : resistance_(r),
      inductance_(l),
      capacitance_(c),
      f0_(1.0 / (kTwoPi * std::sqrt(l * c))),
      quality_factor_(r > 0.0 ? std::sqrt(l / c) / r : std::numeric_limits<double>::infinity()) {}

EquivalentCircuit EquivalentCircuit::from_rlc(double resistance, double inductance,
                                              double capacitance) {
  if (!(resistance >= 0.0 && inductance > 0.0 && capacitance > 0.0) ||
      !std::isfinite(resistance + inductance + capacitance)) {
    std::ostringstream os;
    os << "equivalent circuit needs R >= 0, L > 0, C > 0 (got " << resistance << ", "
       << inductance << ", " << capacitance << ")";
    throw Error(ErrorKind::invalid_input, os.str());
  }
  return EquivalentCircuit(resistance, inductance, capacitance);
}

EquivalentCircuit extract_circuit(double stiffness, double mass, double quality_factor,
                                  double eta) {
  if (!(stiffness > 0.0 && mass > 0.0 && quality_factor > 0.0 && eta > 0.0)) {
    throw Error(ErrorKind::invalid_input,
                "circuit extraction needs positive k, m, Q and eta (is the bias zero?)");
  }
  const double eta2 = eta * eta;
  const double f0 = std::sqrt(stiffness / mass) / kTwoPi;
  const double rx = motional_resistance(stiffness, f0, quality_factor, eta);
  auto ec = EquivalentCircuit::from_rlc(rx, mass / eta2, eta2 / stiffness);
  // The resonance and Q identities are algebraic consequences of the three
  // formulas; a mismatch here means overflow or a degenerate input.
  if (std::abs(ec.f0() - f0) > 1e-9 * f0 ||
      std::abs(ec.quality_factor() - quality_factor) > 1e-9 * quality_factor) {
    throw Error(ErrorKind::numerical, "equivalent circuit lost resonance/Q consistency");
  }
  return ec;
}

std::complex<double> series_impedance(const EquivalentCircuit& ec, double frequency) {
  const double w = kTwoPi * frequency;
  return {ec.resistance(), w * ec.inductance() - 1.0 / (w * ec.capacitance())};
}

double motional_current(double eta, double f0, double amplitude) {
  return eta * kTwoPi * f0 * amplitude;
}

}  // namespace memsosc
