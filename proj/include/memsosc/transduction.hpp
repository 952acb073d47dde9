#pragma once

#include <complex>

#include "memsosc/geometry.hpp"

namespace memsosc {

/// Electrode overlap area W_e * W [m^2].
double electrode_area(const Transducer& t);

/// eta = V_P * eps0 * A / g^2 [N/V].
double coupling_coefficient(const Transducer& t);

/// Static parallel-plate capacitance eps0 * A / g [F].
double electrode_capacitance(const Transducer& t);

/// Allowed beam excursion: 33% of the gap for a shared drive/sense
/// electrode, 11% with electrodes on both sides.
double displacement_limit(const Transducer& t);

inline constexpr double kOnePortDeflectionFraction = 0.33;
inline constexpr double kTwoPortDeflectionFraction = 0.11;

/// R_x = k / (w0 Q eta^2) [ohm].
double motional_resistance(double stiffness, double f0, double quality_factor, double eta);

/// Series R-L-C equivalent of the resonator seen at the electrode.
/// f0 and Q are derived on construction so both identities
/// w0 = 1/sqrt(LC) and R Q = sqrt(L/C) hold.
class EquivalentCircuit {
 public:
  /// R may be zero (lossless, Q = inf); L and C must be positive.
  static EquivalentCircuit from_rlc(double resistance, double inductance, double capacitance);

  double resistance() const noexcept { return resistance_; }
  double inductance() const noexcept { return inductance_; }
  double capacitance() const noexcept { return capacitance_; }
  double f0() const noexcept { return f0_; }
  double quality_factor() const noexcept { return quality_factor_; }

 private:
  EquivalentCircuit(double r, double l, double c);

  double resistance_;
  double inductance_;
  double capacitance_;
  double f0_;
  double quality_factor_;
};

/// L_x = m / eta^2, C_x = eta^2 / k, R_x from motional_resistance.
EquivalentCircuit extract_circuit(double stiffness, double mass, double quality_factor,
                                  double eta);

std::complex<double> series_impedance(const EquivalentCircuit& ec, double frequency);

/// Velocity current eta * w0 * x_amp [A].
double motional_current(double eta, double f0, double amplitude);

}  // namespace memsosc
