#pragma once

#include <complex>
#include <span>
#include <vector>

namespace memsosc {

/// C1 (gate to ground), C2 (drain to ground) and the bridging parasitic C0.
struct PierceCapacitors {
  double c1 = 2e-12;
  double c2 = 2e-12;
  double c0 = 10e-15;

  void validate() const;
  /// C1 C2 + C2 C0 + C0 C1
  double pair_sum() const noexcept { return c1 * c2 + c2 * c0 + c0 * c1; }
};

struct PierceConfig {
  PierceCapacitors caps;
  double gm = 0.0;  // [A/V]
  double f0 = 0.0;  // [Hz]

  void validate() const;
};

/// Impedance presented to the resonator by the single-transistor Pierce
/// network (ideal transconductor, no bias resistors):
///
///   Z_C = -(gm + j w (C1 + C2)) / (w (w S - j C0 gm)),  S = C1C2 + C2C0 + C0C1
///
/// Its real part is negative whenever gm > 0.
std::complex<double> pierce_impedance(const PierceConfig& cfg);

/// |Re(Z_C)| = gm C1 C2 / ((gm C0)^2 + w^2 S^2) [ohm].
double negative_resistance(const PierceConfig& cfg);

struct NegativeResistanceMax {
  double re_max = 0.0;  // [ohm]
  double gm_opt = 0.0;  // [A/V]
};

/// Peak of |Re(Z_C)| over gm: gm_opt = w S / C0, Re_max = C1 C2 / (2 w C0 S).
NegativeResistanceMax max_negative_resistance(const PierceCapacitors& caps, double f0);

/// Transconductances that give |Re(Z_C)| = target, ascending. Empty when the
/// target exceeds Re_max; a single entry at exactly Re_max.
std::vector<double> required_gm(const PierceCapacitors& caps, double f0, double target);

struct StartupReport {
  double neg_resistance = 0.0;
  double rx = 0.0;
  double margin = 0.0;
  bool meets_3x = false;
  bool oscillates = false;
};

inline constexpr double kStartupMargin = 3.0;

/// Oscillation needs |Re(Z_C)| strictly above R_x; reliable startup needs 3x.
StartupReport startup_check(double neg_resistance, double rx);

struct LocusPoint {
  double gm = 0.0;
  double re = 0.0;  // |Re(Z_C)|
  double im = 0.0;  // Im(Z_C), capacitive (negative)
};

std::vector<LocusPoint> impedance_locus(const PierceCapacitors& caps, double f0,
                                        std::span<const double> gm_samples);

/// n points log-spaced over [lo, hi], endpoints included.
std::vector<double> log_grid(double lo, double hi, std::size_t n);

}  // namespace memsosc
