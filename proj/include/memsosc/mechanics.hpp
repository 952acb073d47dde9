#pragma once

#include "memsosc/geometry.hpp"

namespace memsosc {

/// Mass model used for the single-degree-of-freedom reduction.
///
/// `lumped` takes the full beam mass rho*W*H*L and pairs it with the
/// endpoint (tip or midpoint) stiffness; this is what reproduces the measured
/// designs. `modal` uses the effective mass of the first Euler-Bernoulli
/// bending mode referred to the same point, giving the distributed-beam f0
/// (about twice the lumped value) for comparison.
enum class MassModel { lumped, modal };

enum class DeflectionMode { linearized, nonlinear };

/// Second moment of area for lateral bending, W*H^3/12 [m^4].
double area_moment(const BeamGeometry& geometry);

/// Cantilever tip stiffness 3EI/L^3, clamped-clamped midpoint stiffness
/// 192EI/L^3 [N/m].
double spring_constant(const BeamGeometry& geometry, double youngs_modulus);

double lumped_mass(const BeamGeometry& geometry, double density,
                   MassModel model = MassModel::lumped);

double resonant_frequency(double stiffness, double mass);

/// Parallel-plate pull-in bias sqrt(8 k g^3 / (27 eps0 A)) [V].
double pull_in_voltage(double stiffness, double gap, double electrode_area);

/// Static displacement toward the electrode under the DC bias.
///
/// Linearized: x = eps0 A V^2 / (2 k g^2). Nonlinear: damped fixed-point
/// solve of x = eps0 A V^2 / (2 k (g - x)^2) from x = 0, which lands on the
/// stable branch x < g/3. Throws pull_in when V >= V_pi and numerical when
/// the iteration stalls.
double static_deflection(double stiffness, const Transducer& transducer,
                         DeflectionMode mode = DeflectionMode::linearized);

/// Electrostatic negative spring eps0 A V^2 / g^3 [N/m].
double spring_softening(const Transducer& transducer);

/// Single-degree-of-freedom resonator; f0 is always derived from k and m.
class LumpedBeamModel {
 public:
  LumpedBeamModel(double stiffness, double mass, double quality_factor);

  double stiffness() const noexcept { return stiffness_; }
  double mass() const noexcept { return mass_; }
  double f0() const noexcept { return f0_; }
  double quality_factor() const noexcept { return quality_factor_; }

 private:
  double stiffness_;
  double mass_;
  double f0_;
  double quality_factor_;
};

/// Resonance after a stiffness perturbation dk (e.g. from bending under
/// acceleration or electrostatic softening).
double frequency_shift(const LumpedBeamModel& model, double dk);

}  // namespace memsosc
