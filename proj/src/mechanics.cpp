#include "memsosc/mechanics.hpp"

#include <cmath>
#include <sstream>

#include "memsosc/constants.hpp"
#include "memsosc/error.hpp"
#include "memsosc/transduction.hpp"

namespace memsosc {

namespace {

double stiffness_factor(Anchor anchor) {
  return anchor == Anchor::cantilever ? 3.0 : 192.0;
}

// First bending-mode eigenvalue beta*L.
double mode_eigenvalue(Anchor anchor) {
  return anchor == Anchor::cantilever ? 1.8751040687119611 : 4.7300407448627040;
}

}  // namespace

double area_moment(const BeamGeometry& geometry) {
  const double h = geometry.width;
  return geometry.thickness * h * h * h / 12.0;
}

double spring_constant(const BeamGeometry& geometry, double youngs_modulus) {
  const double l = geometry.length;
  return stiffness_factor(geometry.anchor) * youngs_modulus * area_moment(geometry) / (l * l * l);
}

double lumped_mass(const BeamGeometry& geometry, double density, MassModel model) {
  const double full = density * geometry.thickness * geometry.width * geometry.length;
  if (model == MassModel::lumped) return full;
  // m_eff = k / w_modal^2 with w_modal^2 = (beta L)^4 EI / (rho A L^4).
  const double bl = mode_eigenvalue(geometry.anchor);
  return stiffness_factor(geometry.anchor) / (bl * bl * bl * bl) * full;
}

double resonant_frequency(double stiffness, double mass) {
  return std::sqrt(stiffness / mass) / kTwoPi;
}

double pull_in_voltage(double stiffness, double gap, double electrode_area) {
  return std::sqrt(8.0 * stiffness * gap * gap * gap / (27.0 * kEpsilon0 * electrode_area));
}

double static_deflection(double stiffness, const Transducer& transducer, DeflectionMode mode) {
  const double g = transducer.gap;
  const double a = electrode_area(transducer);
  const double v = transducer.bias;
  const double force_scale = kEpsilon0 * a * v * v / (2.0 * stiffness);
  if (mode == DeflectionMode::linearized) return force_scale / (g * g);

  const double v_pi = pull_in_voltage(stiffness, g, a);
  if (v >= v_pi) {
    std::ostringstream os;
    os << "bias " << v << " V is at or above pull-in " << v_pi << " V";
    throw Error(ErrorKind::pull_in, os.str());
  }
  constexpr int kMaxIterations = 1000;
  constexpr double kTolerance = 1e-15;  // [m]
  constexpr double kDamping = 0.5;
  double x = 0.0;
  for (int i = 0; i < kMaxIterations; ++i) {
    const double gx = g - x;
    const double next = x + kDamping * (force_scale / (gx * gx) - x);
    if (std::abs(next - x) < kTolerance) return next;
    x = next;
  }
  throw Error(ErrorKind::numerical,
              "nonlinear deflection did not converge in 1000 iterations (too close to pull-in)");
}

double spring_softening(const Transducer& transducer) {
  const double g = transducer.gap;
  const double v = transducer.bias;
  return kEpsilon0 * electrode_area(transducer) * v * v / (g * g * g);
}

LumpedBeamModel::LumpedBeamModel(double stiffness, double mass, double quality_factor)
    : stiffness_(stiffness), mass_(mass), f0_(0.0), quality_factor_(quality_factor) {
  if (!(stiffness > 0.0 && mass > 0.0 && quality_factor > 0.0) ||
      !std::isfinite(stiffness * mass)) {
    throw Error(ErrorKind::invalid_input, "lumped model needs positive k, m and Q");
  }
  f0_ = resonant_frequency(stiffness, mass);
}

double frequency_shift(const LumpedBeamModel& model, double dk) {
  const double k = model.stiffness() + dk;
  if (!(k > 0.0)) {
    std::ostringstream os;
    os << "perturbed stiffness " << k << " N/m is not positive";
    throw Error(ErrorKind::invalid_perturbation, os.str());
  }
  return resonant_frequency(k, model.mass());
}

}  // namespace memsosc
