#pragma once

#include <limits>
#include <string_view>

namespace memsosc {

enum class Anchor { cantilever, clamped_clamped };

enum class Port { one_port, two_port };

std::string_view to_string(Anchor anchor);
std::string_view to_string(Port port);

/// Lateral-bending beam. `width` is the in-plane dimension along the
/// direction of motion (H); `thickness` is the laminate stack height (W).
struct BeamGeometry {
  Anchor anchor = Anchor::cantilever;
  double length = 0.0;     // [m]
  double width = 0.0;      // [m]
  double thickness = 0.0;  // [m]

  /// Throws Error(invalid_input) unless all dimensions are positive, the
  /// beam is slender (length > width) and the stack does not exceed
  /// `max_thickness`.
  void validate(double max_thickness = std::numeric_limits<double>::infinity()) const;
};

/// Parallel-plate drive electrode facing the beam sidewall.
struct Transducer {
  double gap = 0.0;                // [m]
  double electrode_length = 0.0;   // [m] along the beam (W_e)
  double electrode_height = 0.0;   // [m] equals the beam stack thickness
  double bias = 0.0;               // [V] polarization voltage V_P
  Port port = Port::one_port;

  void validate() const;
  /// Also checks the electrode fits along the paired beam.
  void validate(const BeamGeometry& beam) const;
};

}  // namespace memsosc
