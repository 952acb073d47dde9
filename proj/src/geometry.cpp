#include "memsosc/geometry.hpp"

#include <cmath>
#include <sstream>

#include "memsosc/error.hpp"

namespace memsosc {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_spec: return "invalid-spec";
    case ErrorKind::invalid_input: return "invalid-input";
    case ErrorKind::pull_in: return "pull-in";
    case ErrorKind::numerical: return "numerical";
    case ErrorKind::invalid_perturbation: return "invalid-perturbation";
    case ErrorKind::insufficient_data: return "insufficient-data";
    case ErrorKind::no_growth: return "no-growth";
    case ErrorKind::config: return "config";
    case ErrorKind::refused: return "refused";
  }
  return "unknown";
}

std::string_view to_string(Anchor anchor) {
  return anchor == Anchor::cantilever ? "cantilever" : "clamped_clamped";
}

std::string_view to_string(Port port) {
  return port == Port::one_port ? "one_port" : "two_port";
}

namespace {

void require_positive(double value, const char* name) {
  if (!(std::isfinite(value) && value > 0.0)) {
    std::ostringstream os;
    os << name << " must be positive and finite (got " << value << ")";
    throw Error(ErrorKind::invalid_input, os.str());
  }
}

}  // namespace

void BeamGeometry::validate(double max_thickness) const {
  require_positive(length, "beam length");
  require_positive(width, "beam width");
  require_positive(thickness, "beam thickness");
  if (!(length > width)) {
    throw Error(ErrorKind::invalid_input, "beam length must exceed its in-plane width");
  }
  if (thickness > max_thickness) {
    std::ostringstream os;
    os << "beam thickness " << thickness << " m exceeds the laminate maximum " << max_thickness
       << " m";
    throw Error(ErrorKind::invalid_input, os.str());
  }
}

void Transducer::validate() const {
  require_positive(gap, "gap");
  require_positive(electrode_length, "electrode length");
  require_positive(electrode_height, "electrode height");
  if (!(std::isfinite(bias) && bias >= 0.0)) {
    throw Error(ErrorKind::invalid_input, "bias voltage must be non-negative");
  }
}

void Transducer::validate(const BeamGeometry& beam) const {
  validate();
  if (electrode_length > beam.length) {
    std::ostringstream os;
    os << "electrode length " << electrode_length << " m exceeds beam length " << beam.length
       << " m";
    throw Error(ErrorKind::invalid_input, os.str());
  }
}

}  // namespace memsosc
