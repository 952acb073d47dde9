#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "memsosc/explore.hpp"

namespace memsosc {

/// Values reported for a fabricated oscillator, SI units.
struct PublishedValues {
  double f0;                  // [Hz]
  double v_pull_in;           // [V]
  double motional_current;    // [A]
  double z_deflection;        // [m]
  double neg_resistance;      // [ohm] operating |Re(Z_C)|
  double neg_resistance_max;  // [ohm]
  double rx;                  // [ohm]
  double lx;                  // [H]
  double cx;                  // [F]
};

struct ReferenceDesign {
  std::string_view id;     // "design1".."design3"
  std::string_view label;  // "Design #1"
  DesignInputs inputs;
  PublishedValues published;
};

/// The three fabricated CMOS-MEMS oscillators, with the bundled inputs that
/// reproduce them.
std::span<const ReferenceDesign> reference_designs();

/// Throws Error(invalid_input) for an unknown id.
const ReferenceDesign& reference_design(std::string_view id);

enum class CellStatus { pass, fail, info };

std::string_view to_string(CellStatus status);

struct ComparisonRow {
  std::string design;
  std::string quantity;
  std::string unit;       // display unit for the two value columns
  double published = 0.0; // in display units
  double computed = 0.0;  // in display units
  double rel_error = 0.0;
  double tolerance = 0.0;
  CellStatus status = CellStatus::pass;
  std::string note;
};

struct ComparisonReport {
  std::vector<ComparisonRow> rows;

  /// Conjunction over the gating cells; info cells never fail the report.
  bool all_pass() const;
};

struct ComparisonOptions {
  std::optional<double> density;
};

/// Recomputes every table quantity for the three reference designs and
/// compares against the published values.
ComparisonReport compare_reference_designs(const ComparisonOptions& options = {});

}  // namespace memsosc
