#pragma once

#include <array>
#include <string>
#include <vector>

#include "memsosc/geometry.hpp"

namespace memsosc {

inline constexpr int kMaxStructuralMetals = 4;

/// Which back-end layers form the released structure. The top metal acts as
/// the etch mask, so it fixes the stack thickness.
struct LaminateSpec {
  int top_metal_index = 4;  // 1..4
  bool include_dielectric = true;
};

struct LaminateProperties {
  double thickness = 0.0;       // [m] W
  double youngs_modulus = 0.0;  // [Pa]
  double density = 0.0;         // [kg/m^3]
};

/// Composite material data for the metal/oxide laminate.
///
/// Only the four-metal thickness (4.8 um) is a measured process value; the
/// thinner stacks assume 1.2 um per metal+dielectric pair, and the metal-only
/// variant assumes half of that. Density 2770 kg/m^3 is the value that makes
/// the lumped model agree with the three fabricated resonators.
struct MaterialTable {
  std::array<double, kMaxStructuralMetals> stack_thickness{1.2e-6, 2.4e-6, 3.6e-6, 4.8e-6};
  std::array<double, kMaxStructuralMetals> metal_only_thickness{0.6e-6, 1.2e-6, 1.8e-6, 2.4e-6};
  double youngs_modulus = 63e9;
  double density = 2770.0;

  /// Positive entries, thickness tables strictly increasing.
  void validate() const;
  double max_thickness() const;
};

LaminateProperties laminate_properties(const LaminateSpec& spec,
                                       const MaterialTable& table = {});

struct MemsRuleSet {
  double min_lateral_gap = 1.2e-6;
  double max_release_width = 8e-6;
  bool require_metal_cover = true;
  /// Cover rule: the structure may not be taller than the masking stack.
  double max_stack_thickness = 4.8e-6;

  void validate() const;
};

struct RuleViolation {
  std::string rule;
  double measured = 0.0;
  double limit = 0.0;
};

/// Layout-rule screen. Violations are data; an empty result means clean.
std::vector<RuleViolation> check_mems_rules(const BeamGeometry& geometry,
                                            const Transducer& transducer,
                                            const MemsRuleSet& rules);

}  // namespace memsosc
