#include "memsosc/process.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "memsosc/error.hpp"

namespace memsosc {

namespace {

void require_positive(double v, const char* name) {
  if (!(std::isfinite(v) && v > 0.0)) {
    std::ostringstream os;
    os << name << " must be positive and finite (got " << v << ")";
    throw Error(ErrorKind::invalid_spec, os.str());
  }
}

void require_increasing(const std::array<double, kMaxStructuralMetals>& table, const char* name) {
  for (std::size_t i = 0; i < table.size(); ++i) {
    require_positive(table[i], name);
    if (i > 0 && !(table[i] > table[i - 1])) {
      std::ostringstream os;
      os << name << " must increase strictly with the top metal index";
      throw Error(ErrorKind::invalid_spec, os.str());
    }
  }
}

}  // namespace

void MaterialTable::validate() const {
  require_increasing(stack_thickness, "stack thickness");
  require_increasing(metal_only_thickness, "metal-only thickness");
  require_positive(youngs_modulus, "Young's modulus");
  require_positive(density, "density");
}

double MaterialTable::max_thickness() const {
  return std::max(stack_thickness.back(), metal_only_thickness.back());
}

LaminateProperties laminate_properties(const LaminateSpec& spec, const MaterialTable& table) {
  if (spec.top_metal_index < 1 || spec.top_metal_index > kMaxStructuralMetals) {
    std::ostringstream os;
    os << "top metal index " << spec.top_metal_index << " outside 1.."
       << kMaxStructuralMetals;
    throw Error(ErrorKind::invalid_spec, os.str());
  }
  table.validate();
  const auto idx = static_cast<std::size_t>(spec.top_metal_index - 1);
  const auto& thickness = spec.include_dielectric ? table.stack_thickness
                                                  : table.metal_only_thickness;
  return {thickness[idx], table.youngs_modulus, table.density};
}

void MemsRuleSet::validate() const {
  require_positive(min_lateral_gap, "min_lateral_gap");
  require_positive(max_release_width, "max_release_width");
  require_positive(max_stack_thickness, "max_stack_thickness");
}

std::vector<RuleViolation> check_mems_rules(const BeamGeometry& geometry,
                                            const Transducer& transducer,
                                            const MemsRuleSet& rules) {
  std::vector<RuleViolation> out;
  if (transducer.gap < rules.min_lateral_gap) {
    out.push_back({"min_lateral_gap", transducer.gap, rules.min_lateral_gap});
  }
  // Wider members would not be fully undercut by the isotropic release etch.
  if (geometry.width > rules.max_release_width) {
    out.push_back({"max_release_width", geometry.width, rules.max_release_width});
  }
  if (rules.require_metal_cover && geometry.thickness > rules.max_stack_thickness) {
    out.push_back({"metal_cover", geometry.thickness, rules.max_stack_thickness});
  }
  return out;
}

}  // namespace memsosc
