#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "memsosc/geometry.hpp"
#include "memsosc/mechanics.hpp"
#include "memsosc/pierce.hpp"
#include "memsosc/process.hpp"
#include "memsosc/transduction.hpp"

namespace memsosc {

/// How the operating transconductance is picked.
struct GmChoice {
  enum class Mode { target_margin, target_resistance, fixed };
  Mode mode = Mode::target_margin;
  double value = kStartupMargin;  // margin, ohms or A/V depending on mode

  static GmChoice margin(double m) { return {Mode::target_margin, m}; }
  static GmChoice resistance(double ohms) { return {Mode::target_resistance, ohms}; }
  static GmChoice fixed(double gm) { return {Mode::fixed, gm}; }
};

struct ConstraintSettings {
  double pull_in_safety = 0.97;  // alpha: require V_P < alpha * V_pi
  DeflectionMode deflection_mode = DeflectionMode::linearized;
  /// Vibration amplitude added to the static offset. When unset, the
  /// allowance is whatever headroom remains, so only the static offset binds.
  std::optional<double> vibration_amplitude;
};

/// Everything needed to evaluate one design (one column of a design table).
struct DesignInputs {
  LaminateSpec laminate;
  MaterialTable materials;
  MassModel mass_model = MassModel::lumped;
  Anchor anchor = Anchor::cantilever;
  double length = 100e-6;
  double width = 2e-6;
  double quality_factor = 4000.0;
  double gap = 1.2e-6;
  double electrode_length = 75e-6;
  double bias = 9.5;
  Port port = Port::one_port;
  PierceCapacitors caps;
  GmChoice gm;
  MemsRuleSet rules;
  ConstraintSettings constraints;
};

struct ConstraintResult {
  std::string name;
  double value = 0.0;
  double limit = 0.0;
  bool satisfied = true;
  /// Relative amount by which the limit is exceeded (<= 0 when satisfied).
  double excess = 0.0;
};

struct DesignPoint {
  DesignInputs inputs;

  LaminateProperties laminate;
  BeamGeometry geometry;
  Transducer transducer;
  std::optional<LumpedBeamModel> beam;
  double eta = 0.0;
  std::optional<EquivalentCircuit> circuit;
  double electrode_capacitance = 0.0;
  double v_pull_in = 0.0;
  double static_deflection = 0.0;
  double displacement_limit = 0.0;
  NegativeResistanceMax re_max;
  std::vector<double> gm_roots;
  double gm = 0.0;
  bool gm_target_reached = false;
  double neg_resistance = 0.0;
  StartupReport startup;
  std::vector<RuleViolation> violations;
  std::vector<ConstraintResult> constraints;
  bool feasible = false;
  /// Set instead of the derived fields when the inputs could not be evaluated
  /// (only produced by sweep; evaluate throws).
  std::optional<std::string> error;
};

/// process -> mechanics -> transduction -> pierce, then the constraint set.
/// Errors are rethrown with the failing stage prefixed.
DesignPoint evaluate(const DesignInputs& inputs);

/// Numeric inputs addressable by sweep axes and `--set`.
std::vector<std::string_view> parameter_paths();
bool is_parameter_path(std::string_view path);
double get_parameter(const DesignInputs& inputs, std::string_view path);
void set_parameter(DesignInputs& inputs, std::string_view path, double value);

enum class Objective { startup_margin, min_rx, max_f0 };

std::string_view to_string(Objective objective);
Objective objective_from_string(std::string_view name);

struct SweepAxis {
  std::string path;
  double min = 0.0;
  double max = 0.0;
  int steps = 2;
  bool log_scale = false;

  std::vector<double> values() const;
};

struct SweepSpec {
  std::vector<SweepAxis> axes;
  Objective objective = Objective::startup_margin;
  std::size_t grid_cap = 1'000'000;

  void validate() const;
  std::size_t grid_size() const;
};

struct SweepRow {
  std::vector<double> coordinates;
  DesignPoint point;
};

/// Cartesian grid, row-major with the last axis fastest. Rows come back in
/// grid order regardless of `threads`; 0 picks the hardware concurrency.
std::vector<SweepRow> sweep(const DesignInputs& base, const SweepSpec& spec,
                            unsigned threads = 0);

/// Raw objective value: Re_max/R_x, R_x or f0.
double objective_value(const DesignPoint& point, Objective objective);
/// Larger is better.
double objective_score(const DesignPoint& point, Objective objective);

struct SearchLogEntry {
  int iteration = 0;
  std::string phase;  // "grid" or "simplex"
  std::vector<double> coordinates;
  double objective = 0.0;
  bool feasible = false;
  double best_objective = 0.0;
};

struct OptimizeResult {
  bool found = false;
  std::optional<DesignPoint> best;
  std::vector<double> best_coordinates;
  double best_objective = 0.0;
  double grid_best_objective = 0.0;
  std::vector<SearchLogEntry> log;
  /// For an infeasible problem: the worst constraint of the grid point that
  /// came closest to feasibility.
  std::string most_violated;
  double most_violated_excess = 0.0;
};

struct OptimizeOptions {
  int max_grid_steps = 5;
  int max_iterations = 400;
  double simplex_tolerance = 1e-9;  // in normalized axis coordinates
};

/// Coarse grid then multi-directional simplex refinement in normalized axis coordinates;
/// infeasible or out-of-range trial points are rejected.
OptimizeResult optimize(const DesignInputs& base, const SweepSpec& spec,
                        const OptimizeOptions& options = {});

}  // namespace memsosc
