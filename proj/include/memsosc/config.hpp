#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include <json.hpp>

#include "memsosc/explore.hpp"
#include "memsosc/simulate.hpp"

namespace memsosc {

/// Simulation block as written in a config; "auto" entries resolve against
/// the resonance frequency of the evaluated design.
struct SimSettings {
  std::optional<double> dt;
  std::optional<double> duration;
  std::uint64_t seed = 1;
  double initial_kick = 1e-9;
  double v_limit = 10e-6;
  double r_feedback = 10e9;
  double r_output = 1e9;
  std::size_t stride = 10;  // trace decimation; 20 samples per cycle at the default dt

  SimConfig resolve(double f0) const;
};

struct ProjectConfig {
  std::string name;
  DesignInputs design;
  SimSettings sim;
};

/// Strict parse: unknown keys, wrong types and out-of-range values throw
/// Error(config) naming the offending JSON path.
ProjectConfig parse_config(const nlohmann::json& doc);

/// Reads a config file, applies `path=value` overrides, then parses.
ProjectConfig load_config(const std::filesystem::path& file,
                          std::span<const std::string> overrides = {});

/// Applies one `a.b.c=value` assignment. The value is taken as JSON when it
/// parses (numbers, true/false, null, quoted strings) and as a bare string
/// otherwise.
void apply_override(nlohmann::json& doc, std::string_view assignment);

/// Fully populated config (every default spelled out).
nlohmann::json to_json(const ProjectConfig& config);

/// {"axes": [{"path", "min", "max", "steps", "scale"}], "objective", "grid_cap"}
SweepSpec parse_sweep_spec(const nlohmann::json& doc);
SweepSpec load_sweep_spec(const std::filesystem::path& file);

std::string read_file(const std::filesystem::path& file);

}  // namespace memsosc
