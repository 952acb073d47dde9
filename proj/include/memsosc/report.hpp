#pragma once

#include <ostream>
#include <span>
#include <string>

#include <json.hpp>

#include "memsosc/explore.hpp"
#include "memsosc/reference.hpp"
#include "memsosc/simulate.hpp"

namespace memsosc {

/// Shortest round-trip decimal form; deterministic across runs.
std::string format_number(double v);

/// Every derived quantity of a design point, keys suffixed with SI units.
nlohmann::json design_point_json(const DesignPoint& point);

/// Flattened scalar columns of a design point, in a fixed order.
std::vector<std::pair<std::string, std::string>> design_point_columns(const DesignPoint& point);

void write_design_point_csv(std::ostream& os, const DesignPoint& point);

/// Header `t,v_in,v_out,x`.
void write_trace_csv(std::ostream& os, const Trace& trace);
void write_envelope_csv(std::ostream& os, std::span<const EnvelopePoint> env);

/// Static SVG line plot of v_out(t) with the envelope overlaid.
std::string trace_svg(const Trace& trace, std::span<const EnvelopePoint> env);

void write_sweep_csv(std::ostream& os, const SweepSpec& spec, std::span<const SweepRow> rows);
nlohmann::json sweep_json(const SweepSpec& spec, std::span<const SweepRow> rows);

nlohmann::json optimize_json(const SweepSpec& spec, const OptimizeResult& result);
void write_search_log_csv(std::ostream& os, const SweepSpec& spec,
                          std::span<const SearchLogEntry> log);

void write_comparison_text(std::ostream& os, const ComparisonReport& report);
void write_comparison_csv(std::ostream& os, const ComparisonReport& report);
nlohmann::json comparison_json(const ComparisonReport& report);

}  // namespace memsosc
