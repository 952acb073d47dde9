#include "memsosc/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <iomanip>
#include <sstream>

namespace memsosc {

using nlohmann::json;

std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace {

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

json design_point_json(const DesignPoint& p) {
  json out;
  out["feasible"] = p.feasible;
  out["error"] = p.error ? json(*p.error) : json(nullptr);
  const auto& in = p.inputs;
  out["laminate"] = {{"top_metal", in.laminate.top_metal_index},
                     {"include_dielectric", in.laminate.include_dielectric},
                     {"thickness_m", p.laminate.thickness},
                     {"youngs_modulus_Pa", p.laminate.youngs_modulus},
                     {"density_kg_m3", p.laminate.density}};
  if (p.error || !p.beam || !p.circuit) return out;

  const auto& ec = *p.circuit;
  out["beam"] = {{"anchor", std::string(to_string(p.geometry.anchor))},
                 {"length_m", p.geometry.length},
                 {"width_m", p.geometry.width},
                 {"thickness_m", p.geometry.thickness},
                 {"area_moment_m4", area_moment(p.geometry)},
                 {"stiffness_N_m", p.beam->stiffness()},
                 {"mass_kg", p.beam->mass()},
                 {"f0_Hz", p.beam->f0()},
                 {"f0_kHz", p.beam->f0() / 1e3},
                 {"quality_factor", p.beam->quality_factor()}};
  out["transducer"] = {{"gap_m", p.transducer.gap},
                       {"electrode_length_m", p.transducer.electrode_length},
                       {"electrode_height_m", p.transducer.electrode_height},
                       {"bias_V", p.transducer.bias},
                       {"port", std::string(to_string(p.transducer.port))},
                       {"eta_N_per_V", p.eta},
                       {"electrode_capacitance_F", p.electrode_capacitance},
                       {"displacement_limit_m", p.displacement_limit}};
  out["electrostatics"] = {{"v_pull_in_V", p.v_pull_in},
                           {"bias_over_pull_in", p.transducer.bias / p.v_pull_in},
                           {"static_deflection_m", finite_or_null(p.static_deflection)},
                           {"spring_softening_N_m", spring_softening(p.transducer)}};
  out["circuit"] = {{"R_x_ohm", ec.resistance()},
                    {"L_x_H", ec.inductance()},
                    {"C_x_F", ec.capacitance()},
                    {"f0_Hz", ec.f0()},
                    {"quality_factor", ec.quality_factor()}};
  out["pierce"] = {{"c1_F", in.caps.c1},
                   {"c2_F", in.caps.c2},
                   {"c0_F", in.caps.c0},
                   {"gm_A_per_V", p.gm},
                   {"gm_roots_A_per_V", p.gm_roots},
                   {"gm_target_reached", p.gm_target_reached},
                   {"neg_resistance_ohm", p.neg_resistance},
                   {"re_max_ohm", p.re_max.re_max},
                   {"gm_opt_A_per_V", p.re_max.gm_opt}};
  out["startup"] = {{"margin", p.startup.margin},
                    {"max_margin", p.re_max.re_max / ec.resistance()},
                    {"meets_3x", p.startup.meets_3x},
                    {"oscillates", p.startup.oscillates}};
  json violations = json::array();
  for (const auto& v : p.violations) {
    violations.push_back({{"rule", v.rule}, {"measured", v.measured}, {"limit", v.limit}});
  }
  out["rule_violations"] = violations;
  json constraints = json::array();
  for (const auto& c : p.constraints) {
    constraints.push_back({{"name", c.name},
                           {"value", finite_or_null(c.value)},
                           {"limit", c.limit},
                           {"satisfied", c.satisfied},
                           {"excess", finite_or_null(c.excess)}});
  }
  out["constraints"] = constraints;
  return out;
}

std::vector<std::pair<std::string, std::string>> design_point_columns(const DesignPoint& p) {
  std::vector<std::pair<std::string, std::string>> cols;
  const auto num = [&](std::string name, double v) { cols.emplace_back(std::move(name), format_number(v)); };
  cols.emplace_back("feasible", p.feasible ? "1" : "0");
  const bool ok = !p.error && p.beam && p.circuit;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  num("beam.stiffness_N_m", ok ? p.beam->stiffness() : nan);
  num("beam.mass_kg", ok ? p.beam->mass() : nan);
  num("beam.f0_Hz", ok ? p.beam->f0() : nan);
  num("transducer.eta_N_per_V", ok ? p.eta : nan);
  num("electrostatics.v_pull_in_V", ok ? p.v_pull_in : nan);
  num("electrostatics.static_deflection_m", ok ? p.static_deflection : nan);
  num("transducer.displacement_limit_m", ok ? p.displacement_limit : nan);
  num("circuit.R_x_ohm", ok ? p.circuit->resistance() : nan);
  num("circuit.L_x_H", ok ? p.circuit->inductance() : nan);
  num("circuit.C_x_F", ok ? p.circuit->capacitance() : nan);
  num("pierce.gm_A_per_V", ok ? p.gm : nan);
  num("pierce.neg_resistance_ohm", ok ? p.neg_resistance : nan);
  num("pierce.re_max_ohm", ok ? p.re_max.re_max : nan);
  num("startup.margin", ok ? p.startup.margin : nan);
  num("startup.max_margin", ok ? p.re_max.re_max / p.circuit->resistance() : nan);
  std::string failing;
  for (const auto& c : p.constraints) {
    if (!c.satisfied) failing += (failing.empty() ? "" : ";") + c.name;
  }
  if (p.error) failing = "error";
  cols.emplace_back("violated", failing);
  return cols;
}

namespace {

// Quote fields containing separators.
std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

void write_design_point_csv(std::ostream& os, const DesignPoint& point) {
  const auto cols = design_point_columns(point);
  for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i].first;
  os << '\n';
  for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << csv_field(cols[i].second);
  os << '\n';
}

void write_trace_csv(std::ostream& os, const Trace& trace) {
  os << "t,v_in,v_out,x\n";
  for (std::size_t i = 0; i < trace.size(); ++i) {
    os << format_number(trace.time[i]) << ',' << format_number(trace.v_in[i]) << ','
       << format_number(trace.v_out[i]) << ',' << format_number(trace.x[i]) << '\n';
  }
}

void write_envelope_csv(std::ostream& os, std::span<const EnvelopePoint> env) {
  os << "t,amplitude\n";
  for (const auto& p : env) os << format_number(p.t) << ',' << format_number(p.amplitude) << '\n';
}

std::string trace_svg(const Trace& trace, std::span<const EnvelopePoint> env) {
  constexpr double kW = 960, kH = 420, kMargin = 50;
  std::ostringstream os;
  os << std::setprecision(6);
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH
     << "\" viewBox=\"0 0 " << kW << ' ' << kH << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (trace.size() < 2) {
    os << "</svg>\n";
    return os.str();
  }
  const double t0 = trace.time.front(), t1 = trace.time.back();
  double vmax = 0.0;
  for (double v : trace.v_out) vmax = std::max(vmax, std::abs(v));
  if (vmax == 0.0) vmax = 1.0;
  const auto px = [&](double t) { return kMargin + (t - t0) / (t1 - t0) * (kW - 2 * kMargin); };
  const auto py = [&](double v) { return kH / 2 - v / vmax * (kH / 2 - kMargin); };

  os << "<line x1=\"" << kMargin << "\" y1=\"" << kH / 2 << "\" x2=\"" << kW - kMargin
     << "\" y2=\"" << kH / 2 << "\" stroke=\"#999\"/>\n";
  // Min/max per pixel column keeps the oscillation band visible.
  const auto columns = static_cast<std::size_t>(kW - 2 * kMargin);
  const std::size_t per = std::max<std::size_t>(1, trace.size() / columns);
  os << "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"0.7\" points=\"";
  for (std::size_t i = 0; i < trace.size(); i += per) {
    const std::size_t end = std::min(trace.size(), i + per);
    const auto [lo, hi] = std::minmax_element(trace.v_out.begin() + static_cast<std::ptrdiff_t>(i),
                                              trace.v_out.begin() + static_cast<std::ptrdiff_t>(end));
    const double x = px(trace.time[i]);
    os << x << ',' << py(*lo) << ' ' << x << ',' << py(*hi) << ' ';
  }
  os << "\"/>\n";
  if (!env.empty()) {
    os << "<polyline fill=\"none\" stroke=\"#d62728\" stroke-width=\"1.2\" points=\"";
    for (const auto& e : env) os << px(e.t) << ',' << py(e.amplitude) << ' ';
    os << "\"/>\n";
  }
  os << "<text x=\"" << kMargin << "\" y=\"20\" font-family=\"sans-serif\" font-size=\"13\">"
     << "v_out(t), full scale " << vmax << " V, " << t1 - t0 << " s</text>\n";
  os << "</svg>\n";
  return os.str();
}

void write_sweep_csv(std::ostream& os, const SweepSpec& spec, std::span<const SweepRow> rows) {
  os << "index";
  for (const auto& a : spec.axes) os << ',' << a.path;
  os << ",objective";
  if (rows.empty()) {
    os << '\n';
    return;
  }
  for (const auto& c : design_point_columns(rows.front().point)) os << ',' << c.first;
  os << '\n';
  for (std::size_t i = 0; i < rows.size(); ++i) {
    os << i;
    for (double c : rows[i].coordinates) os << ',' << format_number(c);
    os << ',' << format_number(objective_value(rows[i].point, spec.objective));
    for (const auto& c : design_point_columns(rows[i].point)) os << ',' << csv_field(c.second);
    os << '\n';
  }
}

namespace {

json spec_json(const SweepSpec& spec) {
  json axes = json::array();
  for (const auto& a : spec.axes) {
    axes.push_back({{"path", a.path},
                    {"min", a.min},
                    {"max", a.max},
                    {"steps", a.steps},
                    {"scale", a.log_scale ? "log" : "linear"}});
  }
  return {{"axes", axes},
          {"objective", std::string(to_string(spec.objective))},
          {"grid_cap", spec.grid_cap}};
}

}  // namespace

json sweep_json(const SweepSpec& spec, std::span<const SweepRow> rows) {
  json out;
  out["spec"] = spec_json(spec);
  json arr = json::array();
  for (const auto& r : rows) {
    arr.push_back({{"coordinates", r.coordinates},
                   {"objective", finite_or_null(objective_value(r.point, spec.objective))},
                   {"point", design_point_json(r.point)}});
  }
  out["rows"] = arr;
  return out;
}

json optimize_json(const SweepSpec& spec, const OptimizeResult& result) {
  json out;
  out["spec"] = spec_json(spec);
  out["found"] = result.found;
  if (result.found) {
    out["best_coordinates"] = result.best_coordinates;
    out["best_objective"] = result.best_objective;
    out["grid_best_objective"] = result.grid_best_objective;
    out["best"] = design_point_json(*result.best);
  } else {
    out["most_violated"] = result.most_violated;
    out["most_violated_excess"] = finite_or_null(result.most_violated_excess);
  }
  out["evaluations"] = result.log.size();
  return out;
}

void write_search_log_csv(std::ostream& os, const SweepSpec& spec,
                          std::span<const SearchLogEntry> log) {
  os << "iteration,phase";
  for (const auto& a : spec.axes) os << ',' << a.path;
  os << ",objective,feasible,best_objective\n";
  for (const auto& e : log) {
    os << e.iteration << ',' << e.phase;
    for (double c : e.coordinates) os << ',' << format_number(c);
    os << ',' << format_number(e.objective) << ',' << (e.feasible ? 1 : 0) << ','
       << format_number(e.best_objective) << '\n';
  }
}

void write_comparison_text(std::ostream& os, const ComparisonReport& report) {
  os << std::left << std::setw(9) << "design" << std::setw(14) << "quantity" << std::setw(6)
     << "unit" << std::right << std::setw(12) << "published" << std::setw(12) << "computed"
     << std::setw(10) << "rel.err" << std::setw(8) << "tol" << "  status  note\n";
  for (const auto& r : report.rows) {
    os << std::left << std::setw(9) << r.design << std::setw(14) << r.quantity << std::setw(6)
       << r.unit << std::right << std::fixed << std::setprecision(4) << std::setw(12)
       << r.published << std::setw(12) << r.computed << std::setprecision(2) << std::setw(9)
       << r.rel_error * 100 << '%' << std::setw(7) << r.tolerance * 100 << '%' << "  "
       << std::left << std::setw(6) << to_string(r.status) << "  " << r.note << '\n';
    os.unsetf(std::ios::floatfield);
    os << std::right;
  }
  os << (report.all_pass() ? "all gating cells pass\n" : "comparison FAILED\n");
}

void write_comparison_csv(std::ostream& os, const ComparisonReport& report) {
  os << "design,quantity,unit,published,computed,rel_error,tolerance,status,note\n";
  for (const auto& r : report.rows) {
    os << r.design << ',' << r.quantity << ',' << r.unit << ',' << format_number(r.published)
       << ',' << format_number(r.computed) << ',' << format_number(r.rel_error) << ','
       << format_number(r.tolerance) << ',' << to_string(r.status) << ',' << csv_field(r.note)
       << '\n';
  }
}

json comparison_json(const ComparisonReport& report) {
  json rows = json::array();
  for (const auto& r : report.rows) {
    rows.push_back({{"design", r.design},
                    {"quantity", r.quantity},
                    {"unit", r.unit},
                    {"published", r.published},
                    {"computed", r.computed},
                    {"rel_error", r.rel_error},
                    {"tolerance", r.tolerance},
                    {"status", std::string(to_string(r.status))},
                    {"note", r.note}});
  }
  return {{"all_pass", report.all_pass()}, {"rows", rows}};
}

}  // namespace memsosc
