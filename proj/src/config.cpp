#include "memsosc/config.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "memsosc/error.hpp"

namespace memsosc {

using nlohmann::json;

namespace {

[[noreturn]] void schema_error(const std::string& path, const std::string& what) {
  throw Error(ErrorKind::config, "config " + path + ": " + what);
}

enum class Range { any, positive, non_negative };

/// One JSON object of the config. Every key read is recorded so that
/// `finish` can reject the rest as unknown.
class Block {
 public:
  Block(const json& doc, std::string path) : doc_(doc), path_(std::move(path)) {
    if (!doc_.is_object()) schema_error(path_, "must be an object");
  }

  bool has(const std::string& key) {
    seen_.insert(key);
    return doc_.contains(key);
  }

  double number(const std::string& key, double fallback, Range range = Range::positive) {
    if (!has(key)) return fallback;
    return checked_number(key, doc_.at(key), range);
  }

  /// Number, or null meaning +infinity (open circuit).
  double number_or_infinite(const std::string& key, double fallback) {
    if (!has(key)) return fallback;
    if (doc_.at(key).is_null()) return std::numeric_limits<double>::infinity();
    return checked_number(key, doc_.at(key), Range::positive);
  }

  /// Number, or the string "auto" meaning unset.
  std::optional<double> number_or_auto(const std::string& key) {
    if (!has(key)) return std::nullopt;
    const auto& v = doc_.at(key);
    if (v.is_string() && v.get<std::string>() == "auto") return std::nullopt;
    return checked_number(key, v, Range::positive);
  }

  std::int64_t integer(const std::string& key, std::int64_t fallback, std::int64_t lo,
                       std::int64_t hi) {
    if (!has(key)) return fallback;
    const auto& v = doc_.at(key);
    if (!v.is_number_integer()) schema_error(at(key), "must be an integer");
    const auto i = v.get<std::int64_t>();
    if (i < lo || i > hi) {
      std::ostringstream os;
      os << "must lie in " << lo << ".." << hi << " (got " << i << ")";
      schema_error(at(key), os.str());
    }
    return i;
  }

  bool flag(const std::string& key, bool fallback) {
    if (!has(key)) return fallback;
    if (!doc_.at(key).is_boolean()) schema_error(at(key), "must be true or false");
    return doc_.at(key).get<bool>();
  }

  std::string choice(const std::string& key, const std::string& fallback,
                     std::initializer_list<std::string_view> allowed) {
    if (!has(key)) return fallback;
    const auto& v = doc_.at(key);
    if (!v.is_string()) schema_error(at(key), "must be a string");
    const auto s = v.get<std::string>();
    for (auto a : allowed) {
      if (s == a) return s;
    }
    std::string list;
    for (auto a : allowed) list += (list.empty() ? "" : ", ") + std::string(a);
    schema_error(at(key), "must be one of {" + list + "} (got '" + s + "')");
  }

  std::string string(const std::string& key, const std::string& fallback) {
    if (!has(key)) return fallback;
    if (!doc_.at(key).is_string()) schema_error(at(key), "must be a string");
    return doc_.at(key).get<std::string>();
  }

  std::optional<Block> child(const std::string& key) {
    if (!has(key)) return std::nullopt;
    return Block(doc_.at(key), at(key));
  }

  const json& raw(const std::string& key) {
    seen_.insert(key);
    return doc_.at(key);
  }

  std::string at(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  void finish() const {
    for (auto it = doc_.begin(); it != doc_.end(); ++it) {
      if (!seen_.count(it.key())) schema_error(at(it.key()), "unknown key");
    }
  }

 private:
  double checked_number(const std::string& key, const json& v, Range range) const {
    if (!v.is_number()) schema_error(at(key), "must be a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) schema_error(at(key), "must be finite");
    if (range == Range::positive && !(d > 0.0)) {
      schema_error(at(key), "must be positive (got " + v.dump() + ")");
    }
    if (range == Range::non_negative && d < 0.0) {
      schema_error(at(key), "must be non-negative (got " + v.dump() + ")");
    }
    return d;
  }

  const json& doc_;
  std::string path_;
  std::set<std::string> seen_;
};

void read_thickness_table(Block& b, const std::string& key,
                          std::array<double, kMaxStructuralMetals>& table) {
  if (!b.has(key)) return;
  const auto& v = b.raw(key);
  if (!v.is_array() || v.size() != table.size()) {
    schema_error(b.at(key), "must be an array of 4 thicknesses");
  }
  for (std::size_t i = 0; i < table.size(); ++i) {
    if (!v[i].is_number() || !(v[i].get<double>() > 0.0)) {
      schema_error(b.at(key), "entries must be positive numbers");
    }
    table[i] = v[i].get<double>();
  }
}

}  // namespace

SimConfig SimSettings::resolve(double f0) const {
  SimConfig s = SimConfig::defaults_for(f0);
  if (dt) s.dt = *dt;
  if (duration) s.duration = *duration;
  s.noise_seed = seed;
  s.initial_kick = initial_kick;
  s.v_limit = v_limit;
  s.r_feedback = r_feedback;
  s.r_output = r_output;
  s.stride = stride;
  return s;
}

ProjectConfig parse_config(const json& doc) {
  ProjectConfig cfg;
  Block root(doc, "");
  cfg.name = root.string("name", "design");
  auto& d = cfg.design;

  if (auto b = root.child("materials")) {
    d.materials.youngs_modulus = b->number("youngs_modulus", d.materials.youngs_modulus);
    d.materials.density = b->number("density", d.materials.density);
    d.laminate.top_metal_index = static_cast<int>(
        b->integer("top_metal", d.laminate.top_metal_index, 1, kMaxStructuralMetals));
    d.laminate.include_dielectric = b->flag("include_dielectric", d.laminate.include_dielectric);
    read_thickness_table(*b, "stack_thickness", d.materials.stack_thickness);
    read_thickness_table(*b, "metal_only_thickness", d.materials.metal_only_thickness);
    d.mass_model = b->choice("mass_model", "lumped", {"lumped", "modal"}) == "modal"
                       ? MassModel::modal
                       : MassModel::lumped;
    b->finish();
    try {
      d.materials.validate();
    } catch (const Error& e) {
      schema_error("materials", e.what());
    }
  }

  if (auto b = root.child("rules")) {
    d.rules.min_lateral_gap = b->number("min_lateral_gap", d.rules.min_lateral_gap);
    d.rules.max_release_width = b->number("max_release_width", d.rules.max_release_width);
    d.rules.require_metal_cover = b->flag("require_metal_cover", d.rules.require_metal_cover);
    d.rules.max_stack_thickness = b->number("max_stack_thickness", d.rules.max_stack_thickness);
    b->finish();
  }

  if (auto b = root.child("beam")) {
    d.anchor = b->choice("anchor", "cantilever", {"cantilever", "clamped_clamped"}) == "cantilever"
                   ? Anchor::cantilever
                   : Anchor::clamped_clamped;
    d.length = b->number("length", d.length);
    d.width = b->number("width", d.width);
    d.quality_factor = b->number("quality_factor", d.quality_factor);
    b->finish();
    if (!(d.length > d.width)) schema_error("beam", "length must exceed width");
  }

  if (auto b = root.child("transducer")) {
    d.gap = b->number("gap", d.gap);
    d.electrode_length = b->number("electrode_length", d.electrode_length);
    d.bias = b->number("bias", d.bias, Range::non_negative);
    d.port = b->choice("port", "one_port", {"one_port", "two_port"}) == "one_port" ? Port::one_port
                                                                                   : Port::two_port;
    b->finish();
  }

  if (auto b = root.child("pierce")) {
    d.caps.c1 = b->number("c1", d.caps.c1);
    d.caps.c2 = b->number("c2", d.caps.c2);
    d.caps.c0 = b->number("c0", d.caps.c0);
    const bool has_margin = b->has("target_margin");
    const bool has_target = b->has("target_neg_resistance");
    bool fixed = false;
    if (b->has("gm")) {
      const auto& gm = b->raw("gm");
      if (gm.is_string()) {
        if (gm.get<std::string>() != "auto") schema_error(b->at("gm"), "must be a number or \"auto\"");
      } else {
        d.gm = GmChoice::fixed(b->number("gm", 0.0));
        fixed = true;
      }
    }
    if (fixed && (has_margin || has_target)) {
      schema_error("pierce", "targets only apply when gm is \"auto\"");
    }
    if (has_margin && has_target) {
      schema_error("pierce", "give either target_margin or target_neg_resistance, not both");
    }
    if (has_target) d.gm = GmChoice::resistance(b->number("target_neg_resistance", 0.0));
    if (has_margin) d.gm = GmChoice::margin(b->number("target_margin", kStartupMargin));
    b->finish();
  }

  if (auto b = root.child("sim")) {
    auto& s = cfg.sim;
    s.dt = b->number_or_auto("dt");
    s.duration = b->number_or_auto("duration");
    s.seed = static_cast<std::uint64_t>(
        b->integer("seed", static_cast<std::int64_t>(s.seed), 0,
                   std::numeric_limits<std::int64_t>::max()));
    s.initial_kick = b->number("initial_kick", s.initial_kick, Range::non_negative);
    s.v_limit = b->number_or_infinite("v_limit", s.v_limit);
    s.r_feedback = b->number_or_infinite("r_feedback", s.r_feedback);
    s.r_output = b->number_or_infinite("r_output", s.r_output);
    s.stride = static_cast<std::size_t>(b->integer("stride", static_cast<std::int64_t>(s.stride), 1, 1'000'000));
    b->finish();
  }

  if (auto b = root.child("explore")) {
    auto& c = d.constraints;
    c.pull_in_safety = b->number("pull_in_safety", c.pull_in_safety);
    if (c.pull_in_safety > 1.0) schema_error("explore.pull_in_safety", "must not exceed 1");
    c.deflection_mode =
        b->choice("deflection_mode", "linearized", {"linearized", "nonlinear"}) == "nonlinear"
            ? DeflectionMode::nonlinear
            : DeflectionMode::linearized;
    if (b->has("vibration_amplitude") && !b->raw("vibration_amplitude").is_null()) {
      c.vibration_amplitude = b->number("vibration_amplitude", 0.0, Range::non_negative);
    }
    b->finish();
  }

  root.finish();
  return cfg;
}

std::string read_file(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw Error(ErrorKind::config, "cannot read '" + file.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

namespace {

json parse_json_text(const std::string& text, const std::filesystem::path& file) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::config, "'" + file.string() + "' is not valid JSON: " + e.what());
  }
}

}  // namespace

void apply_override(json& doc, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos || eq == 0) {
    throw Error(ErrorKind::config, "override '" + std::string(assignment) + "' is not path=value");
  }
  const std::string path(assignment.substr(0, eq));
  const std::string text(assignment.substr(eq + 1));
  json value;
  try {
    value = json::parse(text);
  } catch (const json::parse_error&) {
    value = text;
  }
  json* node = &doc;
  std::size_t start = 0;
  while (true) {
    const auto dot = path.find('.', start);
    const std::string key = path.substr(start, dot == std::string::npos ? dot : dot - start);
    if (key.empty()) throw Error(ErrorKind::config, "override path '" + path + "' is malformed");
    if (!node->is_object()) throw Error(ErrorKind::config, "override path '" + path + "' crosses a non-object");
    if (dot == std::string::npos) {
      (*node)[key] = value;
      return;
    }
    node = &(*node)[key];
    if (node->is_null()) *node = json::object();
    start = dot + 1;
  }
}

ProjectConfig load_config(const std::filesystem::path& file,
                          std::span<const std::string> overrides) {
  json doc = parse_json_text(read_file(file), file);
  for (const auto& o : overrides) apply_override(doc, o);
  return parse_config(doc);
}

json to_json(const ProjectConfig& config) {
  const auto& d = config.design;
  const auto finite_or_null = [](double v) { return std::isinf(v) ? json(nullptr) : json(v); };
  json pierce = {{"c1", d.caps.c1}, {"c2", d.caps.c2}, {"c0", d.caps.c0}};
  switch (d.gm.mode) {
    case GmChoice::Mode::fixed: pierce["gm"] = d.gm.value; break;
    case GmChoice::Mode::target_margin:
      pierce["gm"] = "auto";
      pierce["target_margin"] = d.gm.value;
      break;
    case GmChoice::Mode::target_resistance:
      pierce["gm"] = "auto";
      pierce["target_neg_resistance"] = d.gm.value;
      break;
  }
  const auto& s = config.sim;
  return {
      {"name", config.name},
      {"materials",
       {{"youngs_modulus", d.materials.youngs_modulus},
        {"density", d.materials.density},
        {"top_metal", d.laminate.top_metal_index},
        {"include_dielectric", d.laminate.include_dielectric},
        {"stack_thickness", d.materials.stack_thickness},
        {"metal_only_thickness", d.materials.metal_only_thickness},
        {"mass_model", d.mass_model == MassModel::lumped ? "lumped" : "modal"}}},
      {"rules",
       {{"min_lateral_gap", d.rules.min_lateral_gap},
        {"max_release_width", d.rules.max_release_width},
        {"require_metal_cover", d.rules.require_metal_cover},
        {"max_stack_thickness", d.rules.max_stack_thickness}}},
      {"beam",
       {{"anchor", std::string(to_string(d.anchor))},
        {"length", d.length},
        {"width", d.width},
        {"quality_factor", d.quality_factor}}},
      {"transducer",
       {{"gap", d.gap},
        {"electrode_length", d.electrode_length},
        {"bias", d.bias},
        {"port", std::string(to_string(d.port))}}},
      {"pierce", pierce},
      {"sim",
       {{"dt", s.dt ? json(*s.dt) : json("auto")},
        {"duration", s.duration ? json(*s.duration) : json("auto")},
        {"seed", s.seed},
        {"initial_kick", s.initial_kick},
        {"v_limit", finite_or_null(s.v_limit)},
        {"r_feedback", finite_or_null(s.r_feedback)},
        {"r_output", finite_or_null(s.r_output)},
        {"stride", s.stride}}},
      {"explore",
       {{"pull_in_safety", d.constraints.pull_in_safety},
        {"deflection_mode",
         d.constraints.deflection_mode == DeflectionMode::linearized ? "linearized" : "nonlinear"},
        {"vibration_amplitude", d.constraints.vibration_amplitude
                                    ? json(*d.constraints.vibration_amplitude)
                                    : json(nullptr)}}},
  };
}

SweepSpec parse_sweep_spec(const json& doc) {
  SweepSpec spec;
  Block root(doc, "spec");
  if (root.has("axes")) {
    const auto& axes = root.raw("axes");
    if (!axes.is_array()) schema_error("spec.axes", "must be an array");
    for (std::size_t i = 0; i < axes.size(); ++i) {
      Block a(axes[i], "spec.axes[" + std::to_string(i) + "]");
      SweepAxis axis;
      axis.path = a.string("path", "");
      if (!is_parameter_path(axis.path)) schema_error(a.at("path"), "unknown parameter '" + axis.path + "'");
      axis.min = a.number("min", 0.0, Range::any);
      axis.max = a.number("max", 0.0, Range::any);
      axis.steps = static_cast<int>(a.integer("steps", 2, 2, 1'000'000));
      axis.log_scale = a.choice("scale", "linear", {"linear", "log"}) == "log";
      a.finish();
      spec.axes.push_back(axis);
    }
  }
  const auto objective = root.choice("objective", "startup_margin",
                                     {"startup_margin", "min_Rx", "max_f0"});
  spec.objective = objective_from_string(objective);
  spec.grid_cap = static_cast<std::size_t>(
      root.integer("grid_cap", static_cast<std::int64_t>(spec.grid_cap), 1,
                   std::numeric_limits<std::int64_t>::max()));
  root.finish();
  try {
    spec.validate();
  } catch (const Error& e) {
    schema_error("spec", e.what());
  }
  return spec;
}

SweepSpec load_sweep_spec(const std::filesystem::path& file) {
  return parse_sweep_spec(parse_json_text(read_file(file), file));
}

}  // namespace memsosc
