#include "memsosc/explore.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>
#include <thread>

#include "memsosc/error.hpp"

namespace memsosc {

namespace {

template <typename F>
void stage(const char* name, F&& body) {
  try {
    body();
  } catch (const Error& e) {
    throw Error(e.kind(), std::string(name) + ": " + e.what());
  }
}

ConstraintResult upper_bound(std::string name, double value, double limit, bool strict) {
  ConstraintResult c;
  c.name = std::move(name);
  c.value = value;
  c.limit = limit;
  c.satisfied = strict ? value < limit : value <= limit;
  c.excess = value / limit - 1.0;
  return c;
}

}  // namespace

DesignPoint evaluate(const DesignInputs& in) {
  DesignPoint p;
  p.inputs = in;

  stage("process", [&] {
    p.laminate = laminate_properties(in.laminate, in.materials);
    in.rules.validate();
    if (!(in.constraints.pull_in_safety > 0.0 && in.constraints.pull_in_safety <= 1.0)) {
      throw Error(ErrorKind::invalid_input, "pull-in safety factor must lie in (0, 1]");
    }
  });

  p.geometry = {in.anchor, in.length, in.width, p.laminate.thickness};
  p.transducer = {in.gap, in.electrode_length, p.laminate.thickness, in.bias, in.port};

  double k = 0.0;
  stage("mechanics", [&] {
    p.geometry.validate(in.materials.max_thickness());
    p.transducer.validate(p.geometry);
    k = spring_constant(p.geometry, p.laminate.youngs_modulus);
    const double m = lumped_mass(p.geometry, p.laminate.density, in.mass_model);
    p.beam.emplace(k, m, in.quality_factor);
    p.v_pull_in = pull_in_voltage(k, in.gap, electrode_area(p.transducer));
    try {
      p.static_deflection = static_deflection(k, p.transducer, in.constraints.deflection_mode);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::pull_in) throw;
      p.static_deflection = std::numeric_limits<double>::infinity();
    }
  });

  stage("transduction", [&] {
    p.eta = coupling_coefficient(p.transducer);
    p.circuit = extract_circuit(k, p.beam->mass(), in.quality_factor, p.eta);
    p.electrode_capacitance = electrode_capacitance(p.transducer);
    p.displacement_limit = displacement_limit(p.transducer);
  });

  stage("pierce", [&] {
    in.caps.validate();
    const double f0 = p.beam->f0();
    const double rx = p.circuit->resistance();
    p.re_max = max_negative_resistance(in.caps, f0);
    switch (in.gm.mode) {
      case GmChoice::Mode::fixed:
        if (!(in.gm.value > 0.0)) throw Error(ErrorKind::invalid_input, "fixed gm must be positive");
        p.gm = in.gm.value;
        p.gm_target_reached = true;
        break;
      case GmChoice::Mode::target_margin:
      case GmChoice::Mode::target_resistance: {
        double target = in.gm.value;
        if (in.gm.mode == GmChoice::Mode::target_margin) {
          // Aim a hair above the requested margin so that rounding in the
          // root cannot land the forward evaluation just under it.
          target = in.gm.value * rx * (1.0 + 1e-9);
        }
        p.gm_roots = required_gm(in.caps, f0, target);
        p.gm_target_reached = !p.gm_roots.empty();
        // Low root: least bias current. Without a root the best available
        // operating point is the peak.
        p.gm = p.gm_target_reached ? p.gm_roots.front() : p.re_max.gm_opt;
        break;
      }
    }
    p.neg_resistance = negative_resistance({in.caps, p.gm, f0});
    p.startup = startup_check(p.neg_resistance, rx);
  });

  p.violations = check_mems_rules(p.geometry, p.transducer, in.rules);

  const double alpha = in.constraints.pull_in_safety;
  p.constraints.push_back(upper_bound("pull_in", in.bias, alpha * p.v_pull_in, true));

  const double allowance =
      in.constraints.vibration_amplitude.value_or(
          std::max(0.0, p.displacement_limit - p.static_deflection));
  p.constraints.push_back(upper_bound("deflection", p.static_deflection + allowance,
                                      p.displacement_limit, false));

  ConstraintResult startup;
  startup.name = "startup";
  startup.value = p.startup.margin;
  startup.limit = kStartupMargin;
  startup.satisfied = p.startup.meets_3x;
  startup.excess = 1.0 - p.startup.margin / kStartupMargin;
  p.constraints.push_back(startup);

  for (const auto& v : p.violations) {
    ConstraintResult c;
    c.name = "rule:" + v.rule;
    c.value = v.measured;
    c.limit = v.limit;
    c.satisfied = false;
    c.excess = v.rule == "min_lateral_gap" ? v.limit / v.measured - 1.0 : v.measured / v.limit - 1.0;
    p.constraints.push_back(c);
  }

  p.feasible = std::all_of(p.constraints.begin(), p.constraints.end(),
                           [](const ConstraintResult& c) { return c.satisfied; });
  return p;
}

namespace {

struct Parameter {
  std::string_view path;
  std::function<double(const DesignInputs&)> get;
  std::function<void(DesignInputs&, double)> set;
};

const std::vector<Parameter>& parameters() {
  static const std::vector<Parameter> table = [] {
    std::vector<Parameter> t;
    const auto member = [&t](std::string_view path, auto ptr) {
      t.push_back({path, [ptr](const DesignInputs& in) { return in.*ptr; },
                   [ptr](DesignInputs& in, double v) { in.*ptr = v; }});
    };
    member("beam.length", &DesignInputs::length);
    member("beam.width", &DesignInputs::width);
    member("beam.quality_factor", &DesignInputs::quality_factor);
    member("transducer.gap", &DesignInputs::gap);
    member("transducer.electrode_length", &DesignInputs::electrode_length);
    member("transducer.bias", &DesignInputs::bias);
    t.push_back({"materials.youngs_modulus",
                 [](const DesignInputs& in) { return in.materials.youngs_modulus; },
                 [](DesignInputs& in, double v) { in.materials.youngs_modulus = v; }});
    t.push_back({"materials.density", [](const DesignInputs& in) { return in.materials.density; },
                 [](DesignInputs& in, double v) { in.materials.density = v; }});
    t.push_back({"materials.top_metal",
                 [](const DesignInputs& in) { return double(in.laminate.top_metal_index); },
                 [](DesignInputs& in, double v) {
                   in.laminate.top_metal_index = static_cast<int>(std::lround(v));
                 }});
    t.push_back({"pierce.c1", [](const DesignInputs& in) { return in.caps.c1; },
                 [](DesignInputs& in, double v) { in.caps.c1 = v; }});
    t.push_back({"pierce.c2", [](const DesignInputs& in) { return in.caps.c2; },
                 [](DesignInputs& in, double v) { in.caps.c2 = v; }});
    t.push_back({"pierce.c0", [](const DesignInputs& in) { return in.caps.c0; },
                 [](DesignInputs& in, double v) { in.caps.c0 = v; }});
    t.push_back({"pierce.gm",
                 [](const DesignInputs& in) {
                   return in.gm.mode == GmChoice::Mode::fixed
                              ? in.gm.value
                              : std::numeric_limits<double>::quiet_NaN();
                 },
                 [](DesignInputs& in, double v) { in.gm = GmChoice::fixed(v); }});
    t.push_back({"pierce.target_margin",
                 [](const DesignInputs& in) {
                   return in.gm.mode == GmChoice::Mode::target_margin
                              ? in.gm.value
                              : std::numeric_limits<double>::quiet_NaN();
                 },
                 [](DesignInputs& in, double v) { in.gm = GmChoice::margin(v); }});
    t.push_back({"explore.pull_in_safety",
                 [](const DesignInputs& in) { return in.constraints.pull_in_safety; },
                 [](DesignInputs& in, double v) { in.constraints.pull_in_safety = v; }});
    return t;
  }();
  return table;
}

const Parameter& find_parameter(std::string_view path) {
  for (const auto& p : parameters()) {
    if (p.path == path) return p;
  }
  throw Error(ErrorKind::invalid_input, "unknown parameter path '" + std::string(path) + "'");
}

}  // namespace

std::vector<std::string_view> parameter_paths() {
  std::vector<std::string_view> out;
  for (const auto& p : parameters()) out.push_back(p.path);
  return out;
}

bool is_parameter_path(std::string_view path) {
  const auto& ps = parameters();
  return std::any_of(ps.begin(), ps.end(), [&](const Parameter& p) { return p.path == path; });
}

double get_parameter(const DesignInputs& inputs, std::string_view path) {
  return find_parameter(path).get(inputs);
}

void set_parameter(DesignInputs& inputs, std::string_view path, double value) {
  find_parameter(path).set(inputs, value);
}

std::string_view to_string(Objective objective) {
  switch (objective) {
    case Objective::startup_margin: return "startup_margin";
    case Objective::min_rx: return "min_Rx";
    case Objective::max_f0: return "max_f0";
  }
  return "unknown";
}

Objective objective_from_string(std::string_view name) {
  if (name == "startup_margin") return Objective::startup_margin;
  if (name == "min_Rx" || name == "min_rx") return Objective::min_rx;
  if (name == "max_f0") return Objective::max_f0;
  throw Error(ErrorKind::invalid_input, "unknown objective '" + std::string(name) + "'");
}

std::vector<double> SweepAxis::values() const {
  std::vector<double> out(static_cast<std::size_t>(steps));
  for (int i = 0; i < steps; ++i) {
    const double u = static_cast<double>(i) / static_cast<double>(steps - 1);
    out[static_cast<std::size_t>(i)] =
        log_scale ? std::exp(std::log(min) + u * (std::log(max) - std::log(min)))
                  : min + u * (max - min);
  }
  out.front() = min;
  out.back() = max;
  return out;
}

void SweepSpec::validate() const {
  for (const auto& a : axes) {
    if (!is_parameter_path(a.path)) {
      throw Error(ErrorKind::invalid_input, "unknown sweep axis path '" + a.path + "'");
    }
    if (a.steps < 2) throw Error(ErrorKind::invalid_input, "axis '" + a.path + "' needs steps >= 2");
    if (!(a.min < a.max) || !std::isfinite(a.min) || !std::isfinite(a.max)) {
      throw Error(ErrorKind::invalid_input, "axis '" + a.path + "' needs finite min < max");
    }
    if (a.log_scale && !(a.min > 0.0)) {
      throw Error(ErrorKind::invalid_input, "log axis '" + a.path + "' needs min > 0");
    }
  }
}

std::size_t SweepSpec::grid_size() const {
  double n = 1.0;
  for (const auto& a : axes) n *= static_cast<double>(a.steps);
  return n > 1e18 ? std::numeric_limits<std::size_t>::max() : static_cast<std::size_t>(n);
}

namespace {

DesignPoint evaluate_or_flag(const DesignInputs& inputs) {
  try {
    return evaluate(inputs);
  } catch (const Error& e) {
    DesignPoint p;
    p.inputs = inputs;
    p.feasible = false;
    p.error = e.what();
    return p;
  }
}

}  // namespace

std::vector<SweepRow> sweep(const DesignInputs& base, const SweepSpec& spec, unsigned threads) {
  spec.validate();
  const std::size_t n = spec.grid_size();
  if (n > spec.grid_cap) {
    std::ostringstream os;
    os << "sweep grid of " << n << " points exceeds the cap of " << spec.grid_cap;
    throw Error(ErrorKind::refused, os.str());
  }
  std::vector<std::vector<double>> values;
  for (const auto& a : spec.axes) values.push_back(a.values());

  std::vector<SweepRow> rows(n);
  const auto run = [&](std::size_t i) {
    std::vector<double> coords(values.size());
    std::size_t rem = i;
    for (std::size_t d = values.size(); d-- > 0;) {
      coords[d] = values[d][rem % values[d].size()];
      rem /= values[d].size();
    }
    DesignInputs in = base;
    for (std::size_t d = 0; d < coords.size(); ++d) set_parameter(in, spec.axes[d].path, coords[d]);
    rows[i] = {std::move(coords), evaluate_or_flag(in)};
  };

  unsigned workers = threads != 0 ? threads : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, n));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) run(i);
    return rows;
  }
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < n; i += workers) run(i);
    });
  }
  pool.clear();  // joins
  return rows;
}

double objective_value(const DesignPoint& point, Objective objective) {
  if (point.error || !point.circuit) return std::numeric_limits<double>::quiet_NaN();
  switch (objective) {
    case Objective::startup_margin: return point.re_max.re_max / point.circuit->resistance();
    case Objective::min_rx: return point.circuit->resistance();
    case Objective::max_f0: return point.beam->f0();
  }
  return std::numeric_limits<double>::quiet_NaN();
}

double objective_score(const DesignPoint& point, Objective objective) {
  const double v = objective_value(point, objective);
  if (std::isnan(v)) return -std::numeric_limits<double>::infinity();
  return objective == Objective::min_rx ? -v : v;
}

namespace {

double to_axis(const SweepAxis& a, double u) {
  return a.log_scale ? std::exp(std::log(a.min) + u * (std::log(a.max) - std::log(a.min)))
                     : a.min + u * (a.max - a.min);
}

double to_unit(const SweepAxis& a, double v) {
  return a.log_scale ? (std::log(v) - std::log(a.min)) / (std::log(a.max) - std::log(a.min))
                     : (v - a.min) / (a.max - a.min);
}

double max_excess(const DesignPoint& p) {
  double worst = -std::numeric_limits<double>::infinity();
  for (const auto& c : p.constraints) worst = std::max(worst, c.excess);
  return worst;
}

}  // namespace

OptimizeResult optimize(const DesignInputs& base, const SweepSpec& spec,
                        const OptimizeOptions& options) {
  spec.validate();
  OptimizeResult result;
  const std::size_t dims = spec.axes.size();
  const double inf = std::numeric_limits<double>::infinity();

  SweepSpec coarse = spec;
  for (auto& a : coarse.axes) a.steps = std::clamp(a.steps, 2, std::max(2, options.max_grid_steps));
  const auto grid = sweep(base, coarse);

  int iteration = 0;
  double best_score = -inf;
  std::size_t best_index = grid.size();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto& row = grid[i];
    const double score = row.point.feasible ? objective_score(row.point, spec.objective) : -inf;
    if (score > best_score) {
      best_score = score;
      best_index = i;
    }
    result.log.push_back({iteration++, "grid", row.coordinates,
                          objective_value(row.point, spec.objective), row.point.feasible,
                          best_index < grid.size()
                              ? objective_value(grid[best_index].point, spec.objective)
                              : std::numeric_limits<double>::quiet_NaN()});
  }

  if (best_index == grid.size()) {
    // Infeasible problem: report what blocks the grid point closest to
    // feasibility.
    double closest = inf;
    for (const auto& row : grid) {
      if (row.point.error) continue;
      const double e = max_excess(row.point);
      if (e < closest) {
        closest = e;
        for (const auto& c : row.point.constraints) {
          if (c.excess == e) result.most_violated = c.name;
        }
      }
    }
    if (result.most_violated.empty()) {
      result.most_violated = grid.empty() || !grid.front().point.error
                                 ? std::string("unknown")
                                 : "invalid_input: " + *grid.front().point.error;
    } else {
      result.most_violated_excess = closest;
    }
    return result;
  }

  const auto& seed_row = grid[best_index];
  result.found = true;
  result.best = seed_row.point;
  result.best_coordinates = seed_row.coordinates;
  result.grid_best_objective = objective_value(seed_row.point, spec.objective);
  result.best_objective = result.grid_best_objective;
  if (dims == 0) return result;

  // Multi-directional simplex search in the unit cube. Trial points that are
  // out of range, infeasible or fail to evaluate score -inf (rejected).
  struct Vertex {
    std::vector<double> u;
    double score;
  };
  const auto trial = [&](const std::vector<double>& u) -> double {
    for (double c : u) {
      if (!(c >= 0.0 && c <= 1.0)) return -inf;
    }
    DesignInputs in = base;
    std::vector<double> coords(dims);
    for (std::size_t d = 0; d < dims; ++d) {
      coords[d] = to_axis(spec.axes[d], u[d]);
      set_parameter(in, spec.axes[d].path, coords[d]);
    }
    const DesignPoint p = evaluate_or_flag(in);
    const double score = p.feasible ? objective_score(p, spec.objective) : -inf;
    if (score > best_score) {
      best_score = score;
      result.best = p;
      result.best_coordinates = coords;
      result.best_objective = objective_value(p, spec.objective);
    }
    result.log.push_back({iteration++, "simplex", coords, objective_value(p, spec.objective),
                          p.feasible, result.best_objective});
    return score;
  };

  std::vector<Vertex> simplex;
  std::vector<double> u0(dims);
  for (std::size_t d = 0; d < dims; ++d) u0[d] = to_unit(spec.axes[d], seed_row.coordinates[d]);
  simplex.push_back({u0, best_score});
  for (std::size_t d = 0; d < dims; ++d) {
    const double h = 0.5 / static_cast<double>(coarse.axes[d].steps - 1);
    auto u = u0;
    u[d] += (u[d] + h <= 1.0) ? h : -h;
    simplex.push_back({u, trial(u)});
  }

  const auto order = [&] {
    std::stable_sort(simplex.begin(), simplex.end(),
                     [](const Vertex& a, const Vertex& b) { return a.score > b.score; });
  };
  const auto size = [&] {
    double s = 0.0;
    for (std::size_t i = 1; i < simplex.size(); ++i) {
      for (std::size_t d = 0; d < dims; ++d) {
        s = std::max(s, std::abs(simplex[i].u[d] - simplex[0].u[d]));
      }
    }
    return s;
  };
  const auto transform = [&](double factor) {
    std::vector<Vertex> out{simplex[0]};
    for (std::size_t i = 1; i < simplex.size(); ++i) {
      std::vector<double> u(dims);
      for (std::size_t d = 0; d < dims; ++d) {
        u[d] = simplex[0].u[d] + factor * (simplex[i].u[d] - simplex[0].u[d]);
      }
      out.push_back({u, trial(u)});
    }
    return out;
  };
  const auto best_of = [](const std::vector<Vertex>& vs) {
    double s = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < vs.size(); ++i) s = std::max(s, vs[i].score);
    return s;
  };

  order();
  const int budget = iteration + options.max_iterations;
  while (iteration < budget && size() > options.simplex_tolerance) {
    auto reflected = transform(-1.0);
    if (best_of(reflected) > simplex[0].score) {
      auto expanded = transform(-2.0);
      simplex = best_of(expanded) > best_of(reflected) ? std::move(expanded) : std::move(reflected);
    } else {
      simplex = transform(0.5);
    }
    order();
  }
  return result;
}

}  // namespace memsosc
