#include "memsosc/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>
#include <vector>

#include <CLI11.hpp>
#include <openssl/evp.h>

#include "memsosc/config.hpp"
#include "memsosc/error.hpp"
#include "memsosc/reference.hpp"
#include "memsosc/report.hpp"

#ifndef MEMSOSC_VERSION
#define MEMSOSC_VERSION "0.0.0"
#endif

namespace memsosc {

namespace fs = std::filesystem;
using nlohmann::json;

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error(ErrorKind::numerical, "SHA-256 digest failed");
  }
  std::ostringstream os;
  for (unsigned int i = 0; i < len; ++i) {
    os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
  }
  return os.str();
}

namespace {

struct GlobalOptions {
  std::string config;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  std::string format = "json";
  std::vector<std::string> sets;
};

/// Collects output files in memory so nothing touches the disk until every
/// input has been validated and every computation has succeeded.
class OutputSet {
 public:
  void add(std::string name, std::string content) {
    files_.emplace_back(std::move(name), std::move(content));
  }

  std::vector<std::string> names() const {
    std::vector<std::string> n;
    for (const auto& f : files_) n.push_back(f.first);
    return n;
  }

  void write(const fs::path& dir) const {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw Error(ErrorKind::config, "cannot create '" + dir.string() + "': " + ec.message());
    for (const auto& [name, content] : files_) {
      std::ofstream os(dir / name, std::ios::binary);
      os << content;
      if (!os) throw Error(ErrorKind::config, "cannot write '" + (dir / name).string() + "'");
    }
  }

 private:
  std::vector<std::pair<std::string, std::string>> files_;
};

std::string dump(const json& j) { return j.dump(2) + "\n"; }

template <typename Fn>
std::string render(Fn&& fn) {
  std::ostringstream os;
  fn(os);
  return os.str();
}

ProjectConfig require_config(const GlobalOptions& g) {
  if (g.config.empty()) throw Error(ErrorKind::config, "--config is required for this command");
  ProjectConfig cfg = load_config(g.config, g.sets);
  if (g.seed) cfg.sim.seed = *g.seed;
  return cfg;
}

void require_out(const GlobalOptions& g) {
  if (g.out_dir.empty()) throw Error(ErrorKind::config, "--out is required for this command");
}

json manifest(const GlobalOptions& g, std::string_view command, const ProjectConfig& cfg,
              const std::string* spec_path, const std::vector<std::string>& outputs) {
  json m;
  m["tool"] = "memsosc";
  m["version"] = MEMSOSC_VERSION;
  m["command"] = command;
  m["config"] = {{"path", g.config}, {"sha256", sha256_hex(read_file(g.config))}};
  m["overrides"] = g.sets;
  m["spec"] = spec_path ? json{{"path", *spec_path}, {"sha256", sha256_hex(read_file(*spec_path))}}
                        : json(nullptr);
  m["seed"] = cfg.sim.seed;
  m["outputs"] = outputs;
  return m;
}

/// Worst constraint among rows that evaluated, or the first error.
std::string most_violated(std::span<const SweepRow> rows) {
  double worst_of_best = std::numeric_limits<double>::infinity();
  std::string name;
  for (const auto& r : rows) {
    if (r.point.error) continue;
    double worst = -std::numeric_limits<double>::infinity();
    std::string local;
    for (const auto& c : r.point.constraints) {
      if (c.excess > worst) {
        worst = c.excess;
        local = c.name;
      }
    }
    if (worst < worst_of_best) {
      worst_of_best = worst;
      name = local;
    }
  }
  if (name.empty() && !rows.empty() && rows.front().point.error) return *rows.front().point.error;
  return name;
}

int cmd_analyze(const GlobalOptions& g, std::ostream& out, std::ostream& err) {
  const ProjectConfig cfg = require_config(g);
  const DesignPoint p = evaluate(cfg.design);
  json report = design_point_json(p);
  report["name"] = cfg.name;
  const std::string csv = render([&](std::ostream& os) { write_design_point_csv(os, p); });
  out << (g.format == "csv" ? csv : dump(report));
  if (!g.out_dir.empty()) {
    OutputSet files;
    files.add("analysis.json", dump(report));
    files.add("analysis.csv", csv);
    files.write(g.out_dir);
  }
  if (!p.feasible) {
    for (const auto& c : p.constraints) {
      if (!c.satisfied) err << "infeasible: constraint '" << c.name << "' violated\n";
    }
    return kExitInfeasible;
  }
  return kExitOk;
}

int cmd_table1(const GlobalOptions& g, std::optional<double> rho, std::ostream& out) {
  ComparisonOptions opts;
  opts.density = rho;
  const ComparisonReport report = compare_reference_designs(opts);
  write_comparison_text(out, report);
  if (!g.out_dir.empty()) {
    OutputSet files;
    files.add("table1.csv", render([&](std::ostream& os) { write_comparison_csv(os, report); }));
    files.add("table1.json", dump(comparison_json(report)));
    files.write(g.out_dir);
  }
  return report.all_pass() ? kExitOk : kExitInfeasible;
}

double window_peak(std::span<const double> v, bool head, double fraction) {
  const auto n = std::max<std::size_t>(1, static_cast<std::size_t>(fraction * static_cast<double>(v.size())));
  const auto part = head ? v.first(std::min(n, v.size())) : v.last(std::min(n, v.size()));
  double peak = 0.0;
  for (double x : part) peak = std::max(peak, std::abs(x));
  return peak;
}

int cmd_simulate(const GlobalOptions& g, std::optional<double> gm_override, bool svg,
                 std::ostream& out) {
  const ProjectConfig cfg = require_config(g);
  require_out(g);
  if (gm_override && !(*gm_override >= 0.0 && std::isfinite(*gm_override))) {
    throw Error(ErrorKind::invalid_input, "--gm must be a finite value >= 0");
  }
  const DesignPoint p = evaluate(cfg.design);
  const double f0 = p.beam->f0();
  const double gm = gm_override.value_or(p.gm);
  const PierceConfig pc{cfg.design.caps, gm, f0};
  const SimConfig sim = cfg.sim.resolve(f0);

  Trace trace;
  try {
    trace = simulate_startup(*p.circuit, pc, sim, p.eta, p.displacement_limit);
  } catch (const Error& e) {
    throw Error(e.kind(), std::string("simulate: ") + e.what());
  }
  // A decayed run may not cross zero often enough to have an envelope.
  std::vector<EnvelopePoint> env;
  try {
    env = envelope(trace.time, trace.v_out);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::insufficient_data) throw;
  }

  std::string status = "oscillating";
  if (trace.pulled_in) {
    status = "pull_in";
  } else if (window_peak(trace.v_in, false, 0.05) <= window_peak(trace.v_in, true, 0.05)) {
    status = "decayed";
  }
  json summary;
  summary["status"] = status;
  summary["pulled_in"] = trace.pulled_in;
  summary["f0_Hz"] = f0;
  summary["frequency_Hz"] = nullptr;
  if (status == "oscillating") {
    try {
      summary["frequency_Hz"] = measure_frequency(trace);
    } catch (const Error&) {
    }
  }
  try {
    summary["growth_rate_per_s"] = growth_rate(trace);
  } catch (const Error&) {
    summary["growth_rate_per_s"] = nullptr;
  }
  const double re = negative_resistance(pc);
  summary["predicted_growth_rate_per_s"] =
      (re - p.circuit->resistance()) / (2.0 * p.circuit->inductance());
  double final_amp = window_peak(trace.v_out, false, 0.05);
  if (!env.empty()) {
    try {
      final_amp = final_amplitude(trace);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::insufficient_data) throw;
    }
  }
  summary["final_amplitude_V"] = final_amp;
  summary["gm_A_per_V"] = gm;
  summary["neg_resistance_ohm"] = re;
  summary["R_x_ohm"] = p.circuit->resistance();
  summary["seed"] = sim.noise_seed;
  summary["dt_s"] = sim.dt;
  summary["duration_s"] = sim.duration;
  summary["samples"] = trace.size();

  OutputSet files;
  files.add("trace.csv", render([&](std::ostream& os) { write_trace_csv(os, trace); }));
  files.add("envelope.csv", render([&](std::ostream& os) { write_envelope_csv(os, env); }));
  if (svg) files.add("trace.svg", trace_svg(trace, env));
  files.add("summary.json", dump(summary));
  auto names = files.names();
  names.push_back("manifest.json");
  files.add("manifest.json", dump(manifest(g, "simulate", cfg, nullptr, names)));
  files.write(g.out_dir);
  out << dump(summary);
  return kExitOk;
}

int cmd_sweep(const GlobalOptions& g, const std::string& spec_path, std::ostream& out,
              std::ostream& err) {
  const ProjectConfig cfg = require_config(g);
  require_out(g);
  const SweepSpec spec = load_sweep_spec(spec_path);
  std::vector<SweepRow> rows;
  try {
    rows = sweep(cfg.design, spec);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::refused) {
      err << "refused: " << e.what() << '\n';
      return kExitInfeasible;
    }
    throw;
  }
  OutputSet files;
  files.add("sweep.csv", render([&](std::ostream& os) { write_sweep_csv(os, spec, rows); }));
  files.add("sweep.json", dump(sweep_json(spec, rows)));
  auto names = files.names();
  names.push_back("manifest.json");
  files.add("manifest.json", dump(manifest(g, "sweep", cfg, &spec_path, names)));
  files.write(g.out_dir);

  const auto feasible = std::count_if(rows.begin(), rows.end(),
                                      [](const SweepRow& r) { return r.point.feasible; });
  out << rows.size() << " points, " << feasible << " feasible\n";
  if (feasible == 0) {
    err << "infeasible: most violated constraint '" << most_violated(rows) << "'\n";
    return kExitInfeasible;
  }
  return kExitOk;
}

int cmd_optimize(const GlobalOptions& g, const std::string& spec_path, std::ostream& out,
                 std::ostream& err) {
  const ProjectConfig cfg = require_config(g);
  require_out(g);
  const SweepSpec spec = load_sweep_spec(spec_path);
  OptimizeResult result;
  try {
    result = optimize(cfg.design, spec);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::refused) {
      err << "refused: " << e.what() << '\n';
      return kExitInfeasible;
    }
    throw;
  }
  OutputSet files;
  files.add("optimize.json", dump(optimize_json(spec, result)));
  files.add("search_log.csv",
            render([&](std::ostream& os) { write_search_log_csv(os, spec, result.log); }));
  auto names = files.names();
  names.push_back("manifest.json");
  files.add("manifest.json", dump(manifest(g, "optimize", cfg, &spec_path, names)));
  files.write(g.out_dir);

  if (!result.found) {
    err << "infeasible: most violated constraint '" << result.most_violated << "'\n";
    return kExitInfeasible;
  }
  out << to_string(spec.objective) << " = " << format_number(result.best_objective) << " at";
  for (std::size_t d = 0; d < spec.axes.size(); ++d) {
    out << ' ' << spec.axes[d].path << '=' << format_number(result.best_coordinates[d]);
  }
  out << '\n';
  return kExitOk;
}

int cmd_check_rules(const GlobalOptions& g, std::ostream& out) {
  const ProjectConfig cfg = require_config(g);
  const auto& d = cfg.design;
  d.materials.validate();
  const LaminateProperties lam = laminate_properties(d.laminate, d.materials);
  const BeamGeometry geometry{d.anchor, d.length, d.width, lam.thickness};
  const Transducer transducer{d.gap, d.electrode_length, lam.thickness, d.bias, d.port};
  const auto violations = check_mems_rules(geometry, transducer, d.rules);
  json report = json::array();
  for (const auto& v : violations) {
    report.push_back({{"rule", v.rule}, {"measured", v.measured}, {"limit", v.limit}});
    out << "violation: " << v.rule << " measured " << format_number(v.measured) << " limit "
        << format_number(v.limit) << '\n';
  }
  if (violations.empty()) out << "all rules satisfied\n";
  if (!g.out_dir.empty()) {
    OutputSet files;
    files.add("rules.json", dump(json{{"violations", report}}));
    files.write(g.out_dir);
  }
  return violations.empty() ? kExitOk : kExitInfeasible;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"MEMS resonator / Pierce oscillator design toolkit", "memsosc"};
  app.set_version_flag("--version", std::string(MEMSOSC_VERSION));
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions g;
  std::uint64_t seed = 0;
  app.add_option("--config", g.config, "JSON project config");
  app.add_option("--out", g.out_dir, "output directory");
  auto* seed_opt = app.add_option("--seed", seed, "noise seed for simulate");
  app.add_option("--format", g.format, "stdout format")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--set", g.sets, "config override path=value (repeatable)")
      ->allow_extra_args(false);

  auto* analyze = app.add_subcommand("analyze", "evaluate one design");
  auto* table1 = app.add_subcommand("table1", "reproduce the reference design table");
  std::optional<double> rho;
  table1->add_option("--rho", rho, "density override [kg/m^3]");
  auto* simulate = app.add_subcommand("simulate", "closed-loop start-up transient");
  std::optional<double> gm;
  bool svg = false;
  simulate->add_option("--gm", gm, "transconductance override [A/V]");
  simulate->add_flag("--svg", svg, "also write trace.svg");
  auto* sweep_cmd = app.add_subcommand("sweep", "grid sweep");
  auto* optimize_cmd = app.add_subcommand("optimize", "grid + simplex optimization");
  std::string spec_path;
  sweep_cmd->add_option("--spec", spec_path, "sweep spec JSON")->required();
  optimize_cmd->add_option("--spec", spec_path, "sweep spec JSON")->required();
  auto* rules = app.add_subcommand("check-rules", "process design-rule check");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitError;
  }
  if (*seed_opt) g.seed = seed;

  try {
    if (*analyze) return cmd_analyze(g, out, err);
    if (*table1) return cmd_table1(g, rho, out);
    if (*simulate) return cmd_simulate(g, gm, svg, out);
    if (*sweep_cmd) return cmd_sweep(g, spec_path, out, err);
    if (*optimize_cmd) return cmd_optimize(g, spec_path, out, err);
    if (*rules) return cmd_check_rules(g, out);
  } catch (const Error& e) {
    err << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
    return kExitError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}

}  // namespace memsosc
