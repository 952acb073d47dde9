#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "memsosc/cli.hpp"
#include "memsosc/config.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::string kRoot = MEMSOSC_SOURCE_DIR;

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "memsosc");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = memsosc::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("memsosc_cli_test_" + name);
  fs::remove_all(p);
  return p;
}

std::string config(const std::string& id) { return kRoot + "/configs/" + id + ".json"; }

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("sha256") {
    CHECK(memsosc::sha256_hex("abc") ==
          "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  }

  TEST_CASE("analyze design #1") {
    const auto r = run({"analyze", "--config", config("design1")});
    CHECK(r.code == 0);
    const auto j = json::parse(r.out);
    CHECK(j["beam"]["f0_kHz"].get<double>() == doctest::Approx(75.9).epsilon(0.002));
    CHECK(j["feasible"] == true);
    CHECK(j["circuit"]["R_x_ohm"].get<double>() == doctest::Approx(717e3).epsilon(0.01));
  }

  TEST_CASE("analyze exit codes") {
    const auto dir = scratch("bad_gap");
    const auto bad = run({"analyze", "--config", config("design1"), "--set", "transducer.gap=-1",
                          "--out", dir.string()});
    CHECK(bad.code == 1);
    CHECK(bad.err.find("transducer.gap") != std::string::npos);
    CHECK_FALSE(fs::exists(dir));

    const auto hot = run({"analyze", "--config", config("design1"), "--set", "transducer.bias=12"});
    CHECK(hot.code == 2);
    CHECK(hot.err.find("pull_in") != std::string::npos);

    const auto missing = run({"analyze", "--config", "/nonexistent/x.json"});
    CHECK(missing.code == 1);
    CHECK(missing.err.find("cannot read") != std::string::npos);

    CHECK(run({"analyze"}).code == 1);
    CHECK(run({"frobnicate"}).code == 1);
    CHECK(run({"--help"}).code == 0);
  }

  TEST_CASE("analyze csv and files") {
    const auto dir = scratch("analyze_out");
    const auto r = run({"--format", "csv", "analyze", "--config", config("design2"), "--out",
                        dir.string()});
    CHECK(r.code == 2);  // 9.5 V is above 0.97 V_pi for design #2
    CHECK(r.out.rfind("feasible,", 0) == 0);
    CHECK(fs::exists(dir / "analysis.json"));
    CHECK(fs::exists(dir / "analysis.csv"));
  }

  TEST_CASE("table1") {
    const auto dir = scratch("table1");
    const auto r = run({"table1", "--out", dir.string()});
    CHECK(r.code == 0);
    CHECK(r.out.find("known discrepancy") != std::string::npos);
    const auto j = json::parse(memsosc::read_file(dir / "table1.json"));
    CHECK(j["all_pass"] == true);
    CHECK(j["rows"].size() == 27);
    bool found = false;
    for (const auto& row : j["rows"]) {
      if (row["design"] == "design2" && row["quantity"] == "L_x") {
        found = true;
        CHECK(row["computed"].get<double>() == doctest::Approx(5011.45).epsilon(1e-4));
        CHECK(row["status"] == "pass");
      }
    }
    CHECK(found);

    const auto wrong = run({"table1", "--rho", "5000", "--out", dir.string()});
    CHECK(wrong.code == 2);
    const auto w = json::parse(memsosc::read_file(dir / "table1.json"));
    int failed_f0 = 0;
    for (const auto& row : w["rows"]) {
      if (row["quantity"] == "f0" && row["status"] == "fail") ++failed_f0;
    }
    CHECK(failed_f0 == 3);
  }

  TEST_CASE("simulate") {
    const auto dir = scratch("sim");
    const auto r = run({"simulate", "--config", config("design1"), "--out", dir.string(), "--svg"});
    REQUIRE(r.code == 0);
    const auto s = json::parse(memsosc::read_file(dir / "summary.json"));
    CHECK(s["status"] == "oscillating");
    CHECK(s["frequency_Hz"].get<double>() == doctest::Approx(75.9e3).epsilon(0.01));
    CHECK(s["pulled_in"] == false);
    for (auto f : {"trace.csv", "envelope.csv", "trace.svg", "manifest.json"}) {
      CHECK(fs::exists(dir / f));
    }
    CHECK(memsosc::read_file(dir / "trace.csv").rfind("t,v_in,v_out,x\n", 0) == 0);
  }

  TEST_CASE("simulate without gain") {
    const auto dir = scratch("sim_gm0");
    const auto r = run({"simulate", "--config", config("design1"), "--out", dir.string(), "--gm", "0"});
    REQUIRE(r.code == 0);
    const auto s = json::parse(memsosc::read_file(dir / "summary.json"));
    CHECK(s["status"] == "decayed");
    CHECK(s["frequency_Hz"].is_null());
  }

  TEST_CASE("simulate is byte-identical for a fixed seed") {
    const auto a = scratch("seed_a"), b = scratch("seed_b");
    const std::vector<std::string> common = {"simulate", "--config", config("design1"), "--seed",
                                             "7", "--set", "sim.duration=0.005", "--svg"};
    auto args_a = common, args_b = common;
    args_a.insert(args_a.end(), {"--out", a.string()});
    args_b.insert(args_b.end(), {"--out", b.string()});
    REQUIRE(run(args_a).code == 0);
    REQUIRE(run(args_b).code == 0);
    for (auto f : {"trace.csv", "envelope.csv", "summary.json", "trace.svg"}) {
      CHECK(memsosc::read_file(a / f) == memsosc::read_file(b / f));
    }
    const auto m = json::parse(memsosc::read_file(a / "manifest.json"));
    CHECK(m["seed"] == 7);
  }

  TEST_CASE("sweep") {
    const auto dir = scratch("sweep");
    const auto r = run({"sweep", "--config", config("design2"), "--spec",
                        kRoot + "/configs/sweeps/table_corners.json", "--out", dir.string()});
    CHECK(r.code == 0);
    const auto j = json::parse(memsosc::read_file(dir / "sweep.json"));
    REQUIRE(j["rows"].size() == 4);
    CHECK(j["rows"][0]["point"]["beam"]["f0_kHz"].get<double>() ==
          doctest::Approx(105.4).epsilon(0.002));
    CHECK(j["rows"][3]["point"]["beam"]["f0_kHz"].get<double>() ==
          doctest::Approx(75.9).epsilon(0.002));
    const auto m = json::parse(memsosc::read_file(dir / "manifest.json"));
    CHECK(m["tool"] == "memsosc");
    CHECK(m["config"]["sha256"].get<std::string>().size() == 64);
    CHECK(m["spec"]["sha256"].get<std::string>().size() == 64);
    CHECK_FALSE(m.contains("timestamp"));
  }

  TEST_CASE("sweep with an empty spec") {
    const auto dir = scratch("sweep_empty");
    const auto spec = dir.string() + "_spec.json";
    std::ofstream(spec) << "{}";
    const auto r = run({"sweep", "--config", config("design1"), "--spec", spec, "--out", dir.string()});
    CHECK(r.code == 0);
    const auto csv = memsosc::read_file(dir / "sweep.csv");
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 2);
  }

  TEST_CASE("sweep refusal and bad specs") {
    const auto dir = scratch("sweep_cap");
    const auto spec = dir.string() + "_spec.json";
    std::ofstream(spec) << R"({"axes": [{"path": "beam.length", "min": 6e-5, "max": 1e-4, "steps": 50}], "grid_cap": 10})";
    const auto r = run({"sweep", "--config", config("design1"), "--spec", spec, "--out", dir.string()});
    CHECK(r.code == 2);
    CHECK(r.err.find("refused") != std::string::npos);
    CHECK_FALSE(fs::exists(dir));

    std::ofstream(spec) << R"({"axes": [{"path": "beam.length", "min": 6e-5}]})";
    CHECK(run({"sweep", "--config", config("design1"), "--spec", spec, "--out", dir.string()}).code == 1);
    CHECK_FALSE(fs::exists(dir));
  }

  TEST_CASE("optimize") {
    const auto dir = scratch("opt");
    const auto r = run({"optimize", "--config", config("design1"), "--spec",
                        kRoot + "/configs/sweeps/bias_min_rx.json", "--out", dir.string()});
    CHECK(r.code == 0);
    const auto j = json::parse(memsosc::read_file(dir / "optimize.json"));
    CHECK(j["found"] == true);
    CHECK(j["best_coordinates"][0].get<double>() == doctest::Approx(0.97 * 9.8564).epsilon(1e-4));
    CHECK(fs::exists(dir / "search_log.csv"));
  }

  TEST_CASE("optimize an infeasible problem") {
    const auto dir = scratch("opt_bad");
    const auto spec = dir.string() + "_spec.json";
    std::ofstream(spec) << R"({"axes": [{"path": "transducer.bias", "min": 11, "max": 14, "steps": 4}]})";
    const auto r = run({"optimize", "--config", config("design1"), "--spec", spec, "--out", dir.string()});
    CHECK(r.code == 2);
    CHECK(r.err.find("pull_in") != std::string::npos);
    const auto j = json::parse(memsosc::read_file(dir / "optimize.json"));
    CHECK(j["most_violated"] == "pull_in");
  }

  TEST_CASE("check-rules") {
    CHECK(run({"check-rules", "--config", config("design1")}).code == 0);
    const auto r = run({"--set", "transducer.gap=0.6e-6", "check-rules", "--config", config("design1")});
    CHECK(r.code == 2);
    CHECK(r.out.find("min_lateral_gap") != std::string::npos);
  }
}
