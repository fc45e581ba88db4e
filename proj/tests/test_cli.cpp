#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "rioc/io/commands.hpp"
#include "rioc/io/csv.hpp"
#include "test_support.hpp"

using namespace rioc;
using namespace rioc::io;
namespace fs = std::filesystem;

namespace {

const fs::path kScenarios = RIOC_SCENARIO_DIR;

struct Run {
  int code;
  std::string out, err;
};

Run cli(std::vector<std::string> args) {
  args.insert(args.begin(), "rioc");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "rioc_test_cli" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

std::string scenario(const char* name) { return (kScenarios / name).string(); }

fs::path write_scenario(const fs::path& dir, const std::string& text) {
  const fs::path p = dir / "scenario.json";
  std::ofstream(p) << text;
  return p;
}

}  // namespace

TEST_CASE("simulate: zero control") {
  const fs::path dir = scratch("zero");
  const Run r = cli({"simulate", scenario("zero.json"), "--out", (dir / "q.csv").string()});
  REQUIRE(r.code == 0);
  const CsvTable t = read_csv((dir / "q.csv").string());
  CHECK(t.header.back() == "energy_residual");
  CHECK(sup_norm(nodal_columns(t, "q")) == 0.0);
}

TEST_CASE("simulate: closed-form viscous and play scenarios") {
  const fs::path dir = scratch("closed");
  REQUIRE(cli({"simulate", scenario("constant_load.json"), "--out", (dir / "v.csv").string(),
               "--plot"}).code == 0);
  const CsvTable v = read_csv((dir / "v.csv").string());
  const Trajectory q = nodal_columns(v, "q");
  double err = 0.0;
  for (int k = 0; k <= q.grid().intervals(); ++k)
    err = std::max(err, std::abs(q(k, 0) - (1.0 - std::exp(-q.grid().t(k) / 0.1))));
  CHECK(err <= 1e-3);
  CHECK(fs::exists(dir / "v.svg"));

  REQUIRE(cli({"simulate", scenario("play.json"), "--out", (dir / "p.csv").string()}).code == 0);
  const Trajectory p = nodal_columns(read_csv((dir / "p.csv").string()), "q");
  CHECK(p(2000, 0) == doctest::Approx(0.75).epsilon(1e-12));

  // --epsilon overrides the scenario's default solver
  REQUIRE(cli({"simulate", scenario("play.json"), "--epsilon", "1e-5", "--out",
               (dir / "pv.csv").string()}).code == 0);
  const Trajectory pv = nodal_columns(read_csv((dir / "pv.csv").string()), "q");
  CHECK(pv != p);
  CHECK(sup_norm(pv - p) <= 1e-3);
}

TEST_CASE("optimize: zero scenario takes no iterations") {
  const fs::path dir = scratch("opt0");
  const Run r = cli({"optimize", scenario("zero.json"), "--out", dir.string()});
  REQUIRE(r.code == 0);
  const auto report = nlohmann::json::parse(slurp(dir / "report.json"));
  CHECK(report["iterations"] == 0);
  CHECK(report["stationarity"]["classification"] == "strong");
  CHECK(fs::exists(dir / "control.csv"));
  CHECK(fs::exists(dir / "state.csv"));
  CHECK(fs::exists(dir / "log.csv"));
}

TEST_CASE("optimize then check the stored tuple") {
  const fs::path dir = scratch("optcheck");
  REQUIRE(cli({"optimize", scenario("below_target.json"), "--out", dir.string(), "--plot"}).code == 0);
  CHECK(fs::exists(dir / "state.svg"));
  const auto report = nlohmann::json::parse(slurp(dir / "report.json"));
  CHECK(report["converged"] == true);

  const Run ok = cli({"check", scenario("below_target.json"), "--control",
                      (dir / "control.csv").string(), "--state", (dir / "state.csv").string()});
  REQUIRE(ok.code == 0);
  const auto rep = nlohmann::json::parse(ok.out);
  CHECK(rep["kind"] == "viscous");
  CHECK(rep["classification"] == "strong");
  CHECK(rep["adjoint_residual"].get<double>() <= 1e-9);
  CHECK(rep["sign_violation"].get<double>() <= 1e-12);

  // Corrupt lambda: flip its sign.
  CsvTable state = read_csv((dir / "state.csv").string());
  const int c = state.column("lam_1");
  for (auto& row : state.rows) row[c] = -row[c];
  write_csv((dir / "bad.csv").string(), state);
  const Run bad = cli({"check", scenario("below_target.json"), "--control",
                       (dir / "control.csv").string(), "--state", (dir / "bad.csv").string(),
                       "--out", (dir / "bad.json").string()});
  REQUIRE(bad.code == 0);
  const auto brep = nlohmann::json::parse(slurp(dir / "bad.json"));
  CHECK(brep["sign_violation"].get<double>() > 0.0);
  CHECK(brep["classification"] == "inconclusive");

  const Run lim = cli({"check", scenario("below_target.json"), "--limit", "--control",
                       (dir / "control.csv").string(), "--state", (dir / "state.csv").string()});
  REQUIRE(lim.code == 0);
  CHECK(nlohmann::json::parse(lim.out)["kind"] == "limit");
}

TEST_CASE("sweep: CSV column and deterministic output") {
  const fs::path a = scratch("sweep_a");
  const fs::path b = scratch("sweep_b");
  REQUIRE(cli({"sweep", scenario("tracking.json"), "--out", a.string(), "--plot"}).code == 0);
  REQUIRE(cli({"sweep", scenario("tracking.json"), "--out", b.string(), "--plot"}).code == 0);
  for (const char* f : {"sweep.csv", "sweep.json", "reference_control.csv", "sweep.svg"})
    CHECK(slurp(a / f) == slurp(b / f));

  const CsvTable t = read_csv((a / "sweep.csv").string());
  REQUIRE(t.rows.size() == 7);
  const int qd = t.column("q_distance");
  for (std::size_t j = 1; j < t.rows.size(); ++j) CHECK(t.rows[j][qd] <= t.rows[j - 1][qd]);
}

TEST_CASE("sweep: cold start output does not depend on the thread cap") {
  const fs::path a = scratch("cold_a");
  const fs::path b = scratch("cold_b");
  ::setenv("RIOC_THREADS", "1", 1);
  REQUIRE(cli({"sweep", scenario("below_target.json"), "--cold", "--eps-list", "0.1,0.01,0.001",
               "--out", a.string()}).code == 0);
  ::setenv("RIOC_THREADS", "3", 1);
  REQUIRE(cli({"sweep", scenario("below_target.json"), "--cold", "--eps-list", "0.1,0.01,0.001",
               "--out", b.string()}).code == 0);
  CHECK(slurp(a / "sweep.csv") == slurp(b / "sweep.csv"));
  CHECK(slurp(a / "sweep.json") == slurp(b / "sweep.json"));
  ::setenv("RIOC_THREADS", "zero", 1);
  CHECK(cli({"sweep", scenario("below_target.json"), "--cold", "--eps-list", "0.1",
             "--out", a.string()}).code == 2);
  ::unsetenv("RIOC_THREADS");
}

TEST_CASE("gradcheck") {
  SUBCASE("smooth scenario") {
    const Run r = cli({"gradcheck", scenario("transversal.json"), "--directions", "5"});
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["smooth"] == true);
    CHECK(j["directions"].size() == 5);
    CHECK(j["max_relative_error"].get<double>() <= 1e-4);
    CHECK(r.out == cli({"gradcheck", scenario("transversal.json"), "--directions", "5"}).out);
  }
  SUBCASE("lambda vanishes") {
    const fs::path dir = scratch("gc0");
    const fs::path p = write_scenario(dir, R"({"model": {"n": 1, "epsilon": 0.1},
      "kappa": {"type": "constant", "c": 5}, "grid": {"N": 200},
      "control": {"type": "ramp", "slope": [1.0]}, "objective": {"q_d": [1.0]}})");
    const Run r = cli({"gradcheck", p.string()});
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["smooth"] == true);
    for (const auto& d : j["directions"]) CHECK(d["relative_error"].get<double>() <= 1e-8);
  }
  SUBCASE("biactive scenario is flagged") {
    const Run r = cli({"gradcheck", scenario("zero.json")});
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["smooth"] == false);
    CHECK(j["zero_band_intervals"].get<int>() > 0);
    for (const auto& d : j["directions"]) CHECK(d["nonsmooth"] == true);
  }
}

TEST_CASE("exit codes") {
  CHECK(cli({}).code == 2);
  CHECK(cli({"--help"}).code == 0);
  CHECK(cli({"simulate", "/nonexistent.json", "--out", "x.csv"}).code == 2);
  CHECK(cli({"frobnicate"}).code == 2);

  const fs::path dir = scratch("codes");
  const fs::path bad = write_scenario(dir, R"({"model": {"alpha": -1}, "grid": {"N": 10}})");
  const Run r = cli({"simulate", bad.string(), "--out", (dir / "q.csv").string()});
  CHECK(r.code == 2);
  CHECK(r.err.find("alpha") != std::string::npos);

  // rate-independent default epsilon cannot be optimized
  CHECK(cli({"optimize", scenario("play.json"), "--out", dir.string()}).code == 2);

  const fs::path stuck = write_scenario(dir, R"({"model": {"n": 1, "epsilon": 0.01},
    "kappa": {"type": "constant", "c": 0.2}, "grid": {"N": 200},
    "control": {"type": "ramp", "slope": [2.0]}, "objective": {"q_d": [3.0]},
    "optimizer": {"c1": 0.999999, "max_backtracks": 1}})");
  const Run s = cli({"optimize", stuck.string(), "--out", (dir / "o").string()});
  CHECK(s.code == 3);
  CHECK(s.err.find("Armijo") != std::string::npos);
}
