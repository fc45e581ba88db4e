#include <doctest.h>

#include <filesystem>
#include <random>
#include <sstream>

#include "rioc/io/csv.hpp"
#include "rioc/io/scenario.hpp"
#include "rioc/io/svg.hpp"
#include "test_support.hpp"

using namespace rioc;
using namespace rioc::io;
namespace rt = rioc::testing;

TEST_CASE("format_double round-trips") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int s = 0; s < 1000; ++s) {
    const double x = u(rng) * std::pow(10.0, (s % 40) - 20);
    CHECK(std::stod(format_double(x)) == x);
  }
  CHECK(format_double(0.0) == "0");
  CHECK(format_double(0.75) == "0.75");
}

TEST_CASE("trajectory CSV round trip is exact") {
  const TimeGrid grid(0.7, 333);
  std::mt19937_64 rng(2);
  const Trajectory ell = rt::random_h10(grid, 3, rng);
  std::stringstream ss;
  write_csv(ss, control_table(ell));
  const CsvTable back = read_csv(ss);
  CHECK(back.header == std::vector<std::string>{"t", "ell_1", "ell_2", "ell_3"});
  const Trajectory re = nodal_columns(back, "ell");
  CHECK(re.grid() == grid);
  CHECK(re == ell);
}

TEST_CASE("solution table column order and lambda rows") {
  rt::TransversalScenario sc(0.05, 50);
  const ForwardSolution sol = solve_viscous(sc.params, sc.ell);
  ObjectiveSpec obj;
  obj.q_d = {1.0, 0.5};
  const AdjointSolution adj = solve_adjoint(sc.params, sc.ell, sol, obj, default_tol_z(sc.ell));
  const CsvTable t = solution_table(sol, &adj);
  CHECK(t.header == std::vector<std::string>{"t", "q_1", "q_2", "z_1", "z_2", "H_1", "H_2",
                                             "xi_1", "xi_2", "lam_1", "lam_2"});
  CHECK(t.rows.size() == 51);
  std::stringstream ss;
  write_csv(ss, t);
  const CsvTable back = read_csv(ss);
  CHECK(nodal_columns(back, "q") == sol.q);
  CHECK(nodal_columns(back, "xi") == adj.xi);
  CHECK(interval_columns(back, "lam") == adj.lam);
  CHECK(back.rows[0][back.column("lam_1")] == 0.0);
}

TEST_CASE("CSV reader rejects malformed input") {
  std::stringstream ragged("t,ell_1\n0,0\n0.5\n1,1\n");
  CHECK_THROWS_AS(read_csv(ragged), ValidationError);
  std::stringstream bad("t,ell_1\n0,0\n0.5,abc\n1,1\n");
  CHECK_THROWS_AS(read_csv(bad), ValidationError);
  std::stringstream empty("");
  CHECK_THROWS_AS(read_csv(empty), ValidationError);
  std::stringstream nonuniform("t,ell_1\n0,0\n0.2,0\n1,1\n");
  CHECK_THROWS_AS(grid_from_table(read_csv(nonuniform)), ValidationError);
  std::stringstream ok("t,ell_1\n0,0\n0.5,1\n1,2\n");
  const CsvTable t = read_csv(ok);
  CHECK_THROWS_AS(nodal_columns(t, "q"), ValidationError);
  CHECK_THROWS_AS(t.column("nope"), ValidationError);
}

TEST_CASE("scenario parsing") {
  const Scenario s = parse_scenario(R"({
    "model": {"n": 2, "alpha": 2.0, "epsilon": 0.01, "y0": [0.1, 0.2]},
    "kappa": {"type": "saturating", "c": 0.1, "L": 0.5, "width": 0.25},
    "grid": {"T": 2.0, "N": 40},
    "control": {"type": "ramp", "slope": [1.0, -1.0]},
    "objective": {"j": "linear", "weights": 0.5, "q_d": [1.0, 2.0]},
    "optimizer": {"grad_tol": 1e-5, "max_iters": 7},
    "eps_list": [0.1, 0.01],
    "seed": 9
  })");
  CHECK(s.params.alpha == 2.0);
  CHECK(s.params.epsilon == 0.01);
  CHECK(s.params.y0 == std::vector<double>{0.1, 0.2});
  CHECK(s.params.kappa.lipschitz == 0.5);
  CHECK(s.grid == TimeGrid(2.0, 40));
  CHECK(s.control(40, 1) == -2.0);
  CHECK(s.objective.kind == StateCost::linear);
  CHECK(s.objective.weights == std::vector<double>{0.5, 0.5});
  CHECK(s.optimize.grad_tol == 1e-5);
  CHECK(s.optimize.max_iters == 7);
  CHECK(s.eps_list == std::vector<double>{0.1, 0.01});
  CHECK(s.seed == 9);
}

TEST_CASE("scenario defaults and control kinds") {
  const Scenario s = parse_scenario(R"({"model": {}, "grid": {"N": 4}})");
  CHECK(s.params.dim() == 1);
  CHECK(s.params.epsilon == 0.0);
  CHECK(sup_norm(s.control) == 0.0);
  CHECK(s.objective.q_d == std::vector<double>{0.0});

  const Scenario t = parse_scenario(R"({"model": {"n": 1}, "grid": {"T": 1, "N": 4},
    "control": {"type": "table", "t": [0, 0.5, 1], "values": [[0], [1], [0]]}})");
  CHECK(t.control(1, 0) == 0.5);
  CHECK(t.control(2, 0) == 1.0);
  CHECK(t.control(3, 0) == 0.5);
  CHECK(t.control(4, 0) == 0.0);
}

TEST_CASE("scenario control from file") {
  const auto dir = std::filesystem::temp_directory_path() / "rioc_test_io";
  std::filesystem::create_directories(dir);
  const TimeGrid grid(1.0, 20);
  std::mt19937_64 rng(3);
  const Trajectory ell = rt::random_h10(grid, 1, rng);
  write_csv((dir / "ell.csv").string(), control_table(ell));
  const Scenario s = parse_scenario(
      R"({"model": {"n": 1}, "grid": {"T": 1, "N": 20}, "control": {"type": "file", "path": "ell.csv"}})",
      dir);
  CHECK(s.control == ell);
  CHECK_THROWS_AS(parse_scenario(R"({"model": {"n": 1}, "grid": {"T": 1, "N": 20},
      "control": {"type": "file", "path": "missing.csv"}})", dir), ValidationError);
}

TEST_CASE("scenario validation errors") {
  const char* bad[] = {
      "not json",
      R"({"grid": {"N": 4}})",
      R"({"model": {}, "grid": {"N": 4}, "typo": 1})",
      R"({"model": {"alpha": -1}, "grid": {"N": 4}})",
      R"({"model": {"n": 2, "y0": [0]}, "grid": {"N": 4}})",
      R"({"model": {}, "grid": {"N": 1}})",
      R"({"model": {}, "grid": {"N": 4}, "kappa": {"type": "cubic"}})",
      R"({"model": {}, "grid": {"N": 4}, "control": {"type": "table", "t": [0, 0.5], "values": [[0], [1]]}})",
      R"({"model": {}, "grid": {"N": 4}, "objective": {"j": "tracking", "q_d": [0]}})",
      R"({"model": {}, "grid": {"N": 4}, "optimizer": {"c1": 2}})",
      R"({"model": {}, "grid": {"N": "four"}})",
  };
  for (const char* text : bad) {
    CAPTURE(text);
    CHECK_THROWS_AS(parse_scenario(text), ValidationError);
  }
}

TEST_CASE("svg chart") {
  const std::string svg = line_chart({{"a<b", {1e-4, 1e-2, 1.0}, {3.0, 2.0, 1.0}}},
                                     {"title & more", "epsilon", "value", true, false});
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("</svg>") != std::string::npos);
  CHECK(svg.find("a&lt;b") != std::string::npos);
  CHECK(svg.find("title &amp; more") != std::string::npos);
  CHECK(svg.find("<polyline") != std::string::npos);
  // deterministic
  CHECK(svg == line_chart({{"a<b", {1e-4, 1e-2, 1.0}, {3.0, 2.0, 1.0}}},
                          {"title & more", "epsilon", "value", true, false}));
}
