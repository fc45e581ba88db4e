#include "rioc/io/scenario.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "rioc/io/csv.hpp"

namespace rioc::io {

using nlohmann::json;

namespace {

void only_keys(const json& j, const char* where, std::set<std::string> allowed) {
  if (!j.is_object()) throw ValidationError(std::string(where) + ": expected an object");
  for (const auto& [key, _] : j.items())
    if (!allowed.count(key))
      throw ValidationError(std::string(where) + ": unknown key '" + key + "'");
}

std::vector<double> vector_of(const json& j, int n, const char* what) {
  std::vector<double> v;
  if (j.is_number()) {
    v.assign(n, j.get<double>());
  } else {
    v = j.get<std::vector<double>>();
  }
  if (static_cast<int>(v.size()) != n)
    throw ValidationError(std::string(what) + ": expected " + std::to_string(n) +
                          " components");
  return v;
}

DegradationFunction parse_kappa(const json& j) {
  const std::string type = j.at("type").get<std::string>();
  if (type == "constant") {
    only_keys(j, "kappa", {"type", "c"});
    return DegradationFunction::constant(j.at("c").get<double>());
  }
  if (type == "affine") {
    only_keys(j, "kappa", {"type", "a", "b"});
    return DegradationFunction::affine(j.at("a").get<double>(), j.at("b").get<double>());
  }
  if (type == "saturating") {
    only_keys(j, "kappa", {"type", "c", "L", "width"});
    return DegradationFunction::saturating(j.value("c", 0.0), j.at("L").get<double>(),
                                           j.value("width", 1.0));
  }
  throw ValidationError("kappa: unknown type '" + type + "'");
}

/// Piecewise-linear interpolation of a node table onto the grid. Exact at
/// table nodes that coincide with grid nodes.
Trajectory interpolate(const TimeGrid& grid, const std::vector<double>& t,
                       const std::vector<std::vector<double>>& values, int n) {
  if (t.size() < 2 || t.size() != values.size())
    throw ValidationError("control table: need matching t and values with >= 2 rows");
  for (std::size_t j = 0; j < t.size(); ++j) {
    if (static_cast<int>(values[j].size()) != n)
      throw ValidationError("control table: row width does not match n");
    if (j > 0 && !(t[j] > t[j - 1]))
      throw ValidationError("control table: t must be strictly increasing");
  }
  const double T = grid.final_time();
  if (t.front() > 0.0 || t.back() < T * (1.0 - 1e-12))
    throw ValidationError("control table: t must cover [0, T]");
  Trajectory out(grid, n);
  std::size_t j = 0;
  for (int k = 0; k <= grid.intervals(); ++k) {
    const double s = std::min(grid.t(k), t.back());
    while (j + 2 < t.size() && t[j + 1] <= s) ++j;
    for (int i = 0; i < n; ++i) {
      if (s == t[j]) {
        out(k, i) = values[j][i];
      } else if (s == t[j + 1]) {
        out(k, i) = values[j + 1][i];
      } else {
        const double w = (s - t[j]) / (t[j + 1] - t[j]);
        out(k, i) = (1.0 - w) * values[j][i] + w * values[j + 1][i];
      }
    }
  }
  return out;
}

Trajectory parse_control(const json& j, const TimeGrid& grid, int n,
                         const std::filesystem::path& base_dir) {
  const std::string type = j.at("type").get<std::string>();
  if (type == "zero") {
    only_keys(j, "control", {"type"});
    return Trajectory(grid, n);
  }
  if (type == "constant") {
    only_keys(j, "control", {"type", "value"});
    const auto v = vector_of(j.at("value"), n, "control.value");
    return Trajectory::from_function(grid, n, [&](double, int i) { return v[i]; });
  }
  if (type == "ramp") {
    only_keys(j, "control", {"type", "slope"});
    const auto a = vector_of(j.at("slope"), n, "control.slope");
    return Trajectory::from_function(grid, n, [&](double t, int i) { return a[i] * t; });
  }
  if (type == "table") {
    only_keys(j, "control", {"type", "t", "values"});
    return interpolate(grid, j.at("t").get<std::vector<double>>(),
                       j.at("values").get<std::vector<std::vector<double>>>(), n);
  }
  if (type == "file") {
    only_keys(j, "control", {"type", "path", "column"});
    std::filesystem::path p = j.at("path").get<std::string>();
    if (p.is_relative()) p = base_dir / p;
    if (!std::filesystem::exists(p))
      throw ValidationError("control file not found: " + p.string());
    const CsvTable table = read_csv(p.string());
    const Trajectory src = nodal_columns(table, j.value("column", std::string("ell")));
    if (src.dim() != n) throw ValidationError("control file: dimension does not match n");
    std::vector<double> t;
    std::vector<std::vector<double>> values;
    for (int k = 0; k < src.samples(); ++k) {
      t.push_back(src.grid().t(k));
      values.emplace_back(src.sample(k).begin(), src.sample(k).end());
    }
    return interpolate(grid, t, values, n);
  }
  throw ValidationError("control: unknown type '" + type + "'");
}

ObjectiveSpec parse_objective(const json& j, const TimeGrid& grid, int n,
                              const std::filesystem::path& base_dir) {
  only_keys(j, "objective", {"j", "weights", "beta", "target", "q_d", "proximal", "anchor"});
  ObjectiveSpec obj;
  obj.q_d = vector_of(j.at("q_d"), n, "objective.q_d");
  const std::string kind = j.value("j", std::string("zero"));
  if (kind == "zero") {
    obj.kind = StateCost::zero;
  } else if (kind == "linear") {
    obj.kind = StateCost::linear;
    obj.weights = vector_of(j.at("weights"), n, "objective.weights");
  } else if (kind == "tracking") {
    obj.kind = StateCost::quadratic_tracking;
    obj.tracking_weight = j.value("beta", 1.0);
    obj.tracking_target = parse_control(j.at("target"), grid, n, base_dir);
  } else {
    throw ValidationError("objective: unknown j '" + kind + "'");
  }
  obj.include_proximal = j.value("proximal", false);
  if (obj.include_proximal)
    obj.proximal_anchor = parse_control(j.at("anchor"), grid, n, base_dir);
  return obj;
}

OptimizeOptions parse_optimizer(const json& j) {
  only_keys(j, "optimizer",
            {"max_iters", "c1", "backtrack", "initial_step", "max_backtracks", "grad_tol",
             "tol_z"});
  OptimizeOptions o;
  o.max_iters = j.value("max_iters", o.max_iters);
  o.c1 = j.value("c1", o.c1);
  o.backtrack = j.value("backtrack", o.backtrack);
  o.initial_step = j.value("initial_step", o.initial_step);
  o.max_backtracks = j.value("max_backtracks", o.max_backtracks);
  o.grad_tol = j.value("grad_tol", o.grad_tol);
  if (j.contains("tol_z")) o.tol_z = j.at("tol_z").get<double>();
  o.validate();
  return o;
}

}  // namespace

Scenario parse_scenario(const std::string& json_text, const std::filesystem::path& base_dir) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("scenario: ") + e.what());
  }
  try {
    only_keys(doc, "scenario",
              {"model", "kappa", "grid", "control", "objective", "optimizer", "eps_list",
               "seed", "description"});
    Scenario s;
    const json& model = doc.at("model");
    only_keys(model, "model", {"n", "alpha", "epsilon", "y0"});
    const int n = model.value("n", model.contains("y0") && model.at("y0").is_array()
                                       ? static_cast<int>(model.at("y0").size())
                                       : 1);
    if (n < 1) throw ValidationError("model.n must be >= 1");
    s.params.alpha = model.value("alpha", 1.0);
    s.params.epsilon = model.value("epsilon", 0.0);
    s.params.y0 = model.contains("y0") ? vector_of(model.at("y0"), n, "model.y0")
                                       : std::vector<double>(n, 0.0);
    s.params.kappa = doc.contains("kappa") ? parse_kappa(doc.at("kappa"))
                                           : DegradationFunction::constant(0.0);
    s.params.validate();

    const json& grid = doc.at("grid");
    only_keys(grid, "grid", {"T", "N"});
    s.grid = TimeGrid(grid.value("T", 1.0), grid.at("N").get<int>());

    s.control = doc.contains("control") ? parse_control(doc.at("control"), s.grid, n, base_dir)
                                        : Trajectory(s.grid, n);
    if (!s.control.all_finite()) throw ValidationError("control: non-finite values");

    if (doc.contains("objective")) {
      s.objective = parse_objective(doc.at("objective"), s.grid, n, base_dir);
    } else {
      s.objective.q_d.assign(n, 0.0);
    }
    s.objective.validate(n, s.grid);

    if (doc.contains("optimizer")) s.optimize = parse_optimizer(doc.at("optimizer"));
    if (doc.contains("eps_list")) s.eps_list = doc.at("eps_list").get<std::vector<double>>();
    s.seed = doc.value("seed", std::uint64_t{0});
    return s;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("scenario: ") + e.what());
  }
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ValidationError("cannot read scenario " + path.string());
  std::ostringstream ss;
  ss << is.rdbuf();
  return parse_scenario(ss.str(), path.parent_path().empty() ? "." : path.parent_path());
}

}  // namespace rioc::io
