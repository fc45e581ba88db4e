#include "rioc/io/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "rioc/io/csv.hpp"
#include "rioc/io/report_json.hpp"
#include "rioc/io/svg.hpp"

namespace fs = std::filesystem;

namespace rioc::io {

int worker_threads() {
  int n = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  if (const char* env = std::getenv("RIOC_THREADS"); env && *env) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (*end != '\0' || cap < 1)
      throw ValidationError("RIOC_THREADS must be a positive integer");
    n = std::min<long>(n, cap);
  }
  return n;
}

Trajectory random_direction(const TimeGrid& grid, int n, std::mt19937_64& rng) {
  constexpr int modes = 5;
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> amp(static_cast<std::size_t>(modes) * n);
  for (double& a : amp) a = normal(rng);
  const double T = grid.final_time();
  return Trajectory::from_function(grid, n, [&](double t, int i) {
    double s = 0.0;
    for (int m = 1; m <= modes; ++m)
      s += amp[static_cast<std::size_t>(m - 1) * n + i] / m *
           std::sin((m - 0.5) * M_PI * t / T);
    return s;
  });
}

namespace {

ModelParams with_epsilon(ModelParams p, double eps) {
  p.epsilon = eps;
  return p;
}

bool same_pattern(const ActivationPattern& a, const ActivationPattern& b) {
  for (int k = 0; k < a.samples(); ++k)
    for (int i = 0; i < a.dim(); ++i)
      if (a(k, i) != b(k, i)) return false;
  return true;
}

}  // namespace

GradcheckReport gradient_check(const Scenario& s, double epsilon, int directions, double tau,
                               std::uint64_t seed) {
  if (!(epsilon > 0.0)) throw ValidationError("gradcheck: epsilon must be > 0");
  if (directions < 1) throw ValidationError("gradcheck: need at least one direction");
  if (!(tau > 0.0)) throw ValidationError("gradcheck: tau must be > 0");
  const ModelParams p = with_epsilon(s.params, epsilon);
  const Trajectory& ell = s.control;
  const double tol_z = s.optimize.tol_z ? *s.optimize.tol_z : default_tol_z(ell);
  const ForwardSolution sol = solve_viscous(p, ell);
  const AdjointSolution adj = solve_adjoint(p, ell, sol, s.objective, tol_z);
  const Trajectory g = reduced_gradient(ell, adj, s.objective);

  GradcheckReport rep;
  rep.epsilon = epsilon;
  rep.tau = tau;
  rep.zero_band_intervals = adj.pattern.count(Activation::zero);
  rep.smooth = rep.zero_band_intervals == 0;
  std::mt19937_64 rng(seed);
  for (int d = 0; d < directions; ++d) {
    const Trajectory v = random_direction(ell.grid(), ell.dim(), rng);
    const Trajectory plus = ell + tau * v;
    const Trajectory minus = ell - tau * v;
    const ForwardSolution sp = solve_viscous(p, plus);
    const ForwardSolution sm = solve_viscous(p, minus);
    GradcheckEntry e;
    e.finite_difference = (objective_breakdown(plus, sp.q, s.objective).total() -
                           objective_breakdown(minus, sm.q, s.objective).total()) /
                          (2.0 * tau);
    e.adjoint = h1_inner(g, v);
    const double scale = std::max(std::abs(e.adjoint), std::abs(e.finite_difference));
    e.relative_error = scale > 0.0 ? std::abs(e.finite_difference - e.adjoint) / scale : 0.0;
    e.nonsmooth = rep.zero_band_intervals > 0 ||
                  !same_pattern(adj.pattern, interval_pattern(sp, tol_z)) ||
                  !same_pattern(adj.pattern, interval_pattern(sm, tol_z));
    if (e.nonsmooth)
      rep.smooth = false;
    else
      rep.max_relative_error = std::max(rep.max_relative_error, e.relative_error);
    rep.entries.push_back(e);
  }
  return rep;
}

namespace {

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ValidationError("cannot write " + path.string());
  os << text;
  if (!os) throw ValidationError("error while writing " + path.string());
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir))
    throw ValidationError("cannot create output directory " + dir.string());
}

std::vector<double> column(const Trajectory& tr, int i) {
  std::vector<double> out;
  for (int k = 0; k < tr.samples(); ++k) out.push_back(tr(k, i));
  return out;
}

std::vector<double> node_times(const TimeGrid& grid) {
  std::vector<double> t;
  for (int k = 0; k <= grid.intervals(); ++k) t.push_back(grid.t(k));
  return t;
}

std::string state_chart(const ForwardSolution& sol, const AdjointSolution* adj,
                        const std::string& title) {
  std::vector<Series> series;
  const auto t = node_times(sol.q.grid());
  for (int i = 0; i < sol.q.dim(); ++i) {
    const std::string idx = std::to_string(i + 1);
    series.push_back({"q_" + idx, t, column(sol.q, i)});
    series.push_back({"z_" + idx, t, column(sol.z, i)});
    if (adj) series.push_back({"xi_" + idx, t, column(adj->xi, i)});
  }
  return line_chart(series, {title, "t", "value"});
}

/// Resolves the viscosity: the flag wins, the scenario supplies the default.
double pick_epsilon(const CLI::Option* flag, double flag_value, const Scenario& s) {
  return flag->count() ? flag_value : s.params.epsilon;
}

// --- simulate ------------------------------------------------------------

struct SimulateArgs {
  std::string scenario, out;
  double epsilon = 0.0;
  CLI::Option* epsilon_flag = nullptr;
  bool plot = false;
};

void simulate(const SimulateArgs& a, std::ostream& out) {
  const Scenario s = load_scenario(a.scenario);
  const double eps = pick_epsilon(a.epsilon_flag, a.epsilon, s);
  if (eps < 0.0) throw ValidationError("simulate: epsilon must be >= 0");
  const ModelParams p = with_epsilon(s.params, eps);
  const ForwardSolution sol = solve_forward(p, s.control);

  CsvTable table = solution_table(sol);
  table.header.push_back("energy_residual");
  for (int k = 0; k < static_cast<int>(table.rows.size()); ++k)
    table.rows[k].push_back(sol.energy_residual(k, 0));
  write_csv(a.out, table);
  if (a.plot)
    write_text(fs::path(a.out).replace_extension(".svg"),
               state_chart(sol, nullptr, eps > 0.0 ? "viscous solution" : "rate-independent solution"));

  const auto m = complementarity_measures(sol);
  out << "solver " << (eps > 0.0 ? "viscous" : "rate-independent") << " epsilon "
      << format_double(eps) << " N " << s.grid.intervals() << '\n'
      << "max_z " << format_double(m.max_z) << " max_rate_times_z "
      << format_double(m.max_rate_times_z) << " max_energy_residual "
      << format_double(sup_norm(sol.energy_residual)) << '\n';
}

// --- optimize ------------------------------------------------------------

struct OptimizeArgs {
  std::string scenario, out;
  double epsilon = 0.0;
  CLI::Option* epsilon_flag = nullptr;
  bool plot = false;
};

CsvTable log_table(const std::vector<IterateRecord>& log) {
  CsvTable t;
  t.header = {"iteration", "objective", "grad_norm", "step", "backtracks"};
  for (const auto& r : log)
    t.rows.push_back({static_cast<double>(r.iteration), r.objective, r.grad_norm, r.step,
                      static_cast<double>(r.backtracks)});
  return t;
}

void optimize(const OptimizeArgs& a, std::ostream& out) {
  const Scenario s = load_scenario(a.scenario);
  const double eps = pick_epsilon(a.epsilon_flag, a.epsilon, s);
  if (!(eps > 0.0)) throw ValidationError("optimize: epsilon must be > 0");
  const ModelParams p = with_epsilon(s.params, eps);
  const OptimizeResult r = minimize_viscous(s.control, p, s.objective, s.optimize);

  const double tol_z = s.optimize.tol_z ? *s.optimize.tol_z : default_tol_z(r.ell);
  const double threshold = viscous_pass_threshold(s.optimize.grad_tol, s.grid.dt(),
                                                  scenario_scale(r.ell, s.objective));
  const StationarityReport st = check_viscous(r.ell, r.forward.q, r.adjoint.xi, r.adjoint.lam,
                                              p, s.objective, tol_z, threshold);

  const fs::path dir = a.out;
  ensure_dir(dir);
  write_csv((dir / "control.csv").string(), control_table(r.ell));
  write_csv((dir / "state.csv").string(), solution_table(r.forward, &r.adjoint));
  write_csv((dir / "log.csv").string(), log_table(r.log));
  Json report;
  report["epsilon"] = eps;
  report["iterations"] = r.iterations;
  report["converged"] = r.converged;
  report["objective"] = to_json(objective_breakdown(r.ell, r.forward.q, s.objective));
  report["grad_norm"] = r.grad_norm;
  report["pass_threshold"] = threshold;
  report["stationarity"] = to_json(st);
  write_text(dir / "report.json", dump(report));
  if (a.plot) write_text(dir / "state.svg", state_chart(r.forward, &r.adjoint, "optimal state"));

  out << "epsilon " << format_double(eps) << " iterations " << r.iterations << " converged "
      << (r.converged ? "yes" : "no") << " objective " << format_double(r.objective)
      << " grad_norm " << format_double(r.grad_norm) << " stationarity "
      << to_string(st.classification) << '\n';
}

// --- sweep ---------------------------------------------------------------

struct SweepArgs {
  std::string scenario, out;
  std::vector<double> eps_list;
  bool cold = false;
  bool plot = false;
};

CsvTable sweep_table(const SweepReport& rep) {
  CsvTable t;
  t.header = {"epsilon",          "objective",      "ell_distance",
              "q_distance",       "xi_sup",         "lambda_dual",
              "lambda_l2",        "grad_norm",      "iterations",
              "converged",        "adjoint_residual", "sign_violation",
              "complementarity_xi", "complementarity_lambda", "gradient_residual",
              "strong"};
  for (const auto& r : rep.rows) {
    const auto& st = r.stationarity;
    t.rows.push_back({r.epsilon, r.objective, r.ell_distance, r.q_distance, r.xi_sup,
                      r.lambda_dual, r.lambda_l2, r.grad_norm,
                      static_cast<double>(r.iterations), r.converged ? 1.0 : 0.0,
                      st.adjoint_residual, st.sign_violation, st.complementarity_xi,
                      st.complementarity_lambda, st.gradient_residual,
                      st.classification == StationarityClass::strong ? 1.0 : 0.0});
  }
  return t;
}

void sweep(const SweepArgs& a, std::ostream& out) {
  const Scenario s = load_scenario(a.scenario);
  const std::vector<double> eps =
      !a.eps_list.empty() ? a.eps_list : (!s.eps_list.empty() ? s.eps_list : default_eps_list());
  SweepOptions opts;
  opts.optimize = s.optimize;
  opts.mode = a.cold ? SweepMode::cold_start : SweepMode::warm_start;
  opts.threads = a.cold ? worker_threads() : 1;
  const SweepReport rep =
      vanishing_viscosity_sweep(eps, SweepScenario{s.params, s.objective, s.control}, opts);

  const OptimizeResult& last = rep.results.back();
  ModelParams limit_params = with_epsilon(s.params, 0.0);
  const StationarityReport limit = check_limit(last.ell, rep.reference_state, last.adjoint.xi,
                                               last.adjoint.lam, limit_params, s.objective);

  const fs::path dir = a.out;
  ensure_dir(dir);
  write_csv((dir / "sweep.csv").string(), sweep_table(rep));
  write_csv((dir / "reference_control.csv").string(), control_table(rep.reference_control));
  Json report;
  report["mode"] = a.cold ? "cold" : "warm";
  report["reference_objective"] = rep.reference_objective;
  report["rows"] = Json::array();
  for (const auto& row : rep.rows) report["rows"].push_back(to_json(row));
  report["limit"] = to_json(limit);
  report["mstat_gap"] = mstat_gap_probe(last.adjoint.xi, last.adjoint.lam);
  write_text(dir / "sweep.json", dump(report));

  if (a.plot) {
    std::vector<double> x;
    std::vector<Series> curves(4);
    curves[0].label = "|q - q_ref|_C0";
    curves[1].label = "|ell - ell_ref|_H1";
    curves[2].label = "|xi|_inf";
    curves[3].label = "dual proxy of lambda";
    for (const auto& row : rep.rows) {
      const double vals[] = {row.q_distance, row.ell_distance, row.xi_sup, row.lambda_dual};
      for (int c = 0; c < 4; ++c) {
        curves[c].x.push_back(row.epsilon);
        curves[c].y.push_back(vals[c]);
      }
    }
    write_text(dir / "sweep.svg",
               line_chart(curves, {"vanishing viscosity sweep", "epsilon", "value", true, false}));
  }

  for (const auto& row : rep.rows)
    out << "epsilon " << format_double(row.epsilon) << " objective "
        << format_double(row.objective) << " q_distance " << format_double(row.q_distance)
        << " iterations " << row.iterations << " " << to_string(row.stationarity.classification)
        << '\n';
  out << "limit " << to_string(limit.classification) << '\n';
}

// --- gradcheck -----------------------------------------------------------

struct GradcheckArgs {
  std::string scenario, out;
  double epsilon = 0.0;
  CLI::Option* epsilon_flag = nullptr;
  int directions = 5;
  double tau = 1e-5;
};

void gradcheck(const GradcheckArgs& a, std::ostream& out) {
  const Scenario s = load_scenario(a.scenario);
  const double eps = pick_epsilon(a.epsilon_flag, a.epsilon, s);
  const GradcheckReport rep = gradient_check(s, eps, a.directions, a.tau, s.seed);
  Json j;
  j["epsilon"] = rep.epsilon;
  j["tau"] = rep.tau;
  j["seed"] = s.seed;
  j["zero_band_intervals"] = rep.zero_band_intervals;
  j["smooth"] = rep.smooth;
  j["max_relative_error"] = rep.max_relative_error;
  j["directions"] = Json::array();
  for (const auto& e : rep.entries)
    j["directions"].push_back(Json{{"finite_difference", e.finite_difference},
                                   {"adjoint", e.adjoint},
                                   {"relative_error", e.relative_error},
                                   {"nonsmooth", e.nonsmooth}});
  if (a.out.empty())
    out << dump(j);
  else
    write_text(a.out, dump(j));
}

// --- check ---------------------------------------------------------------

struct CheckArgs {
  std::string scenario, control, state, out;
  double epsilon = 0.0;
  CLI::Option* epsilon_flag = nullptr;
  bool limit = false;
};

void check(const CheckArgs& a, std::ostream& out) {
  const Scenario s = load_scenario(a.scenario);
  const double eps = pick_epsilon(a.epsilon_flag, a.epsilon, s);
  const CsvTable ctab = read_csv(a.control);
  const CsvTable stab = read_csv(a.state);
  const Trajectory ell = nodal_columns(ctab, "ell");
  const Trajectory q = nodal_columns(stab, "q");
  const Trajectory xi = nodal_columns(stab, "xi");
  const Trajectory lam = interval_columns(stab, "lam");
  if (!(ell.grid() == s.grid) || !(q.grid() == s.grid))
    throw ValidationError("check: tuple grid does not match the scenario grid");

  StationarityReport rep;
  if (a.limit || eps == 0.0) {
    rep = check_limit(ell, q, xi, lam, with_epsilon(s.params, 0.0), s.objective);
  } else {
    const ModelParams p = with_epsilon(s.params, eps);
    const double tol_z = s.optimize.tol_z ? *s.optimize.tol_z : default_tol_z(ell);
    rep = check_viscous(ell, q, xi, lam, p, s.objective, tol_z,
                        viscous_pass_threshold(s.optimize.grad_tol, s.grid.dt(),
                                               scenario_scale(ell, s.objective)));
  }
  Json j = to_json(rep);
  if (!rep.limit) j["epsilon"] = eps;
  j["mstat_gap"] = mstat_gap_probe(xi, lam);
  if (a.out.empty())
    out << dump(j);
  else
    write_text(a.out, dump(j));
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Rate-independent evolution with history: simulation, optimal control and "
               "stationarity checks"};
  app.name("rioc");
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* c_sim = app.add_subcommand("simulate", "Solve the forward problem and write a CSV");
  c_sim->add_option("scenario", sim.scenario, "Scenario JSON")->required()->check(CLI::ExistingFile);
  sim.epsilon_flag = c_sim->add_option("--epsilon", sim.epsilon, "Viscosity (0: rate-independent)");
  c_sim->add_option("--out", sim.out, "Output CSV")->required();
  c_sim->add_flag("--plot", sim.plot, "Also write an SVG next to the CSV");

  OptimizeArgs opt;
  auto* c_opt = app.add_subcommand("optimize", "Minimize the viscous reduced objective");
  c_opt->add_option("scenario", opt.scenario, "Scenario JSON")->required()->check(CLI::ExistingFile);
  opt.epsilon_flag = c_opt->add_option("--epsilon", opt.epsilon, "Viscosity (> 0)");
  c_opt->add_option("--out", opt.out, "Output directory")->required();
  c_opt->add_flag("--plot", opt.plot, "Also write state.svg");

  SweepArgs swp;
  auto* c_swp = app.add_subcommand("sweep", "Vanishing-viscosity sweep");
  c_swp->add_option("scenario", swp.scenario, "Scenario JSON")->required()->check(CLI::ExistingFile);
  c_swp->add_option("--eps-list", swp.eps_list, "Strictly decreasing viscosities")->delimiter(',');
  c_swp->add_flag("--cold", swp.cold, "Independent rows from the initial control, in parallel");
  c_swp->add_option("--out", swp.out, "Output directory")->required();
  c_swp->add_flag("--plot", swp.plot, "Also write sweep.svg");

  GradcheckArgs gc;
  auto* c_gc = app.add_subcommand("gradcheck", "Finite differences against the adjoint gradient");
  c_gc->add_option("scenario", gc.scenario, "Scenario JSON")->required()->check(CLI::ExistingFile);
  gc.epsilon_flag = c_gc->add_option("--epsilon", gc.epsilon, "Viscosity (> 0)");
  c_gc->add_option("--directions", gc.directions, "Number of random directions")
      ->check(CLI::PositiveNumber);
  c_gc->add_option("--tau", gc.tau, "Finite-difference step")->check(CLI::PositiveNumber);
  c_gc->add_option("--out", gc.out, "Output JSON (default: stdout)");

  CheckArgs chk;
  auto* c_chk = app.add_subcommand("check", "Stationarity report for a stored tuple");
  c_chk->add_option("scenario", chk.scenario, "Scenario JSON")->required()->check(CLI::ExistingFile);
  c_chk->add_option("--control", chk.control, "Control CSV (t, ell_i)")
      ->required()->check(CLI::ExistingFile);
  c_chk->add_option("--state", chk.state, "State CSV (t, q_i, ..., xi_i, lam_i)")
      ->required()->check(CLI::ExistingFile);
  chk.epsilon_flag = c_chk->add_option("--epsilon", chk.epsilon, "Viscosity of the tuple");
  c_chk->add_flag("--limit", chk.limit, "Check the limit system instead");
  c_chk->add_option("--out", chk.out, "Output JSON (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*c_sim) simulate(sim, out);
    else if (*c_opt) optimize(opt, out);
    else if (*c_swp) sweep(swp, out);
    else if (*c_gc) gradcheck(gc, out);
    else if (*c_chk) check(chk, out);
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const SolverError& e) {
    err << "solver error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}

}  // namespace rioc::io
