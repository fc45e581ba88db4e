#include "rioc/optimizer.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <sstream>
#include <thread>

namespace rioc {

void OptimizeOptions::validate() const {
  if (!(c1 > 0.0 && c1 < 1.0)) throw ValidationError("optimize: c1 must be in (0,1)");
  if (!(backtrack > 0.0 && backtrack < 1.0))
    throw ValidationError("optimize: backtracking factor must be in (0,1)");
  if (!(initial_step > 0.0)) throw ValidationError("optimize: initial step must be > 0");
  if (!(grad_tol > 0.0)) throw ValidationError("optimize: grad_tol must be > 0");
  if (max_iters < 0 || max_backtracks < 1)
    throw ValidationError("optimize: iteration limits must be nonnegative");
  if (tol_z && !(*tol_z > 0.0)) throw ValidationError("optimize: tol_z must be > 0");
}

ObjectiveBreakdown objective_breakdown(const Trajectory& ell,
                                       const Trajectory& q,
                                       const ObjectiveSpec& obj) {
  ObjectiveBreakdown b;
  b.state_cost = state_cost(obj, q);
  const int N = q.grid().intervals();
  for (int i = 0; i < q.dim(); ++i) {
    const double d = q(N, i) - obj.q_d[i];
    b.terminal += 0.5 * d * d;
  }
  b.control = 0.5 * h1_inner(ell, ell);
  if (obj.include_proximal) {
    const Trajectory diff = ell - *obj.proximal_anchor;
    b.proximal = 0.5 * h1_inner(diff, diff);
  }
  return b;
}

double evaluate_objective(const Trajectory& ell, const ModelParams& params,
                          const ObjectiveSpec& obj) {
  obj.validate(ell.dim(), ell.grid());
  const ForwardSolution sol = solve_forward(params, ell);
  return objective_breakdown(ell, sol.q, obj).total();
}

namespace {

struct Evaluation {
  ForwardSolution forward;
  double objective;
};

Evaluation evaluate(const Trajectory& ell, const ModelParams& params,
                    const ObjectiveSpec& obj) {
  ForwardSolution sol = solve_viscous(params, ell);
  const double value = objective_breakdown(ell, sol.q, obj).total();
  return {std::move(sol), value};
}

}  // namespace

OptimizeResult minimize_viscous(const Trajectory& ell0, const ModelParams& params,
                                const ObjectiveSpec& obj,
                                const OptimizeOptions& opts) {
  params.validate();
  opts.validate();
  if (!(params.epsilon > 0.0))
    throw ValidationError("minimize_viscous: epsilon must be > 0");
  if (!ell0.zero_initial())
    throw ValidationError("minimize_viscous: initial control must vanish at t = 0");
  obj.validate(ell0.dim(), ell0.grid());

  auto tol_z_for = [&](const Trajectory& ell) {
    return opts.tol_z ? *opts.tol_z : default_tol_z(ell);
  };

  Trajectory ell = ell0;
  Evaluation current = evaluate(ell, params, obj);
  AdjointSolution adj =
      solve_adjoint(params, ell, current.forward, obj, tol_z_for(ell));
  Trajectory g = reduced_gradient(ell, adj, obj);
  double g_sq = h1_inner(g, g);

  OptimizeResult res{ell, current.forward, adj, g, 0.0, 0.0, 0, false, {}};
  res.log.push_back({0, current.objective, std::sqrt(g_sq), 0.0, 0});

  int iter = 0;
  bool converged = std::sqrt(g_sq) <= opts.grad_tol;
  while (!converged && iter < opts.max_iters) {
    double step = opts.initial_step;
    int backtracks = 0;
    for (;;) {
      Trajectory trial = ell - step * g;
      Evaluation next = evaluate(trial, params, obj);
      if (next.objective <= current.objective - opts.c1 * step * g_sq) {
        ell = std::move(trial);
        current = std::move(next);
        break;
      }
      if (++backtracks > opts.max_backtracks) {
        std::ostringstream msg;
        msg << "minimize_viscous: no Armijo step after " << opts.max_backtracks
            << " reductions at iteration " << iter + 1
            << " (objective " << current.objective << ", |g|_H1 "
            << std::sqrt(g_sq) << ")";
        throw SolverError(msg.str());
      }
      step *= opts.backtrack;
    }
    ++iter;
    adj = solve_adjoint(params, ell, current.forward, obj, tol_z_for(ell));
    g = reduced_gradient(ell, adj, obj);
    g_sq = h1_inner(g, g);
    res.log.push_back({iter, current.objective, std::sqrt(g_sq), step, backtracks});
    converged = std::sqrt(g_sq) <= opts.grad_tol;
  }

  res.ell = std::move(ell);
  res.forward = std::move(current.forward);
  res.adjoint = std::move(adj);
  res.gradient = std::move(g);
  res.objective = current.objective;
  res.grad_norm = std::sqrt(g_sq);
  res.iterations = iter;
  res.converged = converged;
  return res;
}

std::vector<double> default_eps_list() {
  std::vector<double> out;
  for (int j = 0; j <= 6; ++j) out.push_back(std::pow(10.0, -1.0 - 0.5 * j));
  return out;
}

namespace {

ModelParams with_epsilon(ModelParams p, double eps) {
  p.epsilon = eps;
  return p;
}

SweepRow describe_row(double eps, const OptimizeResult& r,
                      const ObjectiveSpec& obj, const ModelParams& params,
                      const ObjectiveBreakdown& init,
                      const OptimizeOptions& opts) {
  SweepRow row;
  row.epsilon = eps;
  row.objective = r.objective;
  row.breakdown = objective_breakdown(r.ell, r.forward.q, obj);
  row.init_breakdown = init;
  row.xi_sup = sup_norm(r.adjoint.xi);
  row.lambda_dual = dual_w1inf_proxy(r.adjoint.lam);
  row.lambda_l2 = l2_norm(r.adjoint.lam);
  row.grad_norm = r.grad_norm;
  row.iterations = r.iterations;
  row.converged = r.converged;
  const double tol_z = opts.tol_z ? *opts.tol_z : default_tol_z(r.ell);
  row.stationarity = check_viscous(
      r.ell, r.forward.q, r.adjoint.xi, r.adjoint.lam, params, obj, tol_z,
      viscous_pass_threshold(opts.grad_tol, r.ell.grid().dt(),
                             scenario_scale(r.ell, obj)));
  return row;
}

}  // namespace

SweepReport vanishing_viscosity_sweep(const std::vector<double>& eps_list,
                                      const SweepScenario& scenario,
                                      const SweepOptions& opts) {
  if (eps_list.empty()) throw ValidationError("sweep: empty epsilon list");
  for (std::size_t j = 0; j < eps_list.size(); ++j) {
    if (!(eps_list[j] > 0.0)) throw ValidationError("sweep: epsilon must be > 0");
    if (j > 0 && !(eps_list[j] < eps_list[j - 1]))
      throw ValidationError("sweep: epsilon list must be strictly decreasing");
  }
  opts.optimize.validate();

  const std::size_t rows = eps_list.size();
  std::vector<std::optional<OptimizeResult>> results(rows);
  std::vector<ObjectiveSpec> objectives(rows, scenario.objective);
  std::vector<ObjectiveBreakdown> init(rows);

  if (opts.mode == SweepMode::warm_start) {
    Trajectory start = scenario.initial_control;
    for (std::size_t j = 0; j < rows; ++j) {
      if (j > 0) {
        objectives[j].include_proximal = true;
        objectives[j].proximal_anchor = start;
      }
      const ModelParams p = with_epsilon(scenario.params, eps_list[j]);
      init[j] = objective_breakdown(start, solve_viscous(p, start).q, objectives[j]);
      results[j] = minimize_viscous(start, p, objectives[j], opts.optimize);
      start = results[j]->ell;
    }
  } else {
    const int workers =
        std::clamp(opts.threads, 1, static_cast<int>(rows));
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(rows);
    auto work = [&] {
      for (std::size_t j; (j = next.fetch_add(1)) < rows;) {
        try {
          const ModelParams p = with_epsilon(scenario.params, eps_list[j]);
          init[j] = objective_breakdown(scenario.initial_control,
                                        solve_viscous(p, scenario.initial_control).q,
                                        objectives[j]);
          results[j] = minimize_viscous(scenario.initial_control, p,
                                        objectives[j], opts.optimize);
        } catch (...) {
          errors[j] = std::current_exception();
        }
      }
    };
    std::vector<std::thread> pool;
    for (int w = 1; w < workers; ++w) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }

  const OptimizeResult& last = *results.back();
  ModelParams limit_params = with_epsilon(scenario.params, 0.0);
  ObjectiveSpec plain = scenario.objective;
  plain.include_proximal = false;
  const ForwardSolution reference = solve_rate_independent(limit_params, last.ell);

  SweepReport report{{}, {}, last.ell, reference.q,
                     objective_breakdown(last.ell, reference.q, plain).total()};
  for (std::size_t j = 0; j < rows; ++j) {
    const OptimizeResult& r = *results[j];
    SweepRow row = describe_row(eps_list[j], r, objectives[j],
                                with_epsilon(scenario.params, eps_list[j]),
                                init[j], opts.optimize);
    row.ell_distance = h1_norm(r.ell - report.reference_control);
    row.q_distance = sup_norm(r.forward.q - report.reference_state);
    report.rows.push_back(std::move(row));
    report.results.push_back(r);
  }
  return report;
}

}  // namespace rioc
