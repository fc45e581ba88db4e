#pragma once

#include <optional>
#include <vector>

#include "rioc/adjoint.hpp"
#include "rioc/stationarity.hpp"

namespace rioc {

struct OptimizeOptions {
  int max_iters = 500;
  double c1 = 1e-4;            ///< Armijo sufficient-decrease constant
  double backtrack = 0.5;      ///< step reduction factor
  double initial_step = 1.0;
  int max_backtracks = 60;
  double grad_tol = 1e-6;      ///< on the H^1 norm of the Riesz gradient
  std::optional<double> tol_z; ///< default: default_tol_z(ell)

  void validate() const;
};

/// Terms of the reduced objective.
struct ObjectiveBreakdown {
  double state_cost = 0.0;
  double terminal = 0.0;  ///< (1/2)|q(T) - q_d|^2
  double control = 0.0;   ///< (1/2)|ell|_H1^2
  double proximal = 0.0;  ///< (1/2)|ell - anchor|_H1^2 when enabled
  double total() const { return state_cost + terminal + control + proximal; }
};

ObjectiveBreakdown objective_breakdown(const Trajectory& ell,
                                       const Trajectory& q,
                                       const ObjectiveSpec& obj);

/// j(q) + (1/2)|q(T) - q_d|^2 + (1/2)|ell|_H1^2 [+ proximal], with q from the
/// viscous solver if params.epsilon > 0 and the rate-independent one otherwise.
double evaluate_objective(const Trajectory& ell, const ModelParams& params,
                          const ObjectiveSpec& obj);

struct IterateRecord {
  int iteration = 0;
  double objective = 0.0;
  double grad_norm = 0.0;
  double step = 0.0;  ///< accepted step (0 for the initial record)
  int backtracks = 0;
};

struct OptimizeResult {
  Trajectory ell;
  ForwardSolution forward;
  AdjointSolution adjoint;
  Trajectory gradient;
  double objective = 0.0;
  double grad_norm = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<IterateRecord> log;
};

/// Armijo-backtracked steepest descent in the discrete H^1_0 metric.
/// Throws SolverError when no step satisfies the Armijo condition within
/// opts.max_backtracks reductions.
OptimizeResult minimize_viscous(const Trajectory& ell0, const ModelParams& params,
                                const ObjectiveSpec& obj,
                                const OptimizeOptions& opts);

// ---------------------------------------------------------------------------
// Vanishing-viscosity sweep

struct SweepScenario {
  ModelParams params;  ///< epsilon is overridden per row
  ObjectiveSpec objective;
  Trajectory initial_control;
};

enum class SweepMode {
  /// Sequential: each row starts from the previous optimum and anchors the
  /// proximal term there. The first row uses the scenario objective as is.
  warm_start,
  /// Independent rows from the initial control, scenario objective as is.
  cold_start,
};

struct SweepOptions {
  OptimizeOptions optimize;
  SweepMode mode = SweepMode::warm_start;
  int threads = 1;  ///< used by cold_start only
};

struct SweepRow {
  double epsilon = 0.0;
  double objective = 0.0;
  ObjectiveBreakdown breakdown;       ///< at the optimum
  ObjectiveBreakdown init_breakdown;  ///< at the row's initial control
  double ell_distance = 0.0;  ///< |ell_eps - ell_ref|_H1
  double q_distance = 0.0;    ///< |q_eps - q_ref|_C0
  double xi_sup = 0.0;
  double lambda_dual = 0.0;   ///< dual_w1inf_proxy(lam)
  double lambda_l2 = 0.0;
  double grad_norm = 0.0;
  int iterations = 0;
  bool converged = false;
  StationarityReport stationarity;
};

struct SweepReport {
  std::vector<SweepRow> rows;
  std::vector<OptimizeResult> results;  ///< parallel to rows
  Trajectory reference_control;  ///< optimum at the smallest epsilon
  Trajectory reference_state;    ///< rate-independent state of that control
  double reference_objective = 0.0;  ///< unregularized objective, eps = 0
};

/// 10^-1, 10^-1.5, ..., 10^-4.
std::vector<double> default_eps_list();

SweepReport vanishing_viscosity_sweep(const std::vector<double>& eps_list,
                                      const SweepScenario& scenario,
                                      const SweepOptions& opts);

}  // namespace rioc
