#pragma once

#include "rioc/model.hpp"

namespace rioc {

/// Output of either forward solver.
///
/// `z` is the driving force as seen by the time step: at node k+1 it is
/// -alpha q_{k+1} + ell_{k+1} - kappa(H_k), with the history lagged by one
/// step exactly as in the update. Its sign on node k+1 decides whether the
/// interval [t_k, t_{k+1}] is active. `z_field` gives the unlagged value;
/// the two differ by O(dt).
struct ForwardSolution {
  double epsilon = 0.0;
  Trajectory q;
  Trajectory qdot;     ///< interval-wise rates (q_{k+1} - q_k) / dt
  Trajectory z;
  Trajectory history;  ///< H(q), trapezoid
  Trajectory energy_residual;  ///< scalar per node, see energy_balance_residual
};

/// Semi-implicit viscous step: implicit in -alpha q, history lagged.
/// Requires epsilon > 0.
ForwardSolution solve_viscous(const ModelParams& params, const Trajectory& ell);

/// Time-incremental complementarity step
/// q_{k+1} = max(q_k, (ell_{k+1} - kappa(H_k)) / alpha).
/// Ignores params.epsilon.
ForwardSolution solve_rate_independent(const ModelParams& params,
                                       const Trajectory& ell);

/// Dispatches on params.epsilon (0 selects the rate-independent solver).
ForwardSolution solve_forward(const ModelParams& params, const Trajectory& ell);

/// Per-node residual of the energy balance
///   int_0^t <kappa(H), q'> + eps int_0^t |q'|^2 + (alpha/2)|q(t)|^2
///     - <ell(t), q(t)> + int_0^t <ell', q>
/// with interval-wise trapezoid quadrature. Uses sol.epsilon.
Trajectory energy_balance_residual(const ForwardSolution& sol,
                                   const Trajectory& ell,
                                   const ModelParams& params);

/// Feasibility and complementarity measures of a forward solution.
struct ComplementarityMeasures {
  double max_z = 0.0;             ///< max over nodes/components of z
  double max_rate_times_z = 0.0;  ///< max over intervals of |dq_i z_i|
};
ComplementarityMeasures complementarity_measures(const ForwardSolution& sol);

/// Default complementarity tolerance 10 dt (1 + |ell|_inf).
double complementarity_tolerance(const Trajectory& ell);

inline constexpr double kFeasibilityTolerance = 1e-10;

}  // namespace rioc
