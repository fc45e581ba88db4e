#pragma once

#include <string>
#include <vector>

#include "rioc/model.hpp"

namespace rioc {

enum class StationarityClass { strong, clarke, inconclusive };

std::string to_string(StationarityClass c);

/// Residuals of an optimality system, recomputed from raw trajectories.
///
/// Conventions shared by every field: xi is nodal, lambda is an interval
/// field, test functions are the nodal hats, and the pairing of lambda with
/// a nodal test function is `load_pairing`. Weak residuals are divided by dt
/// so that they read as pointwise quantities.
struct StationarityReport {
  double adjoint_residual = 0.0;
  /// Viscous: max over intervals of the sign-rule violation in units of xi,
  /// i.e. |eps lam - chi xi|. Limit: max of the bracketing and one-sided
  /// violations below.
  double sign_violation = 0.0;
  double complementarity_xi = 0.0;      ///< max |q'^i xi^i| over intervals
  double complementarity_lambda = 0.0;  ///< max over hats |<lam^i, z^i v>|
  double gradient_residual = 0.0;       ///< H^1 norm of the Riesz residual
  StationarityClass classification = StationarityClass::inconclusive;

  // Filled by check_limit only.
  bool limit = false;
  bool affine = false;
  std::vector<double> terminal_gap;  ///< q(T) - q_d per component
  double bracket_violation = 0.0;    ///< xi between 0 and q(T) - q_d
  double one_sided_violation = 0.0;  ///< sign of <lam, v> for v >= 0
  double same_sign_residual = 0.0;   ///< xi^i(t) <lam^i, v> >= 0
};

/// max(|q_d|_inf, |ell|_inf).
double scenario_scale(const Trajectory& ell, const ObjectiveSpec& obj);

/// 10 max(grad_tol, dt) (1 + scale).
double viscous_pass_threshold(double grad_tol, double dt, double scale);

/// Strong stationarity of the viscous problem: weak adjoint equation with
/// terminal condition, sign rule on the recomputed activation pattern, and
/// the gradient identity. Classification is `strong` when every residual is
/// at most `pass_threshold` (default: viscous_pass_threshold(0, dt, scale)).
StationarityReport check_viscous(const Trajectory& ell, const Trajectory& q,
                                 const Trajectory& xi, const Trajectory& lam,
                                 const ModelParams& params,
                                 const ObjectiveSpec& obj, double tol_z,
                                 double pass_threshold = -1.0);

/// Limit optimality system for a candidate (ell, q, xi, lam). When kappa and
/// j are affine, also checks the sign bracketing of xi, the one-signedness of
/// lambda and the same-sign product, and classifies:
///   strong  - all of those hold within `tol` and q^i(T) >= q_d^i - tol,
///   clarke  - they hold but some q^i(T) < q_d^i - tol,
///   inconclusive - otherwise, or kappa/j not affine.
StationarityReport check_limit(const Trajectory& ell, const Trajectory& q,
                               const Trajectory& xi, const Trajectory& lam,
                               const ModelParams& params,
                               const ObjectiveSpec& obj, double tol = 1e-3);

/// max over intervals of |lam xi| (xi at the left node). Informational.
double mstat_gap_probe(const Trajectory& xi, const Trajectory& lam);

}  // namespace rioc
