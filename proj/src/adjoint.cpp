#include "rioc/adjoint.hpp"

namespace rioc {

AdjointSolution solve_adjoint(const ModelParams& params, const Trajectory& ell,
                              const ForwardSolution& sol,
                              const ObjectiveSpec& obj, double tol_z) {
  params.validate();
  if (!(params.epsilon > 0.0))
    throw ValidationError("solve_adjoint: epsilon must be > 0");
  require_compatible(ell, sol.q, "solve_adjoint");
  obj.validate(ell.dim(), ell.grid());

  const TimeGrid& grid = ell.grid();
  const int n = ell.dim();
  const int N = grid.intervals();
  const double dt = grid.dt();
  const double eps = params.epsilon;
  const double damping = 1.0 + params.alpha * dt / eps;
  const auto& dkappa = params.kappa.deriv;
  const auto weights = trapezoid_weights(grid);
  const Trajectory source = state_cost_gradient(obj, sol.q);

  AdjointSolution adj{Trajectory(grid, n), Trajectory(grid, n, Sampling::interval),
                      Trajectory(grid, n), interval_pattern(sol, tol_z)};
  for (int i = 0; i < n; ++i) adj.xi(N, i) = sol.q(N, i) - obj.q_d[i];

  // acc holds int_{t_m}^T kappa'(H) lam (sum over intervals m..N-1) and
  // acc_next the same quantity one node later.
  for (int i = 0; i < n; ++i) {
    double acc = 0.0;
    double acc_next = 0.0;
    for (int m = N; m >= 1; --m) {
      const double rhs = adj.xi(m, i) + weights[m] * source(m, i) -
                         0.5 * dt * (acc + acc_next);
      const int k = m - 1;
      if (adj.pattern(k, i) == Activation::positive) {
        adj.xi(k, i) = rhs / damping;
        adj.lam(k, i) = adj.xi(k, i) / eps;
      } else {
        adj.xi(k, i) = rhs;
        adj.lam(k, i) = 0.0;
      }
      acc_next = acc;
      acc += dt * dkappa(sol.history(k, i)) * adj.lam(k, i);
    }
  }
  adj.Lam = backward_integral(adj.lam);
  return adj;
}

Trajectory reduced_gradient(const Trajectory& ell, const AdjointSolution& adj,
                            const ObjectiveSpec& obj) {
  if (!(adj.lam.grid() == ell.grid()) || adj.lam.dim() != ell.dim())
    throw ValidationError("reduced_gradient: adjoint does not match control");
  const double dt = ell.grid().dt();
  Trajectory rhs = h1_functional(ell);
  if (obj.include_proximal) {
    if (!obj.proximal_anchor)
      throw ValidationError("reduced_gradient: proximal term without anchor");
    rhs += h1_functional(ell - *obj.proximal_anchor);
  }
  for (int k = 0; k < adj.lam.samples(); ++k)
    for (int i = 0; i < ell.dim(); ++i)
      rhs(k + 1, i) += kGradientSign * dt * adj.lam(k, i);
  return riesz_h10(rhs);
}

}  // namespace rioc
