#include "rioc/forward.hpp"

#include <algorithm>
#include <cmath>

namespace rioc {

namespace {

void check_inputs(const ModelParams& params, const Trajectory& ell) {
  params.validate();
  if (ell.sampling() != Sampling::nodal)
    throw ValidationError("forward: control must be nodal");
  if (ell.dim() != params.dim())
    throw ValidationError("forward: control dimension does not match y0");
  if (!ell.all_finite()) throw ValidationError("forward: control has NaN/Inf");
}

// Shared recursion. `step` maps (q_k, w) -> q_{k+1} for one component, where
// w = ell_{k+1} - kappa(H_k).
template <class Step>
ForwardSolution integrate(const ModelParams& params, const Trajectory& ell,
                          double epsilon, Step step) {
  const TimeGrid& grid = ell.grid();
  const int n = ell.dim();
  const int N = grid.intervals();
  const double dt = grid.dt();
  const auto& kappa = params.kappa.eval;

  ForwardSolution sol{epsilon,
                      Trajectory(grid, n),
                      Trajectory(grid, n, Sampling::interval),
                      Trajectory(grid, n),
                      Trajectory(grid, n),
                      Trajectory(grid, 1)};
  Trajectory& q = sol.q;
  Trajectory& h = sol.history;
  for (int i = 0; i < n; ++i) {
    h(0, i) = params.y0[i];
    sol.z(0, i) = ell(0, i) - kappa(h(0, i));
  }
  for (int k = 0; k < N; ++k) {
    for (int i = 0; i < n; ++i) {
      const double w = ell(k + 1, i) - kappa(h(k, i));
      q(k + 1, i) = step(q(k, i), w);
      sol.z(k + 1, i) = w - params.alpha * q(k + 1, i);
      sol.qdot(k, i) = (q(k + 1, i) - q(k, i)) / dt;
    }
    for (int i = 0; i < n; ++i)
      h(k + 1, i) = h(k, i) + 0.5 * dt * (q(k, i) + q(k + 1, i));
  }
  sol.energy_residual = energy_balance_residual(sol, ell, params);
  return sol;
}

}  // namespace

ForwardSolution solve_viscous(const ModelParams& params, const Trajectory& ell) {
  check_inputs(params, ell);
  const double eps = params.epsilon;
  if (!(eps > 0.0)) throw ValidationError("solve_viscous: epsilon must be > 0");
  const double alpha = params.alpha;
  const double c = ell.grid().dt() / eps;
  const double denom = 1.0 + alpha * c;
  return integrate(params, ell, eps, [=](double qk, double w) {
    if (w - alpha * qk <= 0.0) return qk;
    return (qk + c * w) / denom;
  });
}

ForwardSolution solve_rate_independent(const ModelParams& params,
                                       const Trajectory& ell) {
  check_inputs(params, ell);
  const double alpha = params.alpha;
  return integrate(params, ell, 0.0, [=](double qk, double w) {
    return std::max(qk, w / alpha);
  });
}

ForwardSolution solve_forward(const ModelParams& params, const Trajectory& ell) {
  return params.epsilon > 0.0 ? solve_viscous(params, ell)
                              : solve_rate_independent(params, ell);
}

Trajectory energy_balance_residual(const ForwardSolution& sol,
                                   const Trajectory& ell,
                                   const ModelParams& params) {
  require_compatible(sol.q, ell, "energy_balance_residual");
  const TimeGrid& grid = ell.grid();
  const int n = ell.dim();
  const double dt = grid.dt();
  const auto& kappa = params.kappa.eval;

  Trajectory r(grid, 1);
  double accumulated = 0.0;  // the three time integrals up to t_m
  for (int m = 0; m <= grid.intervals(); ++m) {
    if (m > 0) {
      const int k = m - 1;
      for (int i = 0; i < n; ++i) {
        const double dq = sol.q(m, i) - sol.q(k, i);
        const double kappa_mid =
            0.5 * (kappa(sol.history(k, i)) + kappa(sol.history(m, i)));
        const double q_mid = 0.5 * (sol.q(k, i) + sol.q(m, i));
        accumulated += kappa_mid * dq + sol.epsilon * dq * dq / dt +
                       (ell(m, i) - ell(k, i)) * q_mid;
      }
    }
    r(m, 0) = std::abs(accumulated + stored_energy(sol.q.sample(m),
                                                   ell.sample(m), params));
  }
  return r;
}

ComplementarityMeasures complementarity_measures(const ForwardSolution& sol) {
  ComplementarityMeasures out;
  out.max_z = -INFINITY;
  for (double z : sol.z.data()) out.max_z = std::max(out.max_z, z);
  for (int k = 0; k < sol.q.grid().intervals(); ++k)
    for (int i = 0; i < sol.q.dim(); ++i) {
      const double dq = sol.q(k + 1, i) - sol.q(k, i);
      out.max_rate_times_z =
          std::max(out.max_rate_times_z, std::abs(dq * sol.z(k + 1, i)));
    }
  return out;
}

double complementarity_tolerance(const Trajectory& ell) {
  return 10.0 * ell.grid().dt() * (1.0 + sup_norm(ell));
}

}  // namespace rioc
