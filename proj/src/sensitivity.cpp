#include "rioc/sensitivity.hpp"

#include <algorithm>

namespace rioc {

int ActivationPattern::count(Activation a) const {
  return static_cast<int>(std::count(labels_.begin(), labels_.end(), a));
}

ActivationPattern classify_z(const Trajectory& z, double tol_z) {
  if (!(tol_z > 0.0)) throw ValidationError("classify_z: tol_z must be > 0");
  ActivationPattern out(z.samples(), z.dim());
  for (int k = 0; k < z.samples(); ++k)
    for (int i = 0; i < z.dim(); ++i) {
      const double x = z(k, i);
      out(k, i) = x > tol_z    ? Activation::positive
                  : x < -tol_z ? Activation::negative
                               : Activation::zero;
    }
  return out;
}

ActivationPattern interval_pattern(const ForwardSolution& sol, double tol_z) {
  const ActivationPattern nodal = classify_z(sol.z, tol_z);
  ActivationPattern out(sol.z.grid().intervals(), sol.z.dim());
  for (int k = 0; k < out.samples(); ++k)
    for (int i = 0; i < out.dim(); ++i) out(k, i) = nodal(k + 1, i);
  return out;
}

double default_tol_z(const Trajectory& ell) { return 1e-8 * (1.0 + sup_norm(ell)); }

SensitivitySolution directional_derivative(const ModelParams& params,
                                           const Trajectory& ell,
                                           const ForwardSolution& sol,
                                           const Trajectory& v, double tol_z) {
  params.validate();
  if (!(params.epsilon > 0.0))
    throw ValidationError("directional_derivative: epsilon must be > 0");
  require_compatible(ell, v, "directional_derivative");
  require_compatible(ell, sol.q, "directional_derivative");

  const TimeGrid& grid = ell.grid();
  const int n = ell.dim();
  const double dt = grid.dt();
  const double alpha = params.alpha;
  const double c = dt / params.epsilon;
  const double denom = 1.0 + alpha * c;
  const auto& dkappa = params.kappa.deriv;

  SensitivitySolution out{Trajectory(grid, n), interval_pattern(sol, tol_z)};
  Trajectory& dq = out.dq;
  std::vector<double> dh(n, 0.0);  // H'(q) dq, lagged like the forward step
  for (int k = 0; k < grid.intervals(); ++k) {
    for (int i = 0; i < n; ++i) {
      const double dw = v(k + 1, i) - dkappa(sol.history(k, i)) * dh[i];
      switch (out.activation_pattern(k, i)) {
        case Activation::positive:
          dq(k + 1, i) = (dq(k, i) + c * dw) / denom;
          break;
        case Activation::negative:
          dq(k + 1, i) = dq(k, i);
          break;
        case Activation::zero:
          dq(k + 1, i) = dw - alpha * dq(k, i) <= 0.0
                             ? dq(k, i)
                             : (dq(k, i) + c * dw) / denom;
          break;
      }
    }
    for (int i = 0; i < n; ++i) dh[i] += 0.5 * dt * (dq(k, i) + dq(k + 1, i));
  }
  return out;
}

}  // namespace rioc
