#include "rioc/stationarity.hpp"

#include <algorithm>
#include <cmath>

namespace rioc {

std::string to_string(StationarityClass c) {
  switch (c) {
    case StationarityClass::strong:
      return "strong";
    case StationarityClass::clarke:
      return "C";
    case StationarityClass::inconclusive:
      return "inconclusive";
  }
  return "inconclusive";
}

double scenario_scale(const Trajectory& ell, const ObjectiveSpec& obj) {
  double s = sup_norm(ell);
  for (double x : obj.q_d) s = std::max(s, std::abs(x));
  return s;
}

double viscous_pass_threshold(double grad_tol, double dt, double scale) {
  return 10.0 * std::max(grad_tol, dt) * (1.0 + scale);
}

namespace {

void check_tuple(const Trajectory& ell, const Trajectory& q,
                 const Trajectory& xi, const Trajectory& lam,
                 const ModelParams& params, const ObjectiveSpec& obj) {
  require_compatible(ell, q, "stationarity");
  require_compatible(ell, xi, "stationarity");
  if (ell.sampling() != Sampling::nodal)
    throw ValidationError("stationarity: ell, q and xi must be nodal");
  if (lam.sampling() != Sampling::interval || !(lam.grid() == ell.grid()) ||
      lam.dim() != ell.dim())
    throw ValidationError("stationarity: lambda must be an interval field");
  if (ell.dim() != params.dim())
    throw ValidationError("stationarity: dimension mismatch with model");
  obj.validate(ell.dim(), ell.grid());
}

// Weak residual of
//   int xi v' + alpha <lam, v> + <lam, kappa'(H(q)) H(v)> = int j'(q) v + <e, v(T)>
// on every hat v = phi_m, m = 1..N, divided by dt. H(phi_m) is the trapezoid
// primitive of the hat: 0 up to t_{m-1}, dt/2 at t_m, dt afterwards.
double weak_adjoint_residual(const Trajectory& q, const Trajectory& xi,
                             const Trajectory& lam, const ModelParams& params,
                             const ObjectiveSpec& obj) {
  const TimeGrid& grid = q.grid();
  const int N = grid.intervals();
  const double dt = grid.dt();
  const auto w = trapezoid_weights(grid);
  const Trajectory h = history(q, params.y0);
  const Trajectory jprime = state_cost_gradient(obj, q);

  double worst = 0.0;
  std::vector<double> tail(N + 1);  // tail[m] = sum_{k >= m} dt kappa'(H_k) lam_k
  for (int i = 0; i < q.dim(); ++i) {
    tail[N] = 0.0;
    for (int k = N - 1; k >= 0; --k)
      tail[k] = tail[k + 1] + dt * params.kappa.deriv(h(k, i)) * lam(k, i);
    const double terminal = q(N, i) - obj.q_d[i];
    for (int m = 1; m <= N; ++m) {
      double r = xi(m - 1, i) + params.alpha * dt * lam(m - 1, i) -
                 w[m] * jprime(m, i);
      if (m < N) {
        r -= xi(m, i);
        r += dt * (0.5 * dt * params.kappa.deriv(h(m, i)) * lam(m, i) +
                   tail[m + 1]);
      } else {
        r -= terminal;
      }
      worst = std::max(worst, std::abs(r) / dt);
    }
  }
  return worst;
}

double riesz_residual(const Trajectory& ell, const Trajectory& lam,
                      const ObjectiveSpec& obj, bool with_proximal) {
  Trajectory rhs = h1_functional(ell);
  if (with_proximal && obj.include_proximal)
    rhs += h1_functional(ell - *obj.proximal_anchor);
  const double dt = ell.grid().dt();
  for (int k = 0; k < lam.samples(); ++k)
    for (int i = 0; i < lam.dim(); ++i) rhs(k + 1, i) += dt * lam(k, i);
  return h1_norm(riesz_h10(rhs));
}

double rate_times_xi(const Trajectory& q, const Trajectory& xi) {
  const double dt = q.grid().dt();
  double worst = 0.0;
  for (int k = 0; k < q.grid().intervals(); ++k)
    for (int i = 0; i < q.dim(); ++i)
      worst = std::max(worst, std::abs((q(k + 1, i) - q(k, i)) / dt * xi(k, i)));
  return worst;
}

double lambda_times_z(const Trajectory& lam, const Trajectory& z) {
  const double dt = lam.grid().dt();
  double worst = 0.0;
  for (int k = 0; k < lam.samples(); ++k)
    for (int i = 0; i < lam.dim(); ++i)
      worst = std::max(worst, std::abs(dt * lam(k, i) * z(k + 1, i)));
  return worst;
}

double distance_to(double x, double lo, double hi) {
  return x < lo ? lo - x : (x > hi ? x - hi : 0.0);
}

}  // namespace

StationarityReport check_viscous(const Trajectory& ell, const Trajectory& q,
                                 const Trajectory& xi, const Trajectory& lam,
                                 const ModelParams& params,
                                 const ObjectiveSpec& obj, double tol_z,
                                 double pass_threshold) {
  check_tuple(ell, q, xi, lam, params, obj);
  if (!(params.epsilon > 0.0))
    throw ValidationError("check_viscous: epsilon must be > 0");
  if (!(tol_z > 0.0)) throw ValidationError("check_viscous: tol_z must be > 0");
  const TimeGrid& grid = ell.grid();
  const int N = grid.intervals();
  const double eps = params.epsilon;

  StationarityReport rep;
  rep.adjoint_residual = weak_adjoint_residual(q, xi, lam, params, obj);
  for (int i = 0; i < q.dim(); ++i)
    rep.adjoint_residual = std::max(
        rep.adjoint_residual, std::abs(xi(N, i) - (q(N, i) - obj.q_d[i])));

  // Driving force seen by step k: -alpha q_{k+1} + ell_{k+1} - kappa(H_k).
  const Trajectory h = history(q, params.y0);
  for (int k = 0; k < N; ++k)
    for (int i = 0; i < q.dim(); ++i) {
      const double z = -params.alpha * q(k + 1, i) + ell(k + 1, i) -
                       params.kappa.eval(h(k, i));
      const double scaled = eps * lam(k, i);
      double v;
      if (z > tol_z)
        v = std::abs(scaled - xi(k, i));
      else if (z < -tol_z)
        v = std::abs(scaled);
      else
        v = distance_to(scaled, 0.0, std::max(xi(k, i), 0.0));
      rep.sign_violation = std::max(rep.sign_violation, v);
    }

  rep.gradient_residual = riesz_residual(ell, lam, obj, true);
  rep.complementarity_xi = rate_times_xi(q, xi);
  rep.complementarity_lambda = lambda_times_z(lam, z_field(q, ell, params));

  const double threshold =
      pass_threshold >= 0.0
          ? pass_threshold
          : viscous_pass_threshold(0.0, grid.dt(), scenario_scale(ell, obj));
  const bool pass = rep.adjoint_residual <= threshold &&
                    rep.sign_violation <= threshold &&
                    rep.gradient_residual <= threshold;
  rep.classification =
      pass ? StationarityClass::strong : StationarityClass::inconclusive;
  return rep;
}

StationarityReport check_limit(const Trajectory& ell, const Trajectory& q,
                               const Trajectory& xi, const Trajectory& lam,
                               const ModelParams& params,
                               const ObjectiveSpec& obj, double tol) {
  check_tuple(ell, q, xi, lam, params, obj);
  const TimeGrid& grid = ell.grid();
  const int N = grid.intervals();
  const double dt = grid.dt();
  const int n = ell.dim();

  StationarityReport rep;
  rep.limit = true;
  rep.adjoint_residual = weak_adjoint_residual(q, xi, lam, params, obj);
  rep.complementarity_xi = rate_times_xi(q, xi);
  rep.complementarity_lambda = lambda_times_z(lam, z_field(q, ell, params));
  rep.gradient_residual = riesz_residual(ell, lam, obj, false);
  rep.affine = params.kappa.is_affine && obj.state_cost_is_affine();
  rep.terminal_gap.resize(n);
  for (int i = 0; i < n; ++i) rep.terminal_gap[i] = q(N, i) - obj.q_d[i];

  bool below_target = false;
  for (int i = 0; i < n; ++i) {
    const double gap = rep.terminal_gap[i];
    const bool attained = std::abs(gap) <= tol;
    if (gap < -tol) below_target = true;

    for (int k = 0; k < N; ++k)
      rep.bracket_violation =
          std::max(rep.bracket_violation,
                   distance_to(xi(k, i), std::min(gap, 0.0), std::max(gap, 0.0)));

    // Hat pairings <lam^i, phi_m> = dt lam_{m-1}.
    double pair_pos = 0.0, pair_neg = 0.0;
    for (int k = 0; k < N; ++k) {
      const double p = dt * lam(k, i);
      pair_pos = std::max(pair_pos, p);
      pair_neg = std::max(pair_neg, -p);
      double v = 0.0;
      if (attained)
        v = std::abs(p);
      else if (gap > 0.0)
        v = std::max(0.0, -p);
      else
        v = std::max(0.0, p);
      rep.one_sided_violation = std::max(rep.one_sided_violation, v);
    }

    if (!attained) {
      double xi_pos = 0.0, xi_neg = 0.0;
      for (int k = 0; k < N; ++k) {
        xi_pos = std::max(xi_pos, xi(k, i));
        xi_neg = std::max(xi_neg, -xi(k, i));
      }
      // Most negative product xi(t) <lam, phi_m> over all t and m.
      rep.same_sign_residual = std::max(
          {rep.same_sign_residual, xi_pos * pair_neg, xi_neg * pair_pos});
    }
  }

  if (!rep.affine) {
    rep.bracket_violation = 0.0;
    rep.one_sided_violation = 0.0;
    rep.classification = StationarityClass::inconclusive;
    return rep;
  }
  rep.sign_violation = std::max(rep.bracket_violation, rep.one_sided_violation);
  const bool c_stationary = rep.same_sign_residual <= tol &&
                            rep.bracket_violation <= tol &&
                            rep.one_sided_violation <= tol;
  if (!c_stationary)
    rep.classification = StationarityClass::inconclusive;
  else
    rep.classification =
        below_target ? StationarityClass::clarke : StationarityClass::strong;
  return rep;
}

double mstat_gap_probe(const Trajectory& xi, const Trajectory& lam) {
  if (lam.sampling() != Sampling::interval || !(lam.grid() == xi.grid()) ||
      lam.dim() != xi.dim())
    throw ValidationError("mstat_gap_probe: lambda must match xi's grid");
  double worst = 0.0;
  for (int k = 0; k < lam.samples(); ++k)
    for (int i = 0; i < lam.dim(); ++i)
      worst = std::max(worst, std::abs(lam(k, i) * xi(k, i)));
  return worst;
}

}  // namespace rioc
