#include <doctest.h>

#include <random>

#include "rioc/stationarity.hpp"
#include "test_support.hpp"

using namespace rioc;
namespace rt = rioc::testing;

TEST_CASE("all-zero tuple is strongly stationary") {
  const TimeGrid grid(1.0, 100);
  const ModelParams p = rt::scalar_model(1.0, 0.5, 0.1);
  ObjectiveSpec obj;
  obj.q_d = {0.0};
  const Trajectory zero(grid, 1);
  const Trajectory lam(grid, 1, Sampling::interval);
  for (const auto& rep : {check_viscous(zero, zero, zero, lam, p, obj, 1e-8),
                          check_limit(zero, zero, zero, lam, p, obj)}) {
    CHECK(rep.adjoint_residual == 0.0);
    CHECK(rep.sign_violation == 0.0);
    CHECK(rep.complementarity_xi == 0.0);
    CHECK(rep.complementarity_lambda == 0.0);
    CHECK(rep.gradient_residual == 0.0);
    CHECK(rep.classification == StationarityClass::strong);
  }
  CHECK(to_string(StationarityClass::clarke) == "C");
}

TEST_CASE("checker agrees with the adjoint integrator off the optimum") {
  // Adjoint and sign conditions hold for any control; only the gradient
  // identity needs optimality.
  for (double eps : {1e-1, 1e-2, 1e-3}) {
    CAPTURE(eps);
    rt::TransversalScenario sc(eps);
    ObjectiveSpec obj;
    obj.q_d = {2.0, 1.0};
    obj.kind = StateCost::linear;
    obj.weights = {0.2, -0.1};
    const ForwardSolution sol = solve_viscous(sc.params, sc.ell);
    const double tol = default_tol_z(sc.ell);
    const AdjointSolution adj = solve_adjoint(sc.params, sc.ell, sol, obj, tol);
    const StationarityReport rep =
        check_viscous(sc.ell, sol.q, adj.xi, adj.lam, sc.params, obj, tol);
    const double scale = 1.0 + scenario_scale(sc.ell, obj);
    CHECK(rep.adjoint_residual <= 1e-9 * scale);
    CHECK(rep.sign_violation <= 1e-12 * scale);
    CHECK(rep.gradient_residual == doctest::Approx(h1_norm(reduced_gradient(sc.ell, adj, obj))));
    CHECK(rep.gradient_residual > 1.0);
    CHECK(rep.classification == StationarityClass::inconclusive);
  }
}

TEST_CASE("converged optimum passes the viscous check") {
  for (double eps : {1e-1, 1e-3}) {
    const rt::BelowTargetScenario sc(eps);
    OptimizeOptions opts;
    const OptimizeResult r = minimize_viscous(sc.start, sc.params, sc.objective, opts);
    REQUIRE(r.converged);
    const double threshold = viscous_pass_threshold(opts.grad_tol, sc.grid.dt(),
                                                    scenario_scale(r.ell, sc.objective));
    const StationarityReport rep = check_viscous(r.ell, r.forward.q, r.adjoint.xi, r.adjoint.lam,
                                                 sc.params, sc.objective,
                                                 default_tol_z(r.ell), threshold);
    CHECK(rep.adjoint_residual <= threshold);
    CHECK(rep.sign_violation <= threshold);
    CHECK(rep.gradient_residual <= threshold);
    CHECK(rep.classification == StationarityClass::strong);
  }
}

TEST_CASE("corrupted tuples are flagged") {
  const rt::BelowTargetScenario sc(1e-2);
  const OptimizeResult r =
      minimize_viscous(sc.start, sc.params, sc.objective, OptimizeOptions{});
  const double tol = default_tol_z(r.ell);
  const AdjointSolution& adj = r.adjoint;
  REQUIRE(adj.pattern.count(Activation::positive) > 0);

  SUBCASE("lambda flipped on the active set") {
    const Trajectory bad = -1.0 * adj.lam;
    const StationarityReport rep =
        check_viscous(r.ell, r.forward.q, adj.xi, bad, sc.params, sc.objective, tol);
    CHECK(rep.sign_violation > 0.1);
    CHECK(rep.classification == StationarityClass::inconclusive);
  }
  SUBCASE("lambda switched on where the constraint is inactive") {
    Trajectory bad = adj.lam;
    int touched = 0;
    for (int k = 0; k < bad.samples(); ++k)
      if (adj.pattern(k, 0) == Activation::negative) {
        bad(k, 0) = 1.0;
        ++touched;
      }
    REQUIRE(touched > 0);
    const StationarityReport rep =
        check_viscous(r.ell, r.forward.q, adj.xi, bad, sc.params, sc.objective, tol);
    CHECK(rep.sign_violation > 0.0);
  }
  SUBCASE("shifted adjoint state") {
    const Trajectory bad = adj.xi + rt::constant_control(sc.grid, {0.05});
    const StationarityReport rep =
        check_viscous(r.ell, r.forward.q, bad, adj.lam, sc.params, sc.objective, tol);
    CHECK(rep.adjoint_residual >= 0.05);
    CHECK(rep.classification == StationarityClass::inconclusive);
  }
}

TEST_CASE("limit: affine scenario above the target") {
  const rt::AboveTargetScenario sc(1.0);
  const SweepReport sweep = rt::default_sweep(sc);
  const StationarityReport rep = rt::limit_report(sweep, sc.params, sc.objective);
  REQUIRE(rep.affine);
  CHECK(rep.terminal_gap[0] > 0.0);
  CHECK(std::abs(rep.terminal_gap[1]) <= 1e-3);
  CHECK(rep.complementarity_xi <= 1e-2);
  CHECK(rep.bracket_violation <= 1e-3);
  CHECK(rep.one_sided_violation <= 1e-3);
  CHECK(rep.classification == StationarityClass::strong);
  // taxonomy: strong implies the C conditions
  CHECK(rep.same_sign_residual <= 1e-3);

  // attained component: xi and lambda vanish
  const OptimizeResult& last = sweep.results.back();
  for (int k = 0; k <= sc.grid.intervals(); ++k) CHECK(std::abs(last.adjoint.xi(k, 1)) <= 1e-3);
  for (int k = 0; k < sc.grid.intervals(); ++k) CHECK(last.adjoint.lam(k, 1) == 0.0);
  // bracketed component: 0 <= xi <= q(T) - q_d
  for (int k = 0; k <= sc.grid.intervals(); ++k) {
    CHECK(last.adjoint.xi(k, 0) >= -1e-3);
    CHECK(last.adjoint.xi(k, 0) <= rep.terminal_gap[0] + 1e-3);
  }
}

TEST_CASE("limit: affine scenario below the target is C-stationary") {
  const rt::BelowTargetScenario sc(1.0);
  const SweepReport sweep = rt::default_sweep(sc);
  const StationarityReport rep = rt::limit_report(sweep, sc.params, sc.objective);
  REQUIRE(rep.affine);
  CHECK(rep.terminal_gap[0] < -1e-3);
  CHECK(rep.same_sign_residual <= 1e-3);
  CHECK(rep.bracket_violation <= 1e-3);
  CHECK(rep.classification == StationarityClass::clarke);
  // report-only
  const OptimizeResult& last = sweep.results.back();
  CHECK(mstat_gap_probe(last.adjoint.xi, last.adjoint.lam) >= 0.0);
}

TEST_CASE("limit: non-affine data is inconclusive") {
  rt::TransversalScenario sc(1e-3);
  ObjectiveSpec obj;
  obj.q_d = {0.0, 0.0};
  const ForwardSolution sol = solve_viscous(sc.params, sc.ell);
  const AdjointSolution adj = solve_adjoint(sc.params, sc.ell, sol, obj, default_tol_z(sc.ell));
  const StationarityReport rep = check_limit(sc.ell, solve_rate_independent(sc.params, sc.ell).q,
                                             adj.xi, adj.lam, sc.params, obj);
  CHECK_FALSE(rep.affine);
  CHECK(rep.classification == StationarityClass::inconclusive);
}

TEST_CASE("limit: wrong-signed adjoint is inconclusive") {
  const TimeGrid grid(1.0, 100);
  const ModelParams p = rt::scalar_model(1.0, 0.2, 0.0);
  ObjectiveSpec obj;
  obj.q_d = {3.0};
  const Trajectory ell = rt::ramp_control(grid, {1.0});
  const Trajectory q = solve_rate_independent(p, ell).q;
  Trajectory lam(grid, 1, Sampling::interval);
  for (int k = 0; k < 50; ++k) lam(k, 0) = -1.0;
  for (int k = 50; k < 100; ++k) lam(k, 0) = 1.0;
  const Trajectory xi = rt::constant_control(grid, {-1.0});
  const StationarityReport rep = check_limit(ell, q, xi, lam, p, obj);
  CHECK(rep.same_sign_residual > 1e-3);
  CHECK(rep.classification == StationarityClass::inconclusive);
}

TEST_CASE("mstat probe") {
  const TimeGrid grid(1.0, 20);
  std::mt19937_64 rng(5);
  const Trajectory xi = rt::random_h10(grid, 2, rng);
  CHECK(mstat_gap_probe(xi, Trajectory(grid, 2, Sampling::interval)) == 0.0);

  Trajectory x(grid, 1), l(grid, 1, Sampling::interval);
  for (int k = 0; k < 10; ++k) x(k, 0) = 1.0;
  for (int k = 10; k < 20; ++k) l(k, 0) = 2.0;
  CHECK(mstat_gap_probe(x, l) == 0.0);
  l(3, 0) = 2.0;
  CHECK(mstat_gap_probe(x, l) == 2.0);
  CHECK_THROWS_AS(mstat_gap_probe(x, x), ValidationError);
}

TEST_CASE("pass threshold") {
  CHECK(viscous_pass_threshold(1e-6, 1e-3, 2.0) == doctest::Approx(0.03));
  CHECK(viscous_pass_threshold(1e-2, 1e-3, 0.0) == doctest::Approx(0.1));
}
