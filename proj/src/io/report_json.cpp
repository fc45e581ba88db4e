#include "rioc/io/report_json.hpp"

namespace rioc::io {

Json to_json(const StationarityReport& rep) {
  Json j;
  j["kind"] = rep.limit ? "limit" : "viscous";
  j["classification"] = to_string(rep.classification);
  j["adjoint_residual"] = rep.adjoint_residual;
  j["sign_violation"] = rep.sign_violation;
  j["complementarity_xi"] = rep.complementarity_xi;
  j["complementarity_lambda"] = rep.complementarity_lambda;
  j["gradient_residual"] = rep.gradient_residual;
  if (rep.limit) {
    j["affine"] = rep.affine;
    j["terminal_gap"] = rep.terminal_gap;
    j["bracket_violation"] = rep.bracket_violation;
    j["one_sided_violation"] = rep.one_sided_violation;
    j["same_sign_residual"] = rep.same_sign_residual;
  }
  return j;
}

Json to_json(const ObjectiveBreakdown& b) {
  return Json{{"total", b.total()},
              {"state_cost", b.state_cost},
              {"terminal", b.terminal},
              {"control", b.control},
              {"proximal", b.proximal}};
}

Json to_json(const IterateRecord& r) {
  return Json{{"iteration", r.iteration},
              {"objective", r.objective},
              {"grad_norm", r.grad_norm},
              {"step", r.step},
              {"backtracks", r.backtracks}};
}

Json to_json(const SweepRow& row) {
  Json j;
  j["epsilon"] = row.epsilon;
  j["objective"] = row.objective;
  j["breakdown"] = to_json(row.breakdown);
  j["initial_breakdown"] = to_json(row.init_breakdown);
  j["ell_distance"] = row.ell_distance;
  j["q_distance"] = row.q_distance;
  j["xi_sup"] = row.xi_sup;
  j["lambda_dual"] = row.lambda_dual;
  j["lambda_l2"] = row.lambda_l2;
  j["grad_norm"] = row.grad_norm;
  j["iterations"] = row.iterations;
  j["converged"] = row.converged;
  j["stationarity"] = to_json(row.stationarity);
  return j;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace rioc::io
