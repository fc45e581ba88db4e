#pragma once

#include "rioc/sensitivity.hpp"

namespace rioc {

/// Adjoint state and multiplier of the viscous control problem.
///
/// xi is nodal and terminal-anchored; lam lives on intervals and obeys the
/// sign rule against xi at the interval's left node:
///   negative: lam = 0, positive: lam = xi / eps, zero band: lam = 0.
struct AdjointSolution {
  Trajectory xi;
  Trajectory lam;
  Trajectory Lam;  ///< int_t^T lam ds on the nodes
  ActivationPattern pattern;
};

/// Sign of the multiplier term in the reduced derivative
/// dJ(v) = kGradientSign * <lam, v> + (ell, v)_H1 [+ (ell - anchor, v)_H1].
/// Pinned by the central-difference gradient test.
inline constexpr double kGradientSign = 1.0;

/// Backward integration of -xi' + alpha lam + [(kappa o H)'(q)]^* lam = j'(q),
/// xi(T) = q(T) - q_d. The adjoint history term is the backward integral of
/// kappa'(H(q)) lam. Discretized as the transpose of the forward step, so the
/// gradient is exact for the discrete objective on zero-band-free patterns.
AdjointSolution solve_adjoint(const ModelParams& params, const Trajectory& ell,
                              const ForwardSolution& sol,
                              const ObjectiveSpec& obj, double tol_z);

/// Discrete H^1_0 Riesz representative of the reduced derivative.
Trajectory reduced_gradient(const Trajectory& ell, const AdjointSolution& adj,
                            const ObjectiveSpec& obj);

}  // namespace rioc
