#pragma once

#include <vector>

#include "rioc/forward.hpp"

namespace rioc {

enum class Activation : signed char { negative = -1, zero = 0, positive = 1 };

/// One label per sample and component.
class ActivationPattern {
 public:
  ActivationPattern(int samples, int dim)
      : samples_(samples), dim_(dim),
        labels_(static_cast<std::size_t>(samples) * dim, Activation::zero) {}

  int samples() const { return samples_; }
  int dim() const { return dim_; }
  Activation& operator()(int k, int i) { return labels_[index(k, i)]; }
  Activation operator()(int k, int i) const { return labels_[index(k, i)]; }
  int count(Activation a) const;

 private:
  std::size_t index(int k, int i) const {
    return static_cast<std::size_t>(k) * dim_ + i;
  }
  int samples_;
  int dim_;
  std::vector<Activation> labels_;
};

/// positive if z > tol, negative if z < -tol, zero otherwise.
ActivationPattern classify_z(const Trajectory& z, double tol_z);

/// Labels interval k by the step's driving force at its right node, z_{k+1}.
ActivationPattern interval_pattern(const ForwardSolution& sol, double tol_z);

/// 1e-8 (1 + |ell|_inf).
double default_tol_z(const Trajectory& ell);

struct SensitivitySolution {
  Trajectory dq;  ///< zero-initial directional derivative of the state
  ActivationPattern activation_pattern;  ///< per interval
};

/// Directional derivative of the viscous solution map at ell in direction v:
/// the linearization of the forward step, with max'(z; h) = h on positive,
/// 0 on negative and max(h, 0) on zero-band intervals.
SensitivitySolution directional_derivative(const ModelParams& params,
                                           const Trajectory& ell,
                                           const ForwardSolution& sol,
                                           const Trajectory& v, double tol_z);

}  // namespace rioc
