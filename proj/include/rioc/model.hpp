#pragma once

#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace rioc {

/// Raised when inputs violate a documented precondition (dimensions, grids,
/// parameter ranges, non-finite samples).
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a numerical procedure cannot complete (e.g. a line search
/// that finds no descent).
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Uniform partition of [0, T] into N intervals.
class TimeGrid {
 public:
  TimeGrid(double final_time, int intervals);

  double final_time() const { return final_time_; }
  int intervals() const { return intervals_; }
  double dt() const { return final_time_ / intervals_; }
  /// Node time; the last node is T exactly.
  double t(int k) const { return k == intervals_ ? final_time_ : k * dt(); }

  friend bool operator==(const TimeGrid&, const TimeGrid&) = default;

 private:
  double final_time_;
  int intervals_;
};

/// Nodal samples live on the N+1 grid nodes; interval samples on the N
/// cells [t_k, t_{k+1}].
enum class Sampling { nodal, interval };

/// Grid samples of an R^n-valued function, stored node-major.
class Trajectory {
 public:
  Trajectory(TimeGrid grid, int dim, Sampling sampling = Sampling::nodal,
             double fill = 0.0);

  template <class F>
  static Trajectory from_function(TimeGrid grid, int dim, F&& f) {
    Trajectory out(grid, dim);
    for (int k = 0; k <= grid.intervals(); ++k)
      for (int i = 0; i < dim; ++i) out(k, i) = f(grid.t(k), i);
    return out;
  }

  const TimeGrid& grid() const { return grid_; }
  int dim() const { return dim_; }
  Sampling sampling() const { return sampling_; }
  int samples() const { return static_cast<int>(values_.size()) / dim_; }

  double& operator()(int k, int i) { return values_[index(k, i)]; }
  double operator()(int k, int i) const { return values_[index(k, i)]; }

  std::span<double> sample(int k) {
    return {values_.data() + static_cast<std::size_t>(k) * dim_,
            static_cast<std::size_t>(dim_)};
  }
  std::span<const double> sample(int k) const {
    return {values_.data() + static_cast<std::size_t>(k) * dim_,
            static_cast<std::size_t>(dim_)};
  }
  std::span<const double> data() const { return values_; }
  std::span<double> data() { return values_; }

  bool all_finite() const;
  /// values[0] == 0 (membership in the zero-initial trajectory spaces).
  bool zero_initial() const;

  Trajectory& operator+=(const Trajectory& other);
  Trajectory& operator-=(const Trajectory& other);
  Trajectory& operator*=(double s);

  friend bool operator==(const Trajectory&, const Trajectory&) = default;

 private:
  std::size_t index(int k, int i) const {
    return static_cast<std::size_t>(k) * dim_ + i;
  }

  TimeGrid grid_;
  int dim_;
  Sampling sampling_;
  std::vector<double> values_;
};

Trajectory operator+(Trajectory a, const Trajectory& b);
Trajectory operator-(Trajectory a, const Trajectory& b);
Trajectory operator*(double s, Trajectory a);

/// Throws ValidationError unless a and b share grid, dimension and sampling.
void require_compatible(const Trajectory& a, const Trajectory& b,
                        const char* what);

/// Degradation map kappa: R -> [0, inf), applied componentwise to vectors.
struct DegradationFunction {
  std::function<double(double)> eval;
  std::function<double(double)> deriv;
  std::function<double(double)> deriv2;
  double lipschitz = 0.0;
  bool is_affine = false;
  std::string description;

  static DegradationFunction constant(double c);
  static DegradationFunction affine(double a, double b);
  /// c + L w (1 + tanh(x / w)): smooth, bounded below by c, Lipschitz
  /// constant L, saturating for |x| >> w.
  static DegradationFunction saturating(double c, double lipschitz,
                                        double width);
};

struct ModelParams {
  double alpha = 1.0;
  double epsilon = 0.0;
  std::vector<double> y0;
  DegradationFunction kappa = DegradationFunction::constant(0.0);

  int dim() const { return static_cast<int>(y0.size()); }
  /// Throws ValidationError on alpha <= 0, epsilon < 0, empty/non-finite y0.
  void validate() const;
};

/// State-dependent part j of the objective.
enum class StateCost { zero, linear, quadratic_tracking };

struct ObjectiveSpec {
  StateCost kind = StateCost::zero;
  /// linear: j(q) = int <w, q> dt with constant weights w.
  std::vector<double> weights;
  /// quadratic_tracking: j(q) = (beta/2) int |q - target|^2 dt.
  double tracking_weight = 1.0;
  std::optional<Trajectory> tracking_target;
  /// Terminal target q_d.
  std::vector<double> q_d;
  /// Proximal anchor for the regularized viscous problems.
  std::optional<Trajectory> proximal_anchor;
  bool include_proximal = false;

  bool state_cost_is_affine() const { return kind != StateCost::quadratic_tracking; }
  void validate(int dim, const TimeGrid& grid) const;
};

// ---------------------------------------------------------------------------
// Operations

/// H(q)(t_k) = y0 + trapezoidal integral of q over [0, t_k].
Trajectory history(const Trajectory& q, std::span<const double> y0);

/// (alpha/2)|q|^2 - <ell, q>.
double stored_energy(std::span<const double> q, std::span<const double> ell,
                     const ModelParams& params);

/// z_k = -alpha q_k + ell_k - kappa(H(q)_k), componentwise.
Trajectory z_field(const Trajectory& q, const Trajectory& ell,
                   const ModelParams& params);

/// Trapezoid quadrature weights on the grid nodes.
std::vector<double> trapezoid_weights(const TimeGrid& grid);

/// Discrete H^1 inner product: trapezoidal <u, v> plus interval-wise
/// forward-difference <u', v'>.
double h1_inner(const Trajectory& u, const Trajectory& v);
double h1_norm(const Trajectory& u);
/// Trapezoidal L^2 norm for nodal data; midpoint-exact for interval data.
double l2_norm(const Trajectory& v);
/// L^1 norm of v plus L^1 norm of its forward-difference derivative.
double w11_norm(const Trajectory& v);
/// max over samples and components of |v|.
double sup_norm(const Trajectory& v);

/// Cumulative backward integral Lambda(t_k) = int_{t_k}^T lambda ds (nodal).
/// Interval samples are integrated exactly as piecewise constants, nodal
/// samples by the trapezoidal rule.
Trajectory backward_integral(const Trajectory& lambda);

/// max_k |Lambda(t_k)|_inf: computable surrogate of the W^{-1,inf} norm.
double dual_w1inf_proxy(const Trajectory& lambda);

/// Pairing of an interval field with a nodal test function,
/// sum_k dt <lambda_k, v_{k+1}>. The step over [t_k, t_{k+1}] sees the load
/// at its right node, so this is the pairing the discrete adjoint produces.
double load_pairing(const Trajectory& lambda, const Trajectory& v);

/// Values of the functional v -> h1_inner(u, v) on the nodal hat basis
/// (entry k is the value on hat k; row 0 is included for completeness).
Trajectory h1_functional(const Trajectory& u);

/// Riesz representative in discrete H^1_0: solves (M + K) g = rhs on nodes
/// 1..N with g_0 = 0. rhs(k, i) holds the functional's value on hat k.
Trajectory riesz_h10(const Trajectory& rhs);

/// Trapezoid-discretized j(q).
double state_cost(const ObjectiveSpec& obj, const Trajectory& q);
/// Pointwise density of j'(q) on the nodes (quadrature weights not applied).
Trajectory state_cost_gradient(const ObjectiveSpec& obj, const Trajectory& q);

}  // namespace rioc
