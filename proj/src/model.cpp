#include "rioc/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace rioc {

TimeGrid::TimeGrid(double final_time, int intervals)
    : final_time_(final_time), intervals_(intervals) {
  if (!(final_time > 0.0) || !std::isfinite(final_time))
    throw ValidationError("time grid: T must be positive and finite");
  if (intervals < 2) throw ValidationError("time grid: N must be at least 2");
}

Trajectory::Trajectory(TimeGrid grid, int dim, Sampling sampling, double fill)
    : grid_(grid), dim_(dim), sampling_(sampling) {
  if (dim < 1) throw ValidationError("trajectory: dimension must be >= 1");
  const int count =
      sampling == Sampling::nodal ? grid.intervals() + 1 : grid.intervals();
  values_.assign(static_cast<std::size_t>(count) * dim, fill);
}

bool Trajectory::all_finite() const {
  return std::all_of(values_.begin(), values_.end(),
                     [](double x) { return std::isfinite(x); });
}

bool Trajectory::zero_initial() const {
  const auto first = sample(0);
  return std::all_of(first.begin(), first.end(),
                     [](double x) { return x == 0.0; });
}

Trajectory& Trajectory::operator+=(const Trajectory& other) {
  require_compatible(*this, other, "trajectory sum");
  for (std::size_t j = 0; j < values_.size(); ++j) values_[j] += other.values_[j];
  return *this;
}

Trajectory& Trajectory::operator-=(const Trajectory& other) {
  require_compatible(*this, other, "trajectory difference");
  for (std::size_t j = 0; j < values_.size(); ++j) values_[j] -= other.values_[j];
  return *this;
}

Trajectory& Trajectory::operator*=(double s) {
  for (double& x : values_) x *= s;
  return *this;
}

Trajectory operator+(Trajectory a, const Trajectory& b) { return a += b; }
Trajectory operator-(Trajectory a, const Trajectory& b) { return a -= b; }
Trajectory operator*(double s, Trajectory a) { return a *= s; }

void require_compatible(const Trajectory& a, const Trajectory& b,
                        const char* what) {
  if (!(a.grid() == b.grid()))
    throw ValidationError(std::string(what) + ": grid mismatch");
  if (a.dim() != b.dim())
    throw ValidationError(std::string(what) + ": dimension mismatch");
  if (a.sampling() != b.sampling())
    throw ValidationError(std::string(what) + ": sampling mismatch");
}

namespace {

void require_nodal(const Trajectory& v, const char* what) {
  if (v.sampling() != Sampling::nodal)
    throw ValidationError(std::string(what) + ": expects nodal samples");
}

std::string format_number(double x) {
  std::ostringstream os;
  os << x;
  return os.str();
}

}  // namespace

DegradationFunction DegradationFunction::constant(double c) {
  if (c < 0.0 || !std::isfinite(c))
    throw ValidationError("kappa: constant must be finite and nonnegative");
  return {[c](double) { return c; },
          [](double) { return 0.0; },
          [](double) { return 0.0; },
          0.0,
          true,
          "constant " + format_number(c)};
}

DegradationFunction DegradationFunction::affine(double a, double b) {
  if (!std::isfinite(a) || !std::isfinite(b))
    throw ValidationError("kappa: affine coefficients must be finite");
  // Nonnegativity only holds on the half-line where a + b x >= 0; the
  // scenario is responsible for keeping the history there.
  return {[a, b](double x) { return a + b * x; },
          [b](double) { return b; },
          [](double) { return 0.0; },
          std::abs(b),
          true,
          "affine " + format_number(a) + " + " + format_number(b) + " x"};
}

DegradationFunction DegradationFunction::saturating(double c, double lipschitz,
                                                    double width) {
  if (c < 0.0 || lipschitz < 0.0 || !(width > 0.0))
    throw ValidationError(
        "kappa: saturating needs c >= 0, L >= 0 and width > 0");
  const double amp = lipschitz * width;
  return {[=](double x) { return c + amp * (1.0 + std::tanh(x / width)); },
          [=](double x) {
            const double s = 1.0 / std::cosh(x / width);
            return lipschitz * s * s;
          },
          [=](double x) {
            const double s = 1.0 / std::cosh(x / width);
            return -2.0 * lipschitz / width * s * s * std::tanh(x / width);
          },
          lipschitz,
          lipschitz == 0.0,
          "saturating c=" + format_number(c) + " L=" + format_number(lipschitz) +
              " w=" + format_number(width)};
}

void ModelParams::validate() const {
  if (!(alpha > 0.0) || !std::isfinite(alpha))
    throw ValidationError("model: alpha must be positive");
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon))
    throw ValidationError("model: epsilon must be nonnegative");
  if (y0.empty()) throw ValidationError("model: y0 must have dimension n >= 1");
  for (double y : y0)
    if (!std::isfinite(y)) throw ValidationError("model: y0 must be finite");
  if (!kappa.eval || !kappa.deriv)
    throw ValidationError("model: kappa is not set");
}

void ObjectiveSpec::validate(int dim, const TimeGrid& grid) const {
  if (static_cast<int>(q_d.size()) != dim)
    throw ValidationError("objective: q_d dimension mismatch");
  if (kind == StateCost::linear && static_cast<int>(weights.size()) != dim)
    throw ValidationError("objective: linear weights dimension mismatch");
  if (kind == StateCost::quadratic_tracking) {
    if (!tracking_target)
      throw ValidationError("objective: tracking needs a target trajectory");
    if (tracking_target->dim() != dim || !(tracking_target->grid() == grid))
      throw ValidationError("objective: tracking target does not match");
  }
  if (include_proximal) {
    if (!proximal_anchor)
      throw ValidationError("objective: proximal term needs an anchor");
    if (proximal_anchor->dim() != dim || !(proximal_anchor->grid() == grid))
      throw ValidationError("objective: proximal anchor does not match");
  }
}

Trajectory history(const Trajectory& q, std::span<const double> y0) {
  require_nodal(q, "history");
  if (static_cast<int>(y0.size()) != q.dim())
    throw ValidationError("history: dimension mismatch between q and y0");
  const int n = q.dim();
  const double half_dt = 0.5 * q.grid().dt();
  Trajectory h(q.grid(), n);
  for (int i = 0; i < n; ++i) h(0, i) = y0[i];
  for (int k = 0; k < q.grid().intervals(); ++k)
    for (int i = 0; i < n; ++i)
      h(k + 1, i) = h(k, i) + half_dt * (q(k, i) + q(k + 1, i));
  return h;
}

double stored_energy(std::span<const double> q, std::span<const double> ell,
                     const ModelParams& params) {
  if (q.size() != ell.size() || static_cast<int>(q.size()) != params.dim())
    throw ValidationError("stored_energy: dimension mismatch");
  double sq = 0.0;
  double work = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    sq += q[i] * q[i];
    work += ell[i] * q[i];
  }
  return 0.5 * params.alpha * sq - work;
}

Trajectory z_field(const Trajectory& q, const Trajectory& ell,
                   const ModelParams& params) {
  require_compatible(q, ell, "z_field");
  require_nodal(q, "z_field");
  if (q.dim() != params.dim())
    throw ValidationError("z_field: dimension mismatch with model");
  const Trajectory h = history(q, params.y0);
  Trajectory z(q.grid(), q.dim());
  for (int k = 0; k < z.samples(); ++k)
    for (int i = 0; i < z.dim(); ++i)
      z(k, i) = -params.alpha * q(k, i) + ell(k, i) - params.kappa.eval(h(k, i));
  return z;
}

std::vector<double> trapezoid_weights(const TimeGrid& grid) {
  std::vector<double> w(grid.intervals() + 1, grid.dt());
  w.front() *= 0.5;
  w.back() *= 0.5;
  return w;
}

double h1_inner(const Trajectory& u, const Trajectory& v) {
  require_compatible(u, v, "h1_inner");
  require_nodal(u, "h1_inner");
  const auto w = trapezoid_weights(u.grid());
  const double inv_dt = 1.0 / u.grid().dt();
  double sum = 0.0;
  for (int k = 0; k < u.samples(); ++k)
    for (int i = 0; i < u.dim(); ++i) sum += w[k] * u(k, i) * v(k, i);
  for (int k = 0; k < u.grid().intervals(); ++k)
    for (int i = 0; i < u.dim(); ++i)
      sum += inv_dt * (u(k + 1, i) - u(k, i)) * (v(k + 1, i) - v(k, i));
  return sum;
}

double h1_norm(const Trajectory& u) { return std::sqrt(h1_inner(u, u)); }

double l2_norm(const Trajectory& v) {
  const double dt = v.grid().dt();
  double sum = 0.0;
  if (v.sampling() == Sampling::interval) {
    for (double x : v.data()) sum += dt * x * x;
  } else {
    const auto w = trapezoid_weights(v.grid());
    for (int k = 0; k < v.samples(); ++k)
      for (double x : v.sample(k)) sum += w[k] * x * x;
  }
  return std::sqrt(sum);
}

namespace {

double euclid(std::span<const double> x) {
  double s = 0.0;
  for (double xi : x) s += xi * xi;
  return std::sqrt(s);
}

}  // namespace

double w11_norm(const Trajectory& v) {
  require_nodal(v, "w11_norm");
  const auto w = trapezoid_weights(v.grid());
  double sum = 0.0;
  std::vector<double> diff(v.dim());
  for (int k = 0; k < v.samples(); ++k) sum += w[k] * euclid(v.sample(k));
  for (int k = 0; k < v.grid().intervals(); ++k) {
    for (int i = 0; i < v.dim(); ++i) diff[i] = v(k + 1, i) - v(k, i);
    sum += euclid(diff);
  }
  return sum;
}

double sup_norm(const Trajectory& v) {
  double m = 0.0;
  for (double x : v.data()) m = std::max(m, std::abs(x));
  return m;
}

Trajectory backward_integral(const Trajectory& lambda) {
  const TimeGrid& grid = lambda.grid();
  const int n = lambda.dim();
  const double dt = grid.dt();
  Trajectory out(grid, n);
  for (int k = grid.intervals() - 1; k >= 0; --k)
    for (int i = 0; i < n; ++i) {
      const double cell = lambda.sampling() == Sampling::interval
                              ? dt * lambda(k, i)
                              : 0.5 * dt * (lambda(k, i) + lambda(k + 1, i));
      out(k, i) = out(k + 1, i) + cell;
    }
  return out;
}

double dual_w1inf_proxy(const Trajectory& lambda) {
  return sup_norm(backward_integral(lambda));
}

double load_pairing(const Trajectory& lambda, const Trajectory& v) {
  if (lambda.sampling() != Sampling::interval)
    throw ValidationError("load_pairing: lambda must be an interval field");
  require_nodal(v, "load_pairing");
  if (!(lambda.grid() == v.grid()) || lambda.dim() != v.dim())
    throw ValidationError("load_pairing: grid or dimension mismatch");
  const double dt = lambda.grid().dt();
  double sum = 0.0;
  for (int k = 0; k < lambda.samples(); ++k)
    for (int i = 0; i < lambda.dim(); ++i) sum += dt * lambda(k, i) * v(k + 1, i);
  return sum;
}

Trajectory h1_functional(const Trajectory& u) {
  require_nodal(u, "h1_functional");
  const TimeGrid& grid = u.grid();
  const int N = grid.intervals();
  const auto w = trapezoid_weights(grid);
  const double inv_dt = 1.0 / grid.dt();
  Trajectory out(grid, u.dim());
  for (int k = 0; k <= N; ++k)
    for (int i = 0; i < u.dim(); ++i) {
      double value = w[k] * u(k, i);
      if (k > 0) value += inv_dt * (u(k, i) - u(k - 1, i));
      if (k < N) value -= inv_dt * (u(k + 1, i) - u(k, i));
      out(k, i) = value;
    }
  return out;
}

Trajectory riesz_h10(const Trajectory& rhs) {
  require_nodal(rhs, "riesz_h10");
  const TimeGrid& grid = rhs.grid();
  const int N = grid.intervals();
  const auto w = trapezoid_weights(grid);
  const double inv_dt = 1.0 / grid.dt();

  // Unknowns g_1..g_N; tridiagonal with constant off-diagonal -1/dt.
  std::vector<double> diag(N + 1), c_prime(N + 1), d_prime(N + 1);
  for (int k = 1; k <= N; ++k) diag[k] = w[k] + (k < N ? 2.0 : 1.0) * inv_dt;
  const double off = -inv_dt;

  Trajectory g(grid, rhs.dim());
  for (int i = 0; i < rhs.dim(); ++i) {
    c_prime[1] = off / diag[1];
    d_prime[1] = rhs(1, i) / diag[1];
    for (int k = 2; k <= N; ++k) {
      const double m = diag[k] - off * c_prime[k - 1];
      c_prime[k] = off / m;
      d_prime[k] = (rhs(k, i) - off * d_prime[k - 1]) / m;
    }
    g(N, i) = d_prime[N];
    for (int k = N - 1; k >= 1; --k) g(k, i) = d_prime[k] - c_prime[k] * g(k + 1, i);
  }
  return g;
}

double state_cost(const ObjectiveSpec& obj, const Trajectory& q) {
  const auto w = trapezoid_weights(q.grid());
  double sum = 0.0;
  switch (obj.kind) {
    case StateCost::zero:
      return 0.0;
    case StateCost::linear:
      for (int k = 0; k < q.samples(); ++k)
        for (int i = 0; i < q.dim(); ++i) sum += w[k] * obj.weights[i] * q(k, i);
      return sum;
    case StateCost::quadratic_tracking: {
      const Trajectory& target = *obj.tracking_target;
      for (int k = 0; k < q.samples(); ++k)
        for (int i = 0; i < q.dim(); ++i) {
          const double d = q(k, i) - target(k, i);
          sum += w[k] * d * d;
        }
      return 0.5 * obj.tracking_weight * sum;
    }
  }
  return 0.0;
}

Trajectory state_cost_gradient(const ObjectiveSpec& obj, const Trajectory& q) {
  Trajectory out(q.grid(), q.dim());
  switch (obj.kind) {
    case StateCost::zero:
      break;
    case StateCost::linear:
      for (int k = 0; k < q.samples(); ++k)
        for (int i = 0; i < q.dim(); ++i) out(k, i) = obj.weights[i];
      break;
    case StateCost::quadratic_tracking:
      for (int k = 0; k < q.samples(); ++k)
        for (int i = 0; i < q.dim(); ++i)
          out(k, i) = obj.tracking_weight * (q(k, i) - (*obj.tracking_target)(k, i));
      break;
  }
  return out;
}

}  // namespace rioc
