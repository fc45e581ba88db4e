#pragma once

#include <cstdint>
#include <iosfwd>
#include <random>
#include <vector>

#include "rioc/io/scenario.hpp"

namespace rioc::io {

/// Command-line front end: simulate | optimize | sweep | gradcheck | check.
/// Returns the exit code: 0 on success, 2 on invalid input, 3 on solver
/// failure. Diagnostics go to `err`, summaries to `out`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Worker count for parallel sweeps: hardware concurrency, capped by the
/// RIOC_THREADS environment variable when set.
int worker_threads();

/// Smooth random element of H^1_0: five quarter-wave sine modes with
/// amplitudes a_m / m, a_m standard normal.
Trajectory random_direction(const TimeGrid& grid, int n, std::mt19937_64& rng);

struct GradcheckEntry {
  double finite_difference = 0.0;  ///< central difference of the objective
  double adjoint = 0.0;            ///< h1_inner(g, v)
  double relative_error = 0.0;
  bool nonsmooth = false;  ///< activation pattern moved under the perturbation
};

struct GradcheckReport {
  double epsilon = 0.0;
  double tau = 0.0;
  int zero_band_intervals = 0;
  std::vector<GradcheckEntry> entries;
  /// Largest relative error over entries not flagged nonsmooth.
  double max_relative_error = 0.0;
  bool smooth = true;  ///< no zero-band interval and no flagged entry
};

/// Compares central differences of the reduced objective with the adjoint
/// slope along `directions` random directions drawn from `seed`.
GradcheckReport gradient_check(const Scenario& scenario, double epsilon, int directions,
                               double tau, std::uint64_t seed);

}  // namespace rioc::io
