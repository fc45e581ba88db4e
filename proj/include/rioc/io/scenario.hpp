#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "rioc/optimizer.hpp"

namespace rioc::io {

/// A run configuration read from a JSON document.
///
/// `control` is the load for `simulate` and the initial guess for
/// `optimize`, `sweep` and `gradcheck`. `params.epsilon` is the default
/// viscosity (0 selects the rate-independent solver).
struct Scenario {
  ModelParams params;
  TimeGrid grid{1.0, 2};
  Trajectory control{grid, 1};
  ObjectiveSpec objective;
  OptimizeOptions optimize;
  std::vector<double> eps_list;  ///< empty: default_eps_list()
  std::uint64_t seed = 0;
};

/// Parses a scenario document. Relative file references are resolved
/// against `base_dir`. Throws ValidationError on malformed or inconsistent
/// input.
Scenario parse_scenario(const std::string& json_text,
                        const std::filesystem::path& base_dir = ".");

Scenario load_scenario(const std::filesystem::path& path);

}  // namespace rioc::io
