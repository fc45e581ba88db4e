#pragma once

#include <string>

#include <json.hpp>

#include "rioc/optimizer.hpp"

namespace rioc::io {

using Json = nlohmann::ordered_json;

Json to_json(const StationarityReport& rep);
Json to_json(const ObjectiveBreakdown& b);
Json to_json(const IterateRecord& r);
Json to_json(const SweepRow& row);

/// Two-space indented dump with a trailing newline.
std::string dump(const Json& j);

}  // namespace rioc::io
