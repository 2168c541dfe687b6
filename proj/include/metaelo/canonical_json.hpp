#pragma once

#include <string>

#include <nlohmann/json.hpp>

namespace metaelo {

// Pretty-printed JSON with sorted keys and every float at exactly 6 decimals.
// Parsing the output and dumping it again reproduces the same bytes.
std::string canonical_dump(const nlohmann::json& value);

// Rounds to the 6-decimal grid used by canonical_dump.
double quantize6(double x);

}  // namespace metaelo
