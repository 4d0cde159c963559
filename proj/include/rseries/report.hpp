#pragma once

#include "rseries/analyze.hpp"

#include "json.hpp"

#include <iosfwd>

namespace rseries {

using Json = nlohmann::ordered_json;

/// Report in the fixed-order JSON layout; every number is a decimal string.
Json to_json(const AnalysisReport& report);
Json to_json(const Verdict& verdict);
Json to_json(const DerivativeEstimate& estimate);

void write_text(std::ostream& out, const AnalysisReport& report);

}  // namespace rseries
