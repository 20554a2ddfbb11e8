#pragma once

#include <json.hpp>

#include "wspline/eval.hpp"
#include "wspline/trace.hpp"

namespace wspline {

nlohmann::json forest_to_json(const TrajectoryForest& forest);

/// Report plus the config snapshot it was produced under. `mse` fields
/// serialize as the string "undefined" when the metric has no value.
nlohmann::json report_to_json(const EvalReport& report, const RefinementConfig& cfg);

nlohmann::json config_to_json(const RefinementConfig& cfg);

} // namespace wspline
