#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "prefeval/building_model.hpp"
#include "prefeval/compatibility.hpp"
#include "prefeval/eval_function.hpp"
#include "prefeval/learner.hpp"
#include "prefeval/oracle_user.hpp"
#include "prefeval/preference.hpp"

namespace prefeval {

using Json = nlohmann::json;

// Conversions in both directions. Parsers validate and throw Error with
// ErrorKind::InvalidArgument on malformed input.

Json to_json(const Polygon& poly);
Polygon polygon_from_json(const Json& j);

Json to_json(const EvaluationFunction& f);
EvaluationFunction function_from_json(const Json& j);

Json to_json(const ScenarioConfig& cfg);
ScenarioConfig scenario_from_json(const Json& j);

Json to_json(const ComparisonSet& set);
ComparisonSet comparison_set_from_json(const Json& j);

Json to_json(const PreferenceRecord& rec);
PreferenceRecord preference_from_json(const Json& j);

Json to_json(const CompatibilityThresholds& t);
CompatibilityThresholds thresholds_from_json(const Json& j);

Json to_json(const CompatibilityReport& report);

Json to_json(const ParameterGrid& grid);
ParameterGrid grid_from_json(const Json& j);

Json to_json(const TabuConfig& cfg);
/// Missing fields keep their defaults.
TabuConfig tabu_from_json(const Json& j);

Json to_json(const LearnResult& result);
LearnResult learn_result_from_json(const Json& j);

Json to_json(const OracleConfig& cfg);
OracleConfig oracle_from_json(const Json& j);

// Files.

Json read_json_file(const std::filesystem::path& path);
/// Writes to a sibling temporary file and renames it into place.
void write_json_file(const std::filesystem::path& path, const Json& j);

/// One record per line; blank lines are skipped, a truncated final line
/// (from an interrupted append) is ignored.
std::vector<PreferenceRecord> read_preference_log(const std::filesystem::path& path);
void write_preference_log(const std::filesystem::path& path,
                          const std::vector<PreferenceRecord>& records);

/// Accepts either a bare function object or a learn result (its best function).
EvaluationFunction function_from_any_json(const Json& j);

}  // namespace prefeval
