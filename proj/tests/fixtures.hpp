#pragma once

#include <string>
#include <vector>

#include "prefeval/preference.hpp"

namespace prefeval::testing {

inline Polygon unit_square(double offset = 0.0) {
    return Polygon({{offset, 0}, {offset + 1, 0}, {offset + 1, 1}, {offset, 1}});
}

/// Comparison whose candidates carry the given satisfaction vectors verbatim
/// (geometry is a placeholder, distinct per side).
inline Comparison synthetic_comparison(const std::string& id, std::vector<double> sat_a,
                                       std::vector<double> sat_b) {
    Comparison c;
    c.comparison_id = id;
    c.object_id = "obj-" + id;
    c.initial = unit_square();
    c.a = GeneralisationCandidate{id + "-a", c.object_id, unit_square(0.0), std::move(sat_a), {}};
    c.b = GeneralisationCandidate{id + "-b", c.object_id, unit_square(2.0), std::move(sat_b), {}};
    return c;
}

/// Scenario restricted to the first `n` registry constraints.
inline ScenarioConfig scenario_with(std::vector<std::string> names) {
    ScenarioConfig cfg;
    cfg.constraint_set = ConstraintSet(std::move(names));
    return cfg;
}

inline PreferenceRecord record(const std::string& id, PreferenceLabel label,
                               std::string created_at = "2024-01-01T00:00:00.000Z") {
    return PreferenceRecord{id, label, PreferenceSource::Human, std::nullopt, std::move(created_at)};
}

}  // namespace prefeval::testing
