#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "prefeval/building_model.hpp"

namespace prefeval {

enum class PreferenceLabel {
    FarBetterA,
    BetterA,
    SlightlyBetterA,
    Equivalent,
    SlightlyBetterB,
    BetterB,
    FarBetterB,
};

inline constexpr std::array<PreferenceLabel, 7> kAllLabels{
    PreferenceLabel::FarBetterA,      PreferenceLabel::BetterA, PreferenceLabel::SlightlyBetterA,
    PreferenceLabel::Equivalent,      PreferenceLabel::SlightlyBetterB,
    PreferenceLabel::BetterB,         PreferenceLabel::FarBetterB,
};

/// Wire symbol, e.g. "FAR_BETTER_A".
std::string_view to_string(PreferenceLabel label);
std::optional<PreferenceLabel> parse_label(std::string_view symbol);
/// Comma-separated list of the seven symbols, for error messages.
std::string valid_label_symbols();

/// Swaps the A/B direction of a label; EQUIVALENT is fixed.
constexpr PreferenceLabel mirror(PreferenceLabel label) {
    switch (label) {
        case PreferenceLabel::FarBetterA: return PreferenceLabel::FarBetterB;
        case PreferenceLabel::BetterA: return PreferenceLabel::BetterB;
        case PreferenceLabel::SlightlyBetterA: return PreferenceLabel::SlightlyBetterB;
        case PreferenceLabel::Equivalent: return PreferenceLabel::Equivalent;
        case PreferenceLabel::SlightlyBetterB: return PreferenceLabel::SlightlyBetterA;
        case PreferenceLabel::BetterB: return PreferenceLabel::BetterA;
        case PreferenceLabel::FarBetterB: return PreferenceLabel::FarBetterA;
    }
    return label;
}

struct Comparison {
    std::string comparison_id;
    std::string object_id;
    Polygon initial;  ///< the object's ungeneralised footprint, for display
    GeneralisationCandidate a;
    GeneralisationCandidate b;
};

/// The same comparison with candidates a and b exchanged.
Comparison swapped(const Comparison& c);

struct ComparisonSet {
    ScenarioConfig scenario;
    std::vector<Comparison> comparisons;

    /// Checks id uniqueness, object consistency, distinct geometries and
    /// satisfaction vector sizes.
    void validate() const;
    const Comparison* find(std::string_view comparison_id) const;
};

enum class PreferenceSource { Human, Oracle };
std::string_view to_string(PreferenceSource source);
std::optional<PreferenceSource> parse_source(std::string_view s);

struct PreferenceRecord {
    std::string comparison_id;
    PreferenceLabel label = PreferenceLabel::Equivalent;
    PreferenceSource source = PreferenceSource::Human;
    std::optional<std::int64_t> elapsed_ms;
    std::string created_at;  ///< ISO-8601 UTC, millisecond precision

    friend bool operator==(const PreferenceRecord&, const PreferenceRecord&) = default;
};

/// Current UTC time as "YYYY-MM-DDTHH:MM:SS.mmmZ".
std::string utc_timestamp_now();

/// Generates n_objects buildings and pairs_per_object comparisons for each.
ComparisonSet build_comparison_set(const ScenarioConfig& cfg, int n_objects, int pairs_per_object,
                                   std::uint64_t seed);

/// Comparisons whose two candidates differ by a pure rotation about the
/// centroid, so only the orientation measure separates them.
ComparisonSet build_rotation_comparisons(const ScenarioConfig& cfg, int n_objects,
                                         std::uint64_t seed, double min_angle_deg = 16.0,
                                         double max_angle_deg = 25.0);

/// Concatenates sets sharing one scenario; ids must stay unique.
ComparisonSet merge(const ComparisonSet& first, const ComparisonSet& second);

/// First comparison in set order whose id is not in `answered`.
const Comparison* next_unanswered(const ComparisonSet& set,
                                  const std::set<std::string, std::less<>>& answered);

/// Collapses an append-only log to one record per comparison: the latest
/// created_at wins, later lines win ties. Result keeps first-appearance order.
std::vector<PreferenceRecord> effective_preferences(const std::vector<PreferenceRecord>& log);

}  // namespace prefeval
