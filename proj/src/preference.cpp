#include "prefeval/preference.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <map>
#include <unordered_set>

#include "prefeval/error.hpp"
#include "prefeval/random.hpp"

namespace prefeval {

namespace {

constexpr std::array<std::string_view, 7> kLabelSymbols{
    "FAR_BETTER_A",      "BETTER_A", "SLIGHTLY_BETTER_A", "EQUIVALENT",
    "SLIGHTLY_BETTER_B", "BETTER_B", "FAR_BETTER_B",
};

BuildingObject scenario_building(std::uint64_t seed, std::uint64_t stream, int index) {
    auto b = generate_building(mix_seed(mix_seed(seed, stream), static_cast<std::uint64_t>(index)));
    b.object_id = "s" + std::to_string(seed) + (stream == 0 ? "-o" : "-r") + std::to_string(index);
    return b;
}

}  // namespace

std::string_view to_string(PreferenceLabel label) {
    return kLabelSymbols[static_cast<std::size_t>(label)];
}

std::optional<PreferenceLabel> parse_label(std::string_view symbol) {
    for (std::size_t i = 0; i < kLabelSymbols.size(); ++i) {
        if (kLabelSymbols[i] == symbol) {
            return kAllLabels[i];
        }
    }
    return std::nullopt;
}

std::string valid_label_symbols() {
    std::string out;
    for (auto s : kLabelSymbols) {
        if (!out.empty()) out += ", ";
        out += s;
    }
    return out;
}

std::string_view to_string(PreferenceSource source) {
    return source == PreferenceSource::Human ? "human" : "oracle";
}

std::optional<PreferenceSource> parse_source(std::string_view s) {
    if (s == "human") return PreferenceSource::Human;
    if (s == "oracle") return PreferenceSource::Oracle;
    return std::nullopt;
}

Comparison swapped(const Comparison& c) {
    Comparison out = c;
    std::swap(out.a, out.b);
    return out;
}

void ComparisonSet::validate() const {
    scenario.validate();
    std::unordered_set<std::string> ids;
    for (const auto& c : comparisons) {
        if (!ids.insert(c.comparison_id).second) {
            throw invalid_argument("duplicate comparison id '" + c.comparison_id + "'");
        }
        if (c.a.object_id != c.object_id || c.b.object_id != c.object_id) {
            throw invalid_argument("comparison '" + c.comparison_id +
                                   "' mixes candidates of different objects");
        }
        if (c.a.geometry == c.b.geometry) {
            throw invalid_argument("comparison '" + c.comparison_id +
                                   "' pairs two identical generalisations");
        }
        validate_satisfactions(c.a.satisfactions, scenario.constraint_set.size());
        validate_satisfactions(c.b.satisfactions, scenario.constraint_set.size());
    }
}

const Comparison* ComparisonSet::find(std::string_view comparison_id) const {
    auto it = std::find_if(comparisons.begin(), comparisons.end(),
                           [&](const Comparison& c) { return c.comparison_id == comparison_id; });
    return it == comparisons.end() ? nullptr : &*it;
}

std::string utc_timestamp_now() {
    using namespace std::chrono;
    const auto now = system_clock::now();
    const auto ms = duration_cast<milliseconds>(now.time_since_epoch()).count() % 1000;
    const std::time_t t = system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%S", &tm);
    char out[40];
    std::snprintf(out, sizeof out, "%s.%03dZ", buf, static_cast<int>(ms));
    return out;
}

ComparisonSet build_comparison_set(const ScenarioConfig& cfg, int n_objects, int pairs_per_object,
                                   std::uint64_t seed) {
    if (n_objects < 1 || pairs_per_object < 1) {
        throw invalid_argument("n_objects and pairs_per_object must be >= 1");
    }
    cfg.validate();
    int n_candidates = 2;
    while (n_candidates * (n_candidates - 1) / 2 < pairs_per_object) {
        ++n_candidates;
    }

    ComparisonSet set{cfg, {}};
    set.comparisons.reserve(static_cast<std::size_t>(n_objects) * pairs_per_object);
    for (int i = 0; i < n_objects; ++i) {
        const auto building = scenario_building(seed, 0, i);
        const std::uint64_t object_seed = mix_seed(seed, 1000003ULL + static_cast<std::uint64_t>(i));
        const auto candidates = generate_candidates(building, cfg, n_candidates, object_seed);

        std::vector<std::pair<int, int>> pairs;
        for (int x = 0; x < n_candidates; ++x) {
            for (int y = x + 1; y < n_candidates; ++y) {
                pairs.emplace_back(x, y);
            }
        }
        Rng rng(mix_seed(object_seed, 7));
        for (std::size_t k = pairs.size() - 1; k > 0; --k) {
            std::swap(pairs[k], pairs[rng.below(k + 1)]);
        }
        for (int k = 0; k < pairs_per_object; ++k) {
            auto [x, y] = pairs[static_cast<std::size_t>(k)];
            if (rng.chance(0.5)) {
                std::swap(x, y);
            }
            set.comparisons.push_back(Comparison{building.object_id + "-p" + std::to_string(k),
                                                 building.object_id, building.initial,
                                                 candidates[static_cast<std::size_t>(x)],
                                                 candidates[static_cast<std::size_t>(y)]});
        }
    }
    return set;
}

ComparisonSet build_rotation_comparisons(const ScenarioConfig& cfg, int n_objects,
                                         std::uint64_t seed, double min_angle_deg,
                                         double max_angle_deg) {
    if (n_objects < 1) {
        throw invalid_argument("n_objects must be >= 1");
    }
    if (!(min_angle_deg > 0.0) || max_angle_deg < min_angle_deg) {
        throw invalid_argument("invalid rotation angle range");
    }
    cfg.validate();
    ComparisonSet set{cfg, {}};
    for (int i = 0; i < n_objects; ++i) {
        const auto building = scenario_building(seed, 1, i);
        Rng rng(mix_seed(seed, 2000003ULL + static_cast<std::uint64_t>(i)));
        double angle = rng.uniform(min_angle_deg, max_angle_deg);
        if (rng.chance(0.5)) {
            angle = -angle;
        }
        auto straight = make_candidate(building, building.object_id + "-c0", {{"identity", {}}}, cfg);
        auto turned = make_candidate(building, building.object_id + "-c1", {{"rotate", {angle}}}, cfg);
        if (rng.chance(0.5)) {
            std::swap(straight, turned);
        }
        set.comparisons.push_back(Comparison{building.object_id + "-p0", building.object_id,
                                             building.initial, std::move(straight),
                                             std::move(turned)});
    }
    return set;
}

ComparisonSet merge(const ComparisonSet& first, const ComparisonSet& second) {
    if (!(first.scenario == second.scenario)) {
        throw invalid_argument("cannot merge comparison sets with different scenarios");
    }
    ComparisonSet out = first;
    out.comparisons.insert(out.comparisons.end(), second.comparisons.begin(),
                           second.comparisons.end());
    out.validate();
    return out;
}

const Comparison* next_unanswered(const ComparisonSet& set,
                                  const std::set<std::string, std::less<>>& answered) {
    for (const auto& c : set.comparisons) {
        if (!answered.contains(c.comparison_id)) {
            return &c;
        }
    }
    return nullptr;
}

std::vector<PreferenceRecord> effective_preferences(const std::vector<PreferenceRecord>& log) {
    std::map<std::string, std::size_t, std::less<>> slot;
    std::vector<PreferenceRecord> out;
    for (const auto& rec : log) {
        auto it = slot.find(rec.comparison_id);
        if (it == slot.end()) {
            slot.emplace(rec.comparison_id, out.size());
            out.push_back(rec);
        } else if (rec.created_at >= out[it->second].created_at) {
            out[it->second] = rec;
        }
    }
    return out;
}

}  // namespace prefeval
