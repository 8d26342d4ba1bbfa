#include "prefeval/oracle_user.hpp"

#include <cmath>
#include <cstdio>

#include "prefeval/compatibility.hpp"
#include "prefeval/error.hpp"
#include "prefeval/random.hpp"

namespace prefeval {

namespace {

std::string synthetic_timestamp(std::size_t index) {
    const std::size_t secs = index / 1000;
    char buf[40];
    std::snprintf(buf, sizeof buf, "1970-01-01T%02zu:%02zu:%02zu.%03zuZ", secs / 3600 % 24,
                  secs / 60 % 60, secs % 60, index % 1000);
    return buf;
}

}  // namespace

void OracleConfig::validate() const {
    const auto& c = label_cuts;
    if (!(0.0 <= c[0] && c[0] < c[1] && c[1] < c[2] && c[2] <= 1.0)) {
        throw invalid_argument("label cuts must satisfy 0 <= t1 < t2 < t3 <= 1");
    }
    if (!(noise_rate >= 0.0 && noise_rate <= 1.0)) {
        throw invalid_argument("noise_rate must lie in [0,1]");
    }
}

PreferenceLabel label_for_difference(double diff, const std::array<double, 3>& cuts) {
    const double mag = std::abs(diff);
    if (mag <= cuts[0]) {
        return PreferenceLabel::Equivalent;
    }
    const bool a_wins = diff > 0.0;
    if (mag <= cuts[1]) {
        return a_wins ? PreferenceLabel::SlightlyBetterA : PreferenceLabel::SlightlyBetterB;
    }
    if (mag <= cuts[2]) {
        return a_wins ? PreferenceLabel::BetterA : PreferenceLabel::BetterB;
    }
    return a_wins ? PreferenceLabel::FarBetterA : PreferenceLabel::FarBetterB;
}

PreferenceLabel oracle_label(const Comparison& c, const OracleConfig& cfg,
                             const ConstraintSet& scenario_constraints) {
    cfg.validate();
    const double d = candidate_quality(cfg.hidden_function, c.a, scenario_constraints) -
                     candidate_quality(cfg.hidden_function, c.b, scenario_constraints);
    PreferenceLabel label = label_for_difference(d, cfg.label_cuts);
    if (cfg.noise_rate > 0.0) {
        Rng rng(mix_seed(cfg.seed, hash_id(c.comparison_id)));
        if (rng.chance(cfg.noise_rate)) {
            // Uniform over the six other labels.
            auto k = static_cast<std::size_t>(rng.below(kAllLabels.size() - 1));
            if (k >= static_cast<std::size_t>(label)) {
                ++k;
            }
            label = kAllLabels[k];
        }
    }
    return label;
}

std::vector<PreferenceRecord> label_set(const ComparisonSet& set, const OracleConfig& cfg) {
    cfg.validate();
    // Fails early, naming the first constraint the scenario does not evaluate.
    set.scenario.constraint_set.projection_of(cfg.hidden_function.constraints());
    std::vector<PreferenceRecord> out;
    out.reserve(set.comparisons.size());
    for (std::size_t i = 0; i < set.comparisons.size(); ++i) {
        const auto& c = set.comparisons[i];
        out.push_back(PreferenceRecord{c.comparison_id,
                                       oracle_label(c, cfg, set.scenario.constraint_set),
                                       PreferenceSource::Oracle, std::nullopt,
                                       synthetic_timestamp(i)});
    }
    return out;
}

}  // namespace prefeval
