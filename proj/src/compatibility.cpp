#include "prefeval/compatibility.hpp"

#include <algorithm>
#include <cmath>

#include "prefeval/error.hpp"

namespace prefeval {

namespace {

double error_percent(std::size_t incompatible, std::size_t total) {
    return 100.0 * static_cast<double>(incompatible) / static_cast<double>(total);
}

}  // namespace

void CompatibilityThresholds::validate() const {
    for (double v : {eq_max, sb_min, sb_max, b_min, b_max, fb_min}) {
        if (!(v >= 0.0 && v <= 1.0)) {
            throw invalid_argument("compatibility thresholds must lie in [0,1]");
        }
    }
    if (sb_min > sb_max || b_min > b_max) {
        throw invalid_argument("compatibility range minimum exceeds its maximum");
    }
}

bool is_compatible(double diff, PreferenceLabel label, const CompatibilityThresholds& t) {
    switch (label) {
        case PreferenceLabel::FarBetterA: return diff >= t.fb_min;
        case PreferenceLabel::FarBetterB: return -diff >= t.fb_min;
        case PreferenceLabel::BetterA: return t.b_min <= diff && diff <= t.b_max;
        case PreferenceLabel::BetterB: return t.b_min <= -diff && -diff <= t.b_max;
        case PreferenceLabel::SlightlyBetterA: return t.sb_min <= diff && diff <= t.sb_max;
        case PreferenceLabel::SlightlyBetterB: return t.sb_min <= -diff && -diff <= t.sb_max;
        case PreferenceLabel::Equivalent: return std::abs(diff) <= t.eq_max;
    }
    return false;
}

double candidate_quality(const EvaluationFunction& f, const GeneralisationCandidate& cand,
                         const ConstraintSet& scenario_constraints) {
    if (cand.satisfactions.size() != scenario_constraints.size()) {
        throw invalid_argument("candidate '" + cand.candidate_id +
                               "' satisfaction vector does not match the scenario constraints");
    }
    const auto idx = scenario_constraints.projection_of(f.constraints());
    std::vector<double> projected(idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i) {
        projected[i] = cand.satisfactions[idx[i]];
    }
    return quality(f, projected);
}

int comp(const Comparison& c, const EvaluationFunction& f, PreferenceLabel label,
         const CompatibilityThresholds& t, const ConstraintSet& scenario_constraints) {
    const double d = candidate_quality(f, c.a, scenario_constraints) -
                     candidate_quality(f, c.b, scenario_constraints);
    return is_compatible(d, label, t) ? 0 : 1;
}

CompatibilityReport diagnose(const ComparisonSet& set, const std::vector<PreferenceRecord>& prefs,
                             const EvaluationFunction& f, const CompatibilityThresholds& t) {
    const auto labeled = effective_preferences(prefs);
    if (labeled.empty()) {
        throw invalid_argument("no labeled comparisons to evaluate");
    }
    t.validate();
    CompatibilityReport report;
    report.rows.reserve(labeled.size());
    std::size_t incompatible = 0;
    for (const auto& rec : labeled) {
        const Comparison* c = set.find(rec.comparison_id);
        if (c == nullptr) {
            throw Error(ErrorKind::NotFound,
                        "preference references unknown comparison '" + rec.comparison_id + "'");
        }
        ReportRow row;
        row.comparison_id = rec.comparison_id;
        row.label = rec.label;
        row.quality_a = candidate_quality(f, c->a, set.scenario.constraint_set);
        row.quality_b = candidate_quality(f, c->b, set.scenario.constraint_set);
        row.diff = row.quality_a - row.quality_b;
        row.compatible = is_compatible(row.diff, rec.label, t);
        incompatible += row.compatible ? 0 : 1;
        report.rows.push_back(std::move(row));
    }
    std::stable_partition(report.rows.begin(), report.rows.end(),
                          [](const ReportRow& r) { return !r.compatible; });
    report.global_error_percent = error_percent(incompatible, labeled.size());
    return report;
}

double global_error(const ComparisonSet& set, const std::vector<PreferenceRecord>& prefs,
                    const EvaluationFunction& f, const CompatibilityThresholds& t) {
    return diagnose(set, prefs, f, t).global_error_percent;
}

}  // namespace prefeval
