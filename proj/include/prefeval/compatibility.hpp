#pragma once

#include <string>
#include <vector>

#include "prefeval/eval_function.hpp"
#include "prefeval/preference.hpp"

namespace prefeval {

/// Bounds on the quality difference accepted for each preference grade.
/// Ranges are inclusive and may overlap.
struct CompatibilityThresholds {
    double eq_max = 0.05;
    double sb_min = 0.03;
    double sb_max = 0.15;
    double b_min = 0.10;
    double b_max = 0.30;
    double fb_min = 0.25;

    void validate() const;
    friend bool operator==(const CompatibilityThresholds&, const CompatibilityThresholds&) = default;
};

/// True when a quality difference d = q(a) - q(b) is consistent with the label.
bool is_compatible(double diff, PreferenceLabel label, const CompatibilityThresholds& t);

/// 0 if the label is compatible with f's ranking of the pair, 1 otherwise.
/// Candidate vectors are indexed by `scenario_constraints`; f may use a subset.
int comp(const Comparison& c, const EvaluationFunction& f, PreferenceLabel label,
         const CompatibilityThresholds& t, const ConstraintSet& scenario_constraints);

/// Quality of a candidate under f, projecting its scenario-ordered vector onto
/// f's constraints.
double candidate_quality(const EvaluationFunction& f, const GeneralisationCandidate& cand,
                         const ConstraintSet& scenario_constraints);

/// Percentage of labeled comparisons whose label f contradicts.
double global_error(const ComparisonSet& set, const std::vector<PreferenceRecord>& prefs,
                    const EvaluationFunction& f, const CompatibilityThresholds& t);

struct ReportRow {
    std::string comparison_id;
    PreferenceLabel label = PreferenceLabel::Equivalent;
    double quality_a = 0.0;
    double quality_b = 0.0;
    double diff = 0.0;
    bool compatible = true;
};

struct CompatibilityReport {
    double global_error_percent = 0.0;
    std::vector<ReportRow> rows;  ///< incompatible rows first, then in preference order
};

CompatibilityReport diagnose(const ComparisonSet& set, const std::vector<PreferenceRecord>& prefs,
                             const EvaluationFunction& f, const CompatibilityThresholds& t);

}  // namespace prefeval
