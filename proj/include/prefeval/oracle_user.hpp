#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "prefeval/eval_function.hpp"
#include "prefeval/preference.hpp"

namespace prefeval {

/// Simulated user. Labels come from a hidden evaluation function, which may
/// use constraints the learner never sees.
struct OracleConfig {
    EvaluationFunction hidden_function;
    /// |quality difference| cut points: <= [0] equivalent, <= [1] slightly
    /// better, <= [2] better, above that far better.
    std::array<double, 3> label_cuts{0.05, 0.15, 0.30};
    double noise_rate = 0.0;
    std::uint64_t seed = 0;

    void validate() const;
};

/// Noise-free grade of a quality difference d = q(a) - q(b).
PreferenceLabel label_for_difference(double diff, const std::array<double, 3>& cuts);

PreferenceLabel oracle_label(const Comparison& c, const OracleConfig& cfg,
                             const ConstraintSet& scenario_constraints);

/// One oracle record per comparison, in set order. Timestamps are synthetic
/// (epoch plus one millisecond per record) so output is reproducible.
std::vector<PreferenceRecord> label_set(const ComparisonSet& set, const OracleConfig& cfg);

}  // namespace prefeval
