#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "prefeval/compatibility.hpp"
#include "prefeval/eval_function.hpp"
#include "prefeval/preference.hpp"

namespace prefeval {

/// Discrete search space: every weight takes one of `weight_values`, the
/// power one of `p_values`.
struct ParameterGrid {
    std::vector<double> weight_values;
    std::vector<int> p_values;

    /// Weights 0, 0.05, ..., 1 and p = 1..8.
    static ParameterGrid standard();

    void validate() const;
    /// Number of grid points for `n_weights` weights, saturating at SIZE_MAX.
    std::size_t size(std::size_t n_weights) const;
    friend bool operator==(const ParameterGrid&, const ParameterGrid&) = default;
};

struct TabuConfig {
    int max_iterations = 500;
    int tabu_tenure = 7;
    std::uint64_t seed = 0;
    bool stop_at_zero = true;

    void validate() const;
};

struct TrajectoryPoint {
    int iteration = 0;
    double current_error = 0.0;
    double best_error = 0.0;
};

struct LearnResult {
    EvaluationFunction best;
    double best_error_percent = 0.0;
    double initial_error_percent = 0.0;
    std::vector<TrajectoryPoint> trajectory;
    std::size_t evaluations = 0;
};

struct ExhaustiveResult {
    EvaluationFunction best;
    double error_percent = 0.0;
    std::size_t evaluations = 0;
};

/// Precomputed view of a labeled comparison sample for repeated error
/// evaluation over one constraint set. Produces exactly the numbers
/// global_error would.
class ErrorEvaluator {
public:
    ErrorEvaluator(const ComparisonSet& set, const std::vector<PreferenceRecord>& prefs,
                   const ConstraintSet& constraints, const CompatibilityThresholds& thresholds);

    std::size_t labeled() const noexcept { return labels_.size(); }
    std::size_t incompatible(std::span<const double> weights, int p) const;
    double error_percent(std::span<const double> weights, int p) const;
    double error_percent(const EvaluationFunction& f) const;

private:
    std::size_t n_;
    std::vector<double> a_;  // labeled() x n_, row-major
    std::vector<double> b_;
    std::vector<PreferenceLabel> labels_;
    CompatibilityThresholds thresholds_;
};

/// True when every weight and the power of f are grid values.
bool on_grid(const EvaluationFunction& f, const ParameterGrid& grid);

/// Nearest grid value per parameter; exact midpoints snap to the lower value.
/// An assignment that snaps to all-zero weights keeps its largest weight at
/// the smallest positive level.
EvaluationFunction snap_to_grid(const EvaluationFunction& f, const ParameterGrid& grid);

/// Every on-grid function differing from s in exactly one parameter, ordered by
/// parameter index (weights, then p) and grid value. All-zero weight
/// assignments are excluded.
std::vector<EvaluationFunction> neighborhood(const EvaluationFunction& s, const ParameterGrid& grid);

LearnResult tabu_search(const ComparisonSet& set, const std::vector<PreferenceRecord>& prefs,
                        const EvaluationFunction& init, const CompatibilityThresholds& t,
                        const ParameterGrid& grid, const TabuConfig& cfg);

inline constexpr std::size_t kExhaustiveCap = 1'000'000;

/// Minimum-error grid point, ties resolved to the lexicographically smallest
/// (w_1, ..., w_n, p).
ExhaustiveResult exhaustive_search(const ComparisonSet& set,
                                   const std::vector<PreferenceRecord>& prefs,
                                   const CompatibilityThresholds& t,
                                   const ConstraintSet& constraints, const ParameterGrid& grid,
                                   std::size_t cap = kExhaustiveCap);

}  // namespace prefeval
