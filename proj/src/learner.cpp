#include "prefeval/learner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "prefeval/error.hpp"

namespace prefeval {

namespace {

std::size_t level_of(const std::vector<double>& levels, double value) {
    auto it = std::find(levels.begin(), levels.end(), value);
    return it == levels.end() ? levels.size() : static_cast<std::size_t>(it - levels.begin());
}

std::size_t level_of(const std::vector<int>& levels, int value) {
    auto it = std::find(levels.begin(), levels.end(), value);
    return it == levels.end() ? levels.size() : static_cast<std::size_t>(it - levels.begin());
}

template <typename T>
std::size_t nearest_level(const std::vector<T>& levels, double value) {
    std::size_t best = 0;
    double best_gap = std::abs(static_cast<double>(levels[0]) - value);
    for (std::size_t i = 1; i < levels.size(); ++i) {
        const double gap = std::abs(static_cast<double>(levels[i]) - value);
        if (gap < best_gap) {  // strict: an exact midpoint keeps the lower level
            best_gap = gap;
            best = i;
        }
    }
    return best;
}

// Grid coordinates of a solution: one level index per weight, then the p index.
using Coords = std::vector<std::size_t>;

Coords coords_of(const EvaluationFunction& f, const ParameterGrid& grid) {
    Coords c;
    c.reserve(f.size() + 1);
    for (double w : f.weights()) {
        const std::size_t l = level_of(grid.weight_values, w);
        if (l == grid.weight_values.size()) {
            throw invalid_argument("weight " + std::to_string(w) + " is not a grid value");
        }
        c.push_back(l);
    }
    const std::size_t pl = level_of(grid.p_values, f.power());
    if (pl == grid.p_values.size()) {
        throw invalid_argument("power " + std::to_string(f.power()) + " is not a grid value");
    }
    c.push_back(pl);
    return c;
}

bool all_weights_zero(const Coords& c, const ParameterGrid& grid) {
    for (std::size_t i = 0; i + 1 < c.size(); ++i) {
        if (grid.weight_values[c[i]] != 0.0) {
            return false;
        }
    }
    return true;
}

std::vector<double> weights_at(const Coords& c, const ParameterGrid& grid) {
    std::vector<double> w(c.size() - 1);
    for (std::size_t i = 0; i + 1 < c.size(); ++i) {
        w[i] = grid.weight_values[c[i]];
    }
    return w;
}

EvaluationFunction function_at(const Coords& c, const ParameterGrid& grid,
                               const ConstraintSet& constraints) {
    return EvaluationFunction(constraints, weights_at(c, grid), grid.p_values[c.back()]);
}

std::size_t levels_for(const ParameterGrid& grid, std::size_t param, std::size_t n_weights) {
    return param < n_weights ? grid.weight_values.size() : grid.p_values.size();
}

}  // namespace

ParameterGrid ParameterGrid::standard() {
    ParameterGrid g;
    for (int k = 0; k <= 20; ++k) {
        g.weight_values.push_back(k / 20.0);
    }
    for (int p = 1; p <= 8; ++p) {
        g.p_values.push_back(p);
    }
    return g;
}

void ParameterGrid::validate() const {
    if (weight_values.size() < 2) {
        throw invalid_argument("weight grid needs at least two levels");
    }
    if (weight_values.front() != 0.0) {
        throw invalid_argument("weight grid must start at 0");
    }
    for (std::size_t i = 0; i < weight_values.size(); ++i) {
        if (!(weight_values[i] >= 0.0) || !std::isfinite(weight_values[i])) {
            throw invalid_argument("weight levels must be finite and non-negative");
        }
        if (i > 0 && !(weight_values[i] > weight_values[i - 1])) {
            throw invalid_argument("weight levels must be strictly increasing");
        }
    }
    if (p_values.empty()) {
        throw invalid_argument("power grid must not be empty");
    }
    for (std::size_t i = 0; i < p_values.size(); ++i) {
        if (p_values[i] < 1) {
            throw invalid_argument("power levels must be >= 1");
        }
        if (i > 0 && p_values[i] <= p_values[i - 1]) {
            throw invalid_argument("power levels must be strictly increasing");
        }
    }
}

std::size_t ParameterGrid::size(std::size_t n_weights) const {
    constexpr std::size_t kMax = std::numeric_limits<std::size_t>::max();
    std::size_t total = p_values.size();
    for (std::size_t i = 0; i < n_weights; ++i) {
        if (total > kMax / weight_values.size()) {
            return kMax;
        }
        total *= weight_values.size();
    }
    return total;
}

void TabuConfig::validate() const {
    if (max_iterations < 1) {
        throw invalid_argument("max_iterations must be >= 1");
    }
    if (tabu_tenure < 0) {
        throw invalid_argument("tabu_tenure must be >= 0");
    }
}

ErrorEvaluator::ErrorEvaluator(const ComparisonSet& set, const std::vector<PreferenceRecord>& prefs,
                               const ConstraintSet& constraints,
                               const CompatibilityThresholds& thresholds)
    : n_(constraints.size()), thresholds_(thresholds) {
    thresholds_.validate();
    const auto labeled = effective_preferences(prefs);
    if (labeled.empty()) {
        throw invalid_argument("no labeled comparisons to learn from");
    }
    const auto idx = set.scenario.constraint_set.projection_of(constraints);
    a_.reserve(labeled.size() * n_);
    b_.reserve(labeled.size() * n_);
    for (const auto& rec : labeled) {
        const Comparison* c = set.find(rec.comparison_id);
        if (c == nullptr) {
            throw Error(ErrorKind::NotFound,
                        "preference references unknown comparison '" + rec.comparison_id + "'");
        }
        for (std::size_t i : idx) {
            a_.push_back(c->a.satisfactions.at(i));
            b_.push_back(c->b.satisfactions.at(i));
        }
        labels_.push_back(rec.label);
    }
}

std::size_t ErrorEvaluator::incompatible(std::span<const double> weights, int p) const {
    if (weights.size() != n_) {
        throw invalid_argument("weight vector does not match the evaluator's constraints");
    }
    std::size_t count = 0;
    for (std::size_t k = 0; k < labels_.size(); ++k) {
        const std::span<const double> a(a_.data() + k * n_, n_);
        const std::span<const double> b(b_.data() + k * n_, n_);
        const double d = power_mean(weights, p, a) - power_mean(weights, p, b);
        count += is_compatible(d, labels_[k], thresholds_) ? 0 : 1;
    }
    return count;
}

double ErrorEvaluator::error_percent(std::span<const double> weights, int p) const {
    return 100.0 * static_cast<double>(incompatible(weights, p)) /
           static_cast<double>(labels_.size());
}

double ErrorEvaluator::error_percent(const EvaluationFunction& f) const {
    return error_percent(f.weights(), f.power());
}

bool on_grid(const EvaluationFunction& f, const ParameterGrid& grid) {
    for (double w : f.weights()) {
        if (level_of(grid.weight_values, w) == grid.weight_values.size()) {
            return false;
        }
    }
    return level_of(grid.p_values, f.power()) != grid.p_values.size();
}

EvaluationFunction snap_to_grid(const EvaluationFunction& f, const ParameterGrid& grid) {
    grid.validate();
    std::vector<double> w;
    w.reserve(f.size());
    for (double v : f.weights()) {
        w.push_back(grid.weight_values[nearest_level(grid.weight_values, v)]);
    }
    if (std::all_of(w.begin(), w.end(), [](double v) { return v == 0.0; })) {
        const auto heaviest = std::max_element(f.weights().begin(), f.weights().end());
        w[static_cast<std::size_t>(heaviest - f.weights().begin())] = grid.weight_values[1];
    }
    const int p = grid.p_values[nearest_level(grid.p_values, f.power())];
    return EvaluationFunction(f.constraints(), std::move(w), p);
}

std::vector<EvaluationFunction> neighborhood(const EvaluationFunction& s, const ParameterGrid& grid) {
    const Coords base = coords_of(s, grid);
    const std::size_t n = s.size();
    std::vector<EvaluationFunction> out;
    for (std::size_t param = 0; param <= n; ++param) {
        for (std::size_t level = 0; level < levels_for(grid, param, n); ++level) {
            if (level == base[param]) {
                continue;
            }
            Coords c = base;
            c[param] = level;
            if (param < n && all_weights_zero(c, grid)) {
                continue;
            }
            out.push_back(function_at(c, grid, s.constraints()));
        }
    }
    return out;
}

LearnResult tabu_search(const ComparisonSet& set, const std::vector<PreferenceRecord>& prefs,
                        const EvaluationFunction& init, const CompatibilityThresholds& t,
                        const ParameterGrid& grid, const TabuConfig& cfg) {
    grid.validate();
    cfg.validate();
    if (prefs.empty()) {
        throw invalid_argument("no preferences to learn from");
    }
    const ErrorEvaluator evaluator(set, prefs, init.constraints(), t);
    const std::size_t n = init.size();

    Coords current = coords_of(init, grid);
    auto error_at = [&](const Coords& c) {
        return evaluator.error_percent(weights_at(c, grid), grid.p_values[c.back()]);
    };

    LearnResult result{init, 0.0, 0.0, {}, 0};
    double current_error = error_at(current);
    result.evaluations = 1;
    result.initial_error_percent = current_error;
    result.best_error_percent = current_error;
    Coords best = current;
    result.trajectory.push_back({0, current_error, current_error});

    // (parameter, level) -> last iteration during which assigning that level
    // to that parameter is forbidden.
    std::map<std::pair<std::size_t, std::size_t>, int> tabu_until;

    for (int iter = 1; iter <= cfg.max_iterations; ++iter) {
        if (cfg.stop_at_zero && result.best_error_percent == 0.0) {
            break;
        }
        bool found = false;
        double move_error = 0.0;
        std::size_t move_param = 0;
        std::size_t move_level = 0;
        for (std::size_t param = 0; param <= n; ++param) {
            for (std::size_t level = 0; level < levels_for(grid, param, n); ++level) {
                if (level == current[param]) {
                    continue;
                }
                Coords c = current;
                c[param] = level;
                if (param < n && all_weights_zero(c, grid)) {
                    continue;
                }
                const double err = error_at(c);
                ++result.evaluations;
                auto it = tabu_until.find({param, level});
                const bool tabu = it != tabu_until.end() && iter <= it->second;
                if (tabu && !(err < result.best_error_percent)) {
                    continue;
                }
                // Strict comparison keeps the first candidate in
                // (parameter, level) order on ties.
                if (!found || err < move_error) {
                    found = true;
                    move_error = err;
                    move_param = param;
                    move_level = level;
                }
            }
        }
        if (!found) {
            break;
        }
        tabu_until[{move_param, current[move_param]}] = iter + cfg.tabu_tenure;
        current[move_param] = move_level;
        current_error = move_error;
        if (current_error < result.best_error_percent) {
            result.best_error_percent = current_error;
            best = current;
        }
        result.trajectory.push_back({iter, current_error, result.best_error_percent});
    }
    result.best = function_at(best, grid, init.constraints());
    return result;
}

ExhaustiveResult exhaustive_search(const ComparisonSet& set,
                                   const std::vector<PreferenceRecord>& prefs,
                                   const CompatibilityThresholds& t,
                                   const ConstraintSet& constraints, const ParameterGrid& grid,
                                   std::size_t cap) {
    grid.validate();
    const std::size_t n = constraints.size();
    const std::size_t total = grid.size(n);
    if (total > cap) {
        throw invalid_argument("grid has " +
                               (total == std::numeric_limits<std::size_t>::max()
                                    ? std::string("too many")
                                    : std::to_string(total)) +
                               " points, above the exhaustive cap of " + std::to_string(cap));
    }
    const ErrorEvaluator evaluator(set, prefs, constraints, t);

    Coords c(n + 1, 0);
    bool have_best = false;
    Coords best;
    double best_error = 0.0;
    std::size_t evaluations = 0;
    // Odometer with the power as the fastest digit walks the grid in
    // lexicographic order of (w_1, ..., w_n, p).
    while (true) {
        if (!all_weights_zero(c, grid)) {
            const double err =
                evaluator.error_percent(weights_at(c, grid), grid.p_values[c.back()]);
            ++evaluations;
            if (!have_best || err < best_error) {
                have_best = true;
                best_error = err;
                best = c;
            }
        }
        std::size_t digit = n + 1;
        while (digit > 0) {
            --digit;
            if (++c[digit] < levels_for(grid, digit, n)) {
                break;
            }
            c[digit] = 0;
            if (digit == 0) {
                digit = n + 2;  // wrapped past the most significant digit
                break;
            }
        }
        if (digit == n + 2) {
            break;
        }
    }
    if (!have_best) {
        throw invalid_argument("grid contains no admissible solution");
    }
    return ExhaustiveResult{function_at(best, grid, constraints), best_error, evaluations};
}

}  // namespace prefeval
