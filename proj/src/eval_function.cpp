#include "prefeval/eval_function.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "prefeval/error.hpp"

namespace prefeval {

ConstraintSet::ConstraintSet(std::vector<std::string> names) : names_(std::move(names)) {
    if (names_.empty()) {
        throw invalid_argument("constraint set must contain at least one constraint");
    }
    std::unordered_set<std::string> seen;
    for (const auto& n : names_) {
        if (n.empty()) {
            throw invalid_argument("constraint name must be non-empty");
        }
        if (!seen.insert(n).second) {
            throw invalid_argument("duplicate constraint '" + n + "'");
        }
    }
}

std::optional<std::size_t> ConstraintSet::index_of(const std::string& name) const {
    auto it = std::find(names_.begin(), names_.end(), name);
    if (it == names_.end()) {
        return std::nullopt;
    }
    return static_cast<std::size_t>(it - names_.begin());
}

std::vector<std::size_t> ConstraintSet::projection_of(const ConstraintSet& subset) const {
    std::vector<std::size_t> idx;
    idx.reserve(subset.size());
    for (const auto& n : subset.names()) {
        auto i = index_of(n);
        if (!i) {
            throw invalid_argument("constraint '" + n + "' is not evaluated by the scenario");
        }
        idx.push_back(*i);
    }
    return idx;
}

void validate_satisfactions(std::span<const double> values, std::size_t expected_size) {
    if (values.size() != expected_size) {
        throw invalid_argument("satisfaction vector has " + std::to_string(values.size()) +
                               " entries, expected " + std::to_string(expected_size));
    }
    for (double v : values) {
        if (!(v >= 0.0 && v <= 1.0)) {
            throw invalid_argument("satisfaction value " + std::to_string(v) + " outside [0,1]");
        }
    }
}

EvaluationFunction::EvaluationFunction(ConstraintSet constraints, std::vector<double> weights,
                                       int power)
    : constraints_(std::move(constraints)), weights_(std::move(weights)), power_(power) {
    if (constraints_.size() == 0) {
        throw invalid_argument("evaluation function needs at least one constraint");
    }
    if (weights_.size() != constraints_.size()) {
        throw invalid_argument("weights length " + std::to_string(weights_.size()) +
                               " does not match constraint count " +
                               std::to_string(constraints_.size()));
    }
    bool any_positive = false;
    for (double w : weights_) {
        if (!(w >= 0.0) || !std::isfinite(w)) {
            throw invalid_argument("weights must be finite and non-negative");
        }
        any_positive = any_positive || w > 0.0;
    }
    if (!any_positive) {
        throw invalid_argument("at least one weight must be positive");
    }
    if (power_ < 1) {
        throw invalid_argument("power must be an integer >= 1");
    }
}

double int_pow(double x, int n) noexcept {
    double result = 1.0;
    while (n > 0) {
        if (n & 1) {
            result *= x;
        }
        x *= x;
        n >>= 1;
    }
    return result;
}

double power_mean(std::span<const double> weights, int p, std::span<const double> values) {
    double norm = 0.0;
    double acc = 0.0;
    double lo = 1.0;
    double hi = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        const double w = weights[i];
        if (w == 0.0) {
            continue;
        }
        const double wp = int_pow(w, p);
        const double v = values[i];
        norm += wp;
        acc += wp * int_pow(v, p);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    if (norm <= 0.0) {
        throw invalid_argument("all effective weights vanish");
    }
    double q = acc / norm;
    if (p > 1) {
        q = std::pow(q, 1.0 / p);
    }
    // A mean lies between the extremes of its active terms; rounding can push
    // it one ulp outside.
    return std::clamp(q, std::min(lo, hi), std::max(lo, hi));
}

double quality(const EvaluationFunction& f, std::span<const double> satisfactions) {
    if (satisfactions.size() != f.size()) {
        throw invalid_argument("satisfaction vector has " + std::to_string(satisfactions.size()) +
                               " entries, function expects " + std::to_string(f.size()));
    }
    return power_mean(f.weights(), f.power(), satisfactions);
}

std::vector<double> effective_weight_share(const EvaluationFunction& f) {
    std::vector<double> share(f.size());
    double norm = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        share[i] = int_pow(f.weights()[i], f.power());
        norm += share[i];
    }
    if (norm <= 0.0) {
        throw invalid_argument("all effective weights vanish");
    }
    for (double& s : share) {
        s /= norm;
    }
    return share;
}

ConstraintSet default_learnable_constraints() {
    return ConstraintSet({"size", "granularity", "squareness", "convexity", "position"});
}

EvaluationFunction default_initial_function() {
    return EvaluationFunction(default_learnable_constraints(), {0.5, 0.5, 0.5, 0.5, 0.5}, 1);
}

}  // namespace prefeval
