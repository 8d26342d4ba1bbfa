#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace prefeval {

/// Ordered, duplicate-free list of constraint names. Satisfaction vectors
/// index into this order.
class ConstraintSet {
public:
    ConstraintSet() = default;
    explicit ConstraintSet(std::vector<std::string> names);

    std::size_t size() const noexcept { return names_.size(); }
    const std::vector<std::string>& names() const noexcept { return names_; }
    const std::string& operator[](std::size_t i) const { return names_[i]; }

    std::optional<std::size_t> index_of(const std::string& name) const;
    bool contains(const std::string& name) const { return index_of(name).has_value(); }

    /// For every name of `subset`, its position in this set. Throws naming the
    /// first constraint that is missing here.
    std::vector<std::size_t> projection_of(const ConstraintSet& subset) const;

    friend bool operator==(const ConstraintSet&, const ConstraintSet&) = default;

private:
    std::vector<std::string> names_;
};

/// Per-constraint satisfaction values, each in [0,1].
using SatisfactionVector = std::vector<double>;

void validate_satisfactions(std::span<const double> values, std::size_t expected_size);

/// Weighted power mean over constraint satisfactions. Weights are
/// non-negative with at least one positive entry; the power is an integer >= 1.
class EvaluationFunction {
public:
    EvaluationFunction(ConstraintSet constraints, std::vector<double> weights, int power);

    const ConstraintSet& constraints() const noexcept { return constraints_; }
    const std::vector<double>& weights() const noexcept { return weights_; }
    int power() const noexcept { return power_; }
    std::size_t size() const noexcept { return weights_.size(); }

    friend bool operator==(const EvaluationFunction&, const EvaluationFunction&) = default;

private:
    ConstraintSet constraints_;
    std::vector<double> weights_;
    int power_;
};

/// x^n for a non-negative integer n, by repeated squaring.
double int_pow(double x, int n) noexcept;

/// Weighted power mean of `values` with integer power p. Zero weights drop
/// their term entirely. Throws when every weight is zero.
double power_mean(std::span<const double> weights, int p, std::span<const double> values);

/// Quality of one satisfaction vector, given in the function's own constraint
/// order: [ sum(w_i^p Val_i^p) / sum(w_i^p) ]^(1/p).
double quality(const EvaluationFunction& f, std::span<const double> satisfactions);

/// Share w_i^p / sum_j w_j^p of each constraint in the aggregate.
std::vector<double> effective_weight_share(const EvaluationFunction& f);

/// The five constraints a learnt function ranges over by default.
ConstraintSet default_learnable_constraints();

/// Equal weights over the default learnable constraints, p = 1.
EvaluationFunction default_initial_function();

}  // namespace prefeval
