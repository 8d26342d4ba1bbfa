#include "doctest.h"

#include <cmath>
#include <numeric>

#include "prefeval/error.hpp"
#include "prefeval/eval_function.hpp"
#include "prefeval/random.hpp"

using namespace prefeval;

namespace {

ConstraintSet names(std::size_t n) {
    std::vector<std::string> v;
    for (std::size_t i = 0; i < n; ++i) v.push_back("c" + std::to_string(i));
    return ConstraintSet(v);
}

// Direct long-double transcription of the aggregation formula, independent of
// int_pow and the clamping in power_mean.
long double reference_quality(const std::vector<double>& w, int p, const std::vector<double>& v) {
    long double num = 0, den = 0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        num += std::pow(static_cast<long double>(w[i]), p) * std::pow(static_cast<long double>(v[i]), p);
        den += std::pow(static_cast<long double>(w[i]), p);
    }
    return std::pow(num / den, 1.0L / p);
}

}  // namespace

TEST_CASE("quality examples") {
    CHECK(quality(EvaluationFunction(names(1), {1.0}, 3), std::vector{0.7}) == doctest::Approx(0.7).epsilon(1e-12));
    CHECK(quality(EvaluationFunction(names(2), {1.0, 3.0}, 1), std::vector{0.4, 0.8}) ==
          doctest::Approx(0.7).epsilon(1e-12));
    // sqrt(4.25 / 5), evaluated at 30 digits
    const double expected = 0.921954445729288731;
    const std::vector<double> sat{0.5, 1.0};
    const double q = quality(EvaluationFunction(names(2), {1.0, 2.0}, 2), sat);
    CHECK(std::abs(q - expected) < 1e-12);
    CHECK(std::abs(q - static_cast<double>(reference_quality({1.0, 2.0}, 2, sat))) < 1e-12);
    CHECK(quality(EvaluationFunction(names(3), {0.2, 0.9, 0.4}, 5), std::vector{0.3, 0.3, 0.3}) ==
          doctest::Approx(0.3).epsilon(1e-12));
}

TEST_CASE("quality rejects bad input") {
    CHECK_THROWS_AS(EvaluationFunction(names(2), {0.0, 0.0}, 1), Error);
    CHECK_THROWS_AS(EvaluationFunction(names(2), {1.0}, 1), Error);
    CHECK_THROWS_AS(EvaluationFunction(names(2), {1.0, -0.5}, 1), Error);
    CHECK_THROWS_AS(EvaluationFunction(names(2), {1.0, 1.0}, 0), Error);
    CHECK_THROWS_AS(ConstraintSet({"a", "a"}), Error);
    CHECK_THROWS_AS(ConstraintSet(std::vector<std::string>{}), Error);
    CHECK_THROWS_AS(ConstraintSet({""}), Error);
    const EvaluationFunction f(names(2), {1.0, 1.0}, 2);
    CHECK_THROWS_AS(quality(f, std::vector{0.5}), Error);
}

TEST_CASE("effective weight share") {
    auto s = effective_weight_share(EvaluationFunction(names(2), {1.0, 1.0}, 4));
    CHECK(s[0] == doctest::Approx(0.5));
    CHECK(s[1] == doctest::Approx(0.5));
    s = effective_weight_share(EvaluationFunction(names(2), {1.0, 2.0}, 2));
    CHECK(s[0] == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(s[1] == doctest::Approx(0.8).epsilon(1e-12));
    for (int p = 1; p <= 8; ++p) {
        s = effective_weight_share(EvaluationFunction(names(2), {1.0, 0.0}, p));
        CHECK(s[0] == 1.0);
        CHECK(s[1] == 0.0);
    }
    Rng rng(3);
    for (int k = 0; k < 200; ++k) {
        std::vector<double> w(5);
        for (auto& x : w) x = rng.uniform(0.01, 1.0);
        s = effective_weight_share(EvaluationFunction(names(5), w, 1 + static_cast<int>(rng.below(8))));
        CHECK(std::abs(std::accumulate(s.begin(), s.end(), 0.0) - 1.0) < 1e-12);
    }
}

TEST_CASE("quality agrees with the reference formula on random inputs") {
    Rng rng(11);
    for (int k = 0; k < 500; ++k) {
        const std::size_t n = 1 + rng.below(6);
        std::vector<double> w(n), v(n);
        for (auto& x : w) x = rng.uniform(0.05, 1.0);
        for (auto& x : v) x = rng.uniform();
        const int p = 1 + static_cast<int>(rng.below(8));
        const double q = quality(EvaluationFunction(names(n), w, p), v);
        CHECK(std::abs(q - static_cast<double>(reference_quality(w, p, v))) < 1e-12);
    }
}

TEST_CASE("zero weights erase their constraint") {
    const EvaluationFunction f(names(3), {0.4, 0.0, 0.9}, 3);
    CHECK(quality(f, std::vector{0.2, 0.0, 0.8}) == quality(f, std::vector{0.2, 1.0, 0.8}));
}

TEST_CASE("default initial function uses the five learnable constraints") {
    const auto f = default_initial_function();
    CHECK(f.size() == 5);
    CHECK(f.constraints().names() ==
          std::vector<std::string>{"size", "granularity", "squareness", "convexity", "position"});
    CHECK_FALSE(f.constraints().contains("orientation"));
}
