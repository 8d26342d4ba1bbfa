#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "prefeval/eval_function.hpp"
#include "prefeval/geometry.hpp"

namespace prefeval {

/// Names of every constraint measure the scenario knows how to evaluate.
const std::vector<std::string>& constraint_registry();

/// All six registered constraints, in registry order.
ConstraintSet full_constraint_set();

struct ScenarioConfig {
    int scale_denominator = 25000;
    double min_area_m2 = 100.0;
    double min_edge_m = 2.5;
    double position_tolerance_m = 10.0;
    double orientation_tolerance_deg = 15.0;
    ConstraintSet constraint_set = full_constraint_set();

    void validate() const;
    friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

struct BuildingObject {
    std::string object_id;
    Polygon initial;
};

/// One step of a candidate's generation pipeline, e.g. {"rotate", {12.5}}.
/// Parameters per transform: simplify {tolerance_m}, square {max_deviation_deg},
/// enlarge {max_factor}, rotate {angle_deg}, translate {distance_m, direction_deg},
/// identity {}.
struct TransformStep {
    std::string name;
    std::vector<double> params;
    friend bool operator==(const TransformStep&, const TransformStep&) = default;
};

struct GeneralisationCandidate {
    std::string candidate_id;
    std::string object_id;
    Polygon geometry;
    SatisfactionVector satisfactions;
    std::vector<TransformStep> provenance;
};

/// Deterministic synthetic footprint: a jittered rectangle with up to three
/// corner notches.
BuildingObject generate_building(std::uint64_t seed);

/// Satisfaction of every constraint in cfg.constraint_set for `gen` as a
/// generalisation of `initial`.
SatisfactionVector evaluate_constraints(const Polygon& initial, const Polygon& gen,
                                        const ScenarioConfig& cfg);

/// Applies one named transform. Throws on unknown names or degenerate output.
Polygon apply_transform(const Polygon& poly, const TransformStep& step, const ScenarioConfig& cfg);

/// Runs a whole pipeline and evaluates the result.
GeneralisationCandidate make_candidate(const BuildingObject& b, std::string candidate_id,
                                       std::vector<TransformStep> pipeline,
                                       const ScenarioConfig& cfg);

/// n candidates with pairwise distinct geometries, each from a random pipeline.
std::vector<GeneralisationCandidate> generate_candidates(const BuildingObject& b,
                                                         const ScenarioConfig& cfg, int n,
                                                         std::uint64_t seed);

/// Removes vertices closer than `tolerance` to the chord joining their
/// neighbours, smallest deviation first, keeping at least four vertices.
std::vector<Point> decimate(const std::vector<Point>& ring, double tolerance);

/// Snaps edges within `max_deviation_deg` of the principal axes onto them.
std::vector<Point> square_corners(const Polygon& poly, double max_deviation_deg);

}  // namespace prefeval
