#include "prefeval/building_model.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "prefeval/error.hpp"
#include "prefeval/random.hpp"

namespace prefeval {

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;
constexpr double kSquarenessBandDeg = 25.0;

double log_uniform(Rng& rng, double lo, double hi) {
    return std::exp(rng.uniform(std::log(lo), std::log(hi)));
}

double chord_deviation(Point prev, Point cur, Point next) {
    const double dx = next.x - prev.x;
    const double dy = next.y - prev.y;
    const double len = std::hypot(dx, dy);
    if (len == 0.0) {
        return std::hypot(cur.x - prev.x, cur.y - prev.y);
    }
    return std::abs(dx * (cur.y - prev.y) - dy * (cur.x - prev.x)) / len;
}

std::vector<Point> drop_redundant(std::vector<Point> ring) {
    bool changed = true;
    while (changed && ring.size() > 3) {
        changed = false;
        for (std::size_t i = 0; i < ring.size() && ring.size() > 3; ++i) {
            const std::size_t n = ring.size();
            const Point prev = ring[(i + n - 1) % n];
            const Point cur = ring[i];
            const Point next = ring[(i + 1) % n];
            const bool duplicate = std::hypot(cur.x - prev.x, cur.y - prev.y) < 1e-9;
            if (duplicate || chord_deviation(prev, cur, next) < 1e-9) {
                ring.erase(ring.begin() + static_cast<std::ptrdiff_t>(i));
                changed = true;
                break;
            }
        }
    }
    return ring;
}

// Minimal union-find over vertex indices.
struct Groups {
    std::vector<std::size_t> parent;
    explicit Groups(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    std::size_t find(std::size_t i) {
        while (parent[i] != i) {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        return i;
    }
    void join(std::size_t a, std::size_t b) { parent[find(a)] = find(b); }
};

double squareness(const Polygon& gen) {
    double total = 0.0;
    int count = 0;
    for (std::size_t i = 0; i < gen.size(); ++i) {
        const double dev = std::abs(vertex_angle_deg(gen, i) - 90.0);
        if (dev <= kSquarenessBandDeg) {
            total += dev / kSquarenessBandDeg;
            ++count;
        }
    }
    return count == 0 ? 1.0 : 1.0 - total / count;
}

GeneralisationCandidate random_candidate(const BuildingObject& b, const ScenarioConfig& cfg,
                                         std::string id, Rng& rng) {
    std::vector<TransformStep> pipeline;
    if (rng.chance(1.0 / 6.0)) {
        pipeline.push_back({"identity", {}});
    } else {
        std::array<int, 5> ops{0, 1, 2, 3, 4};
        for (std::size_t i = ops.size() - 1; i > 0; --i) {
            std::swap(ops[i], ops[rng.below(i + 1)]);
        }
        const std::size_t len = 1 + rng.below(3);
        std::sort(ops.begin(), ops.begin() + static_cast<std::ptrdiff_t>(len));
        for (std::size_t k = 0; k < len; ++k) {
            switch (ops[k]) {
                case 0: pipeline.push_back({"simplify", {rng.uniform(0.5, 4.0)}}); break;
                case 1: pipeline.push_back({"square", {15.0}}); break;
                case 2: pipeline.push_back({"enlarge", {2.0}}); break;
                case 3: pipeline.push_back({"rotate", {rng.uniform(-25.0, 25.0)}}); break;
                default:
                    pipeline.push_back({"translate", {rng.uniform(0.0, 15.0), rng.uniform(0.0, 360.0)}});
                    break;
            }
        }
    }
    return make_candidate(b, std::move(id), std::move(pipeline), cfg);
}

}  // namespace

const std::vector<std::string>& constraint_registry() {
    static const std::vector<std::string> names{"size",      "granularity", "squareness",
                                                "convexity", "position",    "orientation"};
    return names;
}

ConstraintSet full_constraint_set() { return ConstraintSet(constraint_registry()); }

void ScenarioConfig::validate() const {
    if (scale_denominator <= 0) {
        throw invalid_argument("scale_denominator must be positive");
    }
    if (!(min_area_m2 > 0.0) || !(min_edge_m > 0.0) || !(position_tolerance_m > 0.0) ||
        !(orientation_tolerance_deg > 0.0)) {
        throw invalid_argument("scenario tolerances must be positive");
    }
    const auto& reg = constraint_registry();
    for (const auto& n : constraint_set.names()) {
        if (std::find(reg.begin(), reg.end(), n) == reg.end()) {
            throw invalid_argument("unknown constraint '" + n + "'");
        }
    }
}

BuildingObject generate_building(std::uint64_t seed) {
    for (std::uint64_t attempt = 0;; ++attempt) {
        Rng rng(mix_seed(seed, attempt));
        const double w = log_uniform(rng, 4.0, 38.0);
        const double h = log_uniform(rng, 4.0, 38.0);
        const bool notchable = w >= 5.5 && h >= 5.5;

        std::array<bool, 4> notched{};
        const std::size_t notches = notchable ? rng.below(4) : 0;
        for (std::size_t k = 0; k < notches;) {
            const std::size_t c = rng.below(4);
            if (!notched[c]) {
                notched[c] = true;
                ++k;
            }
        }

        // Corners counter-clockwise from the origin; a notch replaces a corner
        // with a three-vertex step cut into the rectangle.
        std::vector<Point> ring;
        for (std::size_t c = 0; c < 4; ++c) {
            const double sx = (c == 1 || c == 2) ? w : 0.0;
            const double sy = (c >= 2) ? h : 0.0;
            if (!notched[c]) {
                ring.push_back({sx, sy});
                continue;
            }
            const double nx = rng.uniform(2.0, 0.4 * w);
            const double ny = rng.uniform(2.0, 0.4 * h);
            const double ix = sx == 0.0 ? nx : w - nx;
            const double iy = sy == 0.0 ? ny : h - ny;
            switch (c) {
                case 0: ring.insert(ring.end(), {{0.0, iy}, {ix, iy}, {ix, 0.0}}); break;
                case 1: ring.insert(ring.end(), {{ix, 0.0}, {ix, iy}, {w, iy}}); break;
                case 2: ring.insert(ring.end(), {{w, iy}, {ix, iy}, {ix, h}}); break;
                default: ring.insert(ring.end(), {{ix, h}, {ix, iy}, {0.0, iy}}); break;
            }
        }

        // Jitter bounded by a fraction of the incident edges keeps corner
        // angles within about 5 degrees of square.
        const std::size_t n = ring.size();
        std::vector<Point> jittered(n);
        for (std::size_t i = 0; i < n; ++i) {
            const Point& prev = ring[(i + n - 1) % n];
            const Point& next = ring[(i + 1) % n];
            const double shortest = std::min(std::hypot(ring[i].x - prev.x, ring[i].y - prev.y),
                                             std::hypot(ring[i].x - next.x, ring[i].y - next.y));
            const double amp = std::min(0.5, 0.04 * shortest) / std::numbers::sqrt2;
            jittered[i] = {ring[i].x + rng.uniform(-amp, amp), ring[i].y + rng.uniform(-amp, amp)};
        }

        const double angle = rng.uniform(0.0, 180.0) * kDeg;
        const double ox = rng.uniform(0.0, 1000.0);
        const double oy = rng.uniform(0.0, 1000.0);
        for (auto& p : jittered) {
            p = {ox + std::cos(angle) * p.x - std::sin(angle) * p.y,
                 oy + std::sin(angle) * p.x + std::cos(angle) * p.y};
        }
        try {
            return BuildingObject{"b" + std::to_string(seed), Polygon(std::move(jittered))};
        } catch (const Error&) {
            if (attempt > 100) {
                throw;
            }
        }
    }
}

SatisfactionVector evaluate_constraints(const Polygon& initial, const Polygon& gen,
                                        const ScenarioConfig& cfg) {
    if (initial.size() < 3 || gen.size() < 3) {
        throw invalid_argument("degenerate geometry");
    }
    const double gen_area = area(gen);
    if (!(gen_area > 0.0) || !(area(initial) > 0.0)) {
        throw invalid_argument("degenerate geometry: zero area");
    }
    SatisfactionVector out;
    out.reserve(cfg.constraint_set.size());
    for (const auto& name : cfg.constraint_set.names()) {
        double v = 0.0;
        if (name == "size") {
            v = std::min(1.0, gen_area / cfg.min_area_m2);
        } else if (name == "granularity") {
            v = std::min(1.0, shortest_edge(gen) / cfg.min_edge_m);
        } else if (name == "squareness") {
            v = squareness(gen);
        } else if (name == "convexity") {
            const auto hull = convex_hull(gen.vertices());
            v = std::min(1.0, gen_area / std::abs(signed_area(hull)));
        } else if (name == "position") {
            const Point a = centroid(initial);
            const Point c = centroid(gen);
            v = std::max(0.0, 1.0 - std::hypot(c.x - a.x, c.y - a.y) / cfg.position_tolerance_m);
        } else if (name == "orientation") {
            const double gap = orientation_gap_deg(principal_orientation_deg(gen),
                                                   principal_orientation_deg(initial));
            v = std::max(0.0, 1.0 - gap / cfg.orientation_tolerance_deg);
        } else {
            throw invalid_argument("unknown constraint '" + name + "'");
        }
        out.push_back(std::clamp(v, 0.0, 1.0));
    }
    return out;
}

std::vector<Point> decimate(const std::vector<Point>& ring, double tolerance) {
    std::vector<Point> out = ring;
    while (out.size() > 4) {
        const std::size_t n = out.size();
        std::size_t best = n;
        double best_dev = tolerance;
        for (std::size_t i = 0; i < n; ++i) {
            const double dev = chord_deviation(out[(i + n - 1) % n], out[i], out[(i + 1) % n]);
            if (dev < best_dev) {
                best_dev = dev;
                best = i;
            }
        }
        if (best == n) {
            break;
        }
        out.erase(out.begin() + static_cast<std::ptrdiff_t>(best));
    }
    return out;
}

std::vector<Point> square_corners(const Polygon& poly, double max_deviation_deg) {
    const double theta = principal_orientation_deg(poly) * kDeg;
    const Point pivot = centroid(poly);
    const double c = std::cos(theta);
    const double s = std::sin(theta);

    std::vector<Point> local;
    local.reserve(poly.size());
    for (const auto& p : poly.vertices()) {
        const double x = p.x - pivot.x;
        const double y = p.y - pivot.y;
        local.push_back({c * x + s * y, -s * x + c * y});
    }

    const std::size_t n = local.size();
    Groups xs(n);
    Groups ys(n);
    std::vector<bool> x_snapped(n, false);
    std::vector<bool> y_snapped(n, false);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j = (i + 1) % n;
        double dir = std::atan2(local[j].y - local[i].y, local[j].x - local[i].x) / kDeg;
        dir = std::fmod(dir + 360.0, 180.0);
        const double off_horizontal = std::min(dir, 180.0 - dir);
        const double off_vertical = std::abs(dir - 90.0);
        if (off_horizontal <= max_deviation_deg) {
            ys.join(i, j);
            y_snapped[i] = y_snapped[j] = true;
        } else if (off_vertical <= max_deviation_deg) {
            xs.join(i, j);
            x_snapped[i] = x_snapped[j] = true;
        }
    }

    auto snap = [n](Groups& g, const std::vector<bool>& flagged, std::vector<Point>& pts,
                    double Point::*coord) {
        std::vector<double> sum(n, 0.0);
        std::vector<int> count(n, 0);
        for (std::size_t i = 0; i < n; ++i) {
            if (flagged[i]) {
                sum[g.find(i)] += pts[i].*coord;
                ++count[g.find(i)];
            }
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (flagged[i]) {
                pts[i].*coord = sum[g.find(i)] / count[g.find(i)];
            }
        }
    };
    snap(xs, x_snapped, local, &Point::x);
    snap(ys, y_snapped, local, &Point::y);

    std::vector<Point> out;
    out.reserve(n);
    for (const auto& p : local) {
        out.push_back({pivot.x + c * p.x - s * p.y, pivot.y + s * p.x + c * p.y});
    }
    return drop_redundant(std::move(out));
}

Polygon apply_transform(const Polygon& poly, const TransformStep& step, const ScenarioConfig& cfg) {
    auto param = [&](std::size_t i) {
        if (step.params.size() <= i) {
            throw invalid_argument("transform '" + step.name + "' is missing a parameter");
        }
        return step.params[i];
    };
    if (step.name == "identity") {
        return poly;
    }
    if (step.name == "simplify") {
        return Polygon(decimate(poly.vertices(), param(0)));
    }
    if (step.name == "square") {
        return Polygon(square_corners(poly, param(0)));
    }
    if (step.name == "enlarge") {
        const double a = area(poly);
        if (a >= cfg.min_area_m2) {
            return poly;
        }
        const double factor = std::min(param(0), std::sqrt(cfg.min_area_m2 / a));
        return scaled(poly, factor, centroid(poly));
    }
    if (step.name == "rotate") {
        return rotated(poly, param(0), centroid(poly));
    }
    if (step.name == "translate") {
        const double dist = param(0);
        const double dir = param(1) * kDeg;
        return translated(poly, dist * std::cos(dir), dist * std::sin(dir));
    }
    throw invalid_argument("unknown transform '" + step.name + "'");
}

GeneralisationCandidate make_candidate(const BuildingObject& b, std::string candidate_id,
                                       std::vector<TransformStep> pipeline,
                                       const ScenarioConfig& cfg) {
    Polygon geom = b.initial;
    for (const auto& step : pipeline) {
        geom = apply_transform(geom, step, cfg);
    }
    auto sat = evaluate_constraints(b.initial, geom, cfg);
    return GeneralisationCandidate{std::move(candidate_id), b.object_id, std::move(geom),
                                   std::move(sat), std::move(pipeline)};
}

std::vector<GeneralisationCandidate> generate_candidates(const BuildingObject& b,
                                                         const ScenarioConfig& cfg, int n,
                                                         std::uint64_t seed) {
    if (n < 2) {
        throw invalid_argument("need at least two candidates per object");
    }
    cfg.validate();
    std::vector<GeneralisationCandidate> out;
    const std::uint64_t max_attempts = 50 * static_cast<std::uint64_t>(n) + 100;
    for (std::uint64_t attempt = 0; static_cast<int>(out.size()) < n; ++attempt) {
        if (attempt >= max_attempts) {
            throw invalid_argument("could not generate " + std::to_string(n) +
                                   " distinct candidates for " + b.object_id);
        }
        Rng rng(mix_seed(seed, attempt));
        const std::string id = b.object_id + "-c" + std::to_string(out.size());
        try {
            auto cand = random_candidate(b, cfg, id, rng);
            const bool duplicate = std::any_of(out.begin(), out.end(), [&](const auto& o) {
                return o.geometry == cand.geometry;
            });
            if (!duplicate) {
                out.push_back(std::move(cand));
            }
        } catch (const Error&) {
            // Degenerate pipeline output; draw another.
        }
    }
    return out;
}

}  // namespace prefeval
