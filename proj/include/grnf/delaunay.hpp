#pragma once

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include "grnf/graph.hpp"

namespace grnf {

struct Point2 {
    double x = 0.0;
    double y = 0.0;
};

// Bowyer-Watson incremental Delaunay triangulation. Exact duplicate points are
// nudged apart by a deterministic 1e-9 jitter; near-degenerate incircle tests
// are epsilon-guarded, with cocircular ties resolved by insertion order.
// Returns index triples of the triangulation (empty for fully collinear
// inputs). Throws ValidationError for fewer than 3 points.
std::vector<std::array<int, 3>> delaunay_triangles(const std::vector<Point2>& points);

// Unique undirected edges (i < j, sorted) of the triangulation.
std::vector<std::pair<int, int>> delaunay_triangulation(const std::vector<Point2>& points);

// One class of planar-point graphs: each graph takes points_per_graph points
// by cycling through the class seed points, perturbs them with Gaussian noise
// clamped to the coordinate box, triangulates, and attaches the coordinates
// as 2-d node attributes.
struct DelaunayParams {
    int points_per_graph = 12;
    std::vector<Point2> seed_points;  // at least one
    double noise_sigma = 1.0;
    double box_min = 0.0;
    double box_max = 10.0;
};

// Graph i perturbs with a stream seeded by hash(seed, i).
std::vector<Graph> delaunay_generate(const DelaunayParams& params, int count, std::uint64_t seed);

// seeds-per-class points drawn uniformly in the box from hash(seed, class).
std::vector<Point2> random_seed_points(int count, double box_min, double box_max,
                                       std::uint64_t seed);

}  // namespace grnf
