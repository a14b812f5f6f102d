#include "grnf/delaunay.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "grnf/errors.hpp"
#include "grnf/rng.hpp"

namespace grnf {

namespace {

// Twice the signed area of (a, b, c); positive when counter-clockwise.
double orient2d(const Point2& a, const Point2& b, const Point2& c) {
    return (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
}

// Sign of the cross product d x (r - a) with a relative tie guard: 0 when
// the value is within rounding of zero.
int side_sign(double dx, double dy, const Point2& a, const Point2& r) {
    const double t1 = dx * (r.y - a.y);
    const double t2 = dy * (r.x - a.x);
    const double det = t1 - t2;
    if (std::fabs(det) <= 1e-14 * (std::fabs(t1) + std::fabs(t2))) return 0;
    return det > 0.0 ? 1 : -1;
}

// Which side of the directed line a -> b does r fall on?
int orient_sign(const Point2& a, const Point2& b, const Point2& r) {
    return side_sign(b.x - a.x, b.y - a.y, a, r);
}

// True when p lies strictly inside the circumcircle of the CCW triangle
// (a, b, c). The guard is relative to the determinant's term magnitudes;
// near-cocircular configurations count as outside, so ties fall to
// insertion order deterministically.
bool in_circumcircle(const Point2& a, const Point2& b, const Point2& c, const Point2& p) {
    const double ax = a.x - p.x, ay = a.y - p.y;
    const double bx = b.x - p.x, by = b.y - p.y;
    const double cx = c.x - p.x, cy = c.y - p.y;
    const double a2 = ax * ax + ay * ay;
    const double b2 = bx * bx + by * by;
    const double c2 = cx * cx + cy * cy;
    const double det =
        ax * (by * c2 - b2 * cy) - ay * (bx * c2 - b2 * cx) + a2 * (bx * cy - by * cx);
    const double mag = std::fabs(ax) * (std::fabs(by * c2) + std::fabs(b2 * cy)) +
                       std::fabs(ay) * (std::fabs(bx * c2) + std::fabs(b2 * cx)) +
                       a2 * (std::fabs(bx * cy) + std::fabs(by * cx));
    return det > 1e-12 * mag;
}

struct Triangle {
    int a, b, c;  // CCW
};

// Should inserting p carve this triangle out of the mesh? Triangles touching
// the synthetic bounding vertices (indices >= first_super) stand for the
// unbounded region beyond a hull edge, so they are tested with orientation
// rules -- the limit of their circumcircle as the synthetic vertices recede
// to infinity -- never with the literal finite circle. A finite bounding
// triangle tested literally falls inside the circumcircle of sufficiently
// flat hull triangles, which then silently drop out of the result no matter
// how far away the bounding vertices are placed.
bool conflicts(const Triangle& t, const std::vector<Point2>& pts, int first_super, int p) {
    int real[3], super[3];
    int nr = 0, ns = 0;
    for (int v : {t.a, t.b, t.c}) {
        (v < first_super ? real[nr++] : super[ns++]) = v;
    }
    const Point2& q = pts[static_cast<std::size_t>(p)];
    if (ns == 0) {
        return in_circumcircle(pts[static_cast<std::size_t>(t.a)],
                               pts[static_cast<std::size_t>(t.b)],
                               pts[static_cast<std::size_t>(t.c)], q);
    }
    if (ns == 1) {
        // Limit circle through one infinite point: the open half-plane
        // beyond the real edge, on the synthetic vertex's side.
        const Point2& u = pts[static_cast<std::size_t>(real[0])];
        const Point2& v = pts[static_cast<std::size_t>(real[1])];
        const int side = orient_sign(u, v, q);
        return side != 0 && side == orient_sign(u, v, pts[static_cast<std::size_t>(super[0])]);
    }
    if (ns == 2) {
        // Limit circle through two infinite points: the open half-plane
        // beyond the line through the real vertex parallel to them.
        const Point2& a = pts[static_cast<std::size_t>(real[0])];
        const Point2& s1 = pts[static_cast<std::size_t>(super[0])];
        const Point2& s2 = pts[static_cast<std::size_t>(super[1])];
        const double dx = s2.x - s1.x, dy = s2.y - s1.y;
        const int side = side_sign(dx, dy, a, q);
        return side != 0 && side == side_sign(dx, dy, a, s1);
    }
    return true;  // the initial bounding triangle covers everything
}

}  // namespace

std::vector<std::array<int, 3>> delaunay_triangles(const std::vector<Point2>& points) {
    const int n = static_cast<int>(points.size());
    if (n < 3) throw ValidationError("delaunay: at least 3 points are required");

    // Work on a jittered copy: exact duplicates get deterministic sub-1e-8
    // offsets so every input index survives as a distinct vertex.
    std::vector<Point2> pts = points;
    {
        std::map<std::pair<double, double>, int> occurrences;
        for (auto& p : pts) {
            const int k = occurrences[{p.x, p.y}]++;
            if (k > 0) {
                p.x += 1e-9 * static_cast<double>(k);
                p.y += 1.3e-9 * static_cast<double>(k);
            }
        }
    }

    // Super-triangle vertices far outside the data's bounding box; indices
    // n..n+2. All real points are strictly inside it.
    double min_x = pts[0].x, max_x = pts[0].x, min_y = pts[0].y, max_y = pts[0].y;
    for (const auto& p : pts) {
        min_x = std::min(min_x, p.x);
        max_x = std::max(max_x, p.x);
        min_y = std::min(min_y, p.y);
        max_y = std::max(max_y, p.y);
    }
    const double span = std::max({max_x - min_x, max_y - min_y, 1.0});
    const double cx = 0.5 * (min_x + max_x);
    const double cy = 0.5 * (min_y + max_y);
    pts.push_back({cx - 64.0 * span, cy - 32.0 * span});
    pts.push_back({cx + 64.0 * span, cy - 32.0 * span});
    pts.push_back({cx, cy + 64.0 * span});

    std::vector<Triangle> triangles;
    triangles.push_back({n, n + 1, n + 2});

    for (int p = 0; p < n; ++p) {
        // Cavity: triangles whose circumcircle contains the new point.
        std::vector<Triangle> keep;
        std::map<std::pair<int, int>, int> boundary_count;
        keep.reserve(triangles.size() + 2);
        auto add_edge = [&](int u, int v) { ++boundary_count[{std::min(u, v), std::max(u, v)}]; };
        std::vector<std::array<int, 3>> cavity;
        for (const auto& t : triangles) {
            if (conflicts(t, pts, n, p)) {
                add_edge(t.a, t.b);
                add_edge(t.b, t.c);
                add_edge(t.c, t.a);
                cavity.push_back({t.a, t.b, t.c});
            } else {
                keep.push_back(t);
            }
        }
        triangles = std::move(keep);
        // Re-triangulate the cavity boundary (edges seen exactly once) as a
        // fan from the new point, restoring CCW orientation per triangle.
        for (const auto& tri : cavity) {
            const int vs[3][2] = {{tri[0], tri[1]}, {tri[1], tri[2]}, {tri[2], tri[0]}};
            for (const auto& e : vs) {
                if (boundary_count[{std::min(e[0], e[1]), std::max(e[0], e[1])}] != 1) continue;
                Triangle t{e[0], e[1], p};
                if (orient2d(pts[static_cast<std::size_t>(t.a)], pts[static_cast<std::size_t>(t.b)],
                             pts[static_cast<std::size_t>(t.c)]) < 0.0) {
                    std::swap(t.a, t.b);
                }
                triangles.push_back(t);
            }
        }
    }

    std::vector<std::array<int, 3>> out;
    for (const auto& t : triangles) {
        if (t.a >= n || t.b >= n || t.c >= n) continue;  // touches the super-triangle
        std::array<int, 3> tri{t.a, t.b, t.c};
        std::sort(tri.begin(), tri.end());
        out.push_back(tri);
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::pair<int, int>> delaunay_triangulation(const std::vector<Point2>& points) {
    std::set<std::pair<int, int>> edges;
    for (const auto& t : delaunay_triangles(points)) {
        edges.insert({t[0], t[1]});
        edges.insert({t[1], t[2]});
        edges.insert({t[0], t[2]});
    }
    return {edges.begin(), edges.end()};
}

std::vector<Graph> delaunay_generate(const DelaunayParams& params, int count, std::uint64_t seed) {
    if (params.points_per_graph < 3) {
        throw ValidationError("delaunay: points_per_graph must be at least 3");
    }
    if (params.seed_points.empty()) {
        throw ValidationError("delaunay: at least one seed point is required");
    }
    if (params.noise_sigma < 0.0) throw ValidationError("delaunay: noise_sigma must be >= 0");
    if (!(params.box_min < params.box_max)) {
        throw ValidationError("delaunay: coordinate box is empty");
    }
    for (const auto& p : params.seed_points) {
        if (p.x < params.box_min || p.x > params.box_max || p.y < params.box_min ||
            p.y > params.box_max) {
            throw ValidationError("delaunay: seed point outside the coordinate box");
        }
    }
    if (count < 0) throw ValidationError("delaunay: count must be non-negative");

    std::vector<Graph> graphs;
    graphs.reserve(static_cast<std::size_t>(count));
    for (int index = 0; index < count; ++index) {
        RandomStream rng(derive_seed(seed, static_cast<std::uint64_t>(index)));
        std::vector<Point2> pts(static_cast<std::size_t>(params.points_per_graph));
        for (std::size_t i = 0; i < pts.size(); ++i) {
            const Point2& base = params.seed_points[i % params.seed_points.size()];
            pts[i].x = std::clamp(base.x + rng.normal(0.0, params.noise_sigma), params.box_min,
                                  params.box_max);
            pts[i].y = std::clamp(base.y + rng.normal(0.0, params.noise_sigma), params.box_min,
                                  params.box_max);
        }
        Graph g;
        g.n = params.points_per_graph;
        g.node_attr_dim = 2;
        g.node_attrs.reserve(pts.size() * 2);
        for (const auto& p : pts) {
            g.node_attrs.push_back(p.x);
            g.node_attrs.push_back(p.y);
        }
        g.edges = delaunay_triangulation(pts);
        graphs.push_back(std::move(g));
    }
    return graphs;
}

std::vector<Point2> random_seed_points(int count, double box_min, double box_max,
                                       std::uint64_t seed) {
    if (count < 1) throw ValidationError("delaunay: seed point count must be positive");
    if (!(box_min < box_max)) throw ValidationError("delaunay: coordinate box is empty");
    RandomStream rng(seed);
    std::vector<Point2> out(static_cast<std::size_t>(count));
    for (auto& p : out) {
        p.x = box_min + (box_max - box_min) * rng.uniform01();
        p.y = box_min + (box_max - box_min) * rng.uniform01();
    }
    return out;
}

}  // namespace grnf
