#pragma once

// Test-only reference implementations. Each one recomputes a quantity by a
// route that shares no code with the library path it checks.

#include "maxmin_tsp/maxmin_tsp.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <random>
#include <tuple>
#include <vector>

namespace support {

using namespace maxmin_tsp;

inline Instance unit_square() { return Instance(PointSet({{0, 0}, {1, 0}, {1, 1}, {0, 1}}), "unit_square"); }

inline Instance random_points(std::size_t n, std::uint64_t seed, double scale = 100.0) {
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> u(0.0, scale);
    std::vector<Point> pts(n);
    for (auto& p : pts) p = {u(gen), u(gen)};
    return Instance(PointSet(std::move(pts)), "random" + std::to_string(seed));
}

inline std::vector<PointId> random_permutation(std::size_t n, std::uint64_t seed) {
    std::vector<PointId> order(n);
    std::iota(order.begin(), order.end(), PointId{0});
    std::mt19937_64 gen(seed);
    std::shuffle(order.begin(), order.end(), gen);
    return order;
}

inline bool rel_close(double a, double b, double rel) {
    return std::abs(a - b) <= rel * std::max({std::abs(a), std::abs(b), 1e-300});
}

/// Tour length straight from coordinates: pairs (order[k], order[k+1 mod m])
/// built by rotating a copy, summed with transform_reduce.
inline double length_from_coordinates(const PointSet& pts, const std::vector<PointId>& order) {
    if (order.size() == 2) return 2.0 * std::hypot(pts[order[0]].x - pts[order[1]].x, pts[order[0]].y - pts[order[1]].y);
    auto next = order;
    std::rotate(next.begin(), next.begin() + 1, next.end());
    return std::transform_reduce(order.begin(), order.end(), next.begin(), 0.0L, std::plus<>(),
                                 [&](PointId a, PointId b) {
                                     return static_cast<long double>(std::hypot(pts[a].x - pts[b].x, pts[a].y - pts[b].y));
                                 });
}

/// Every (edge, point) with its delta, from an explicit edge list.
struct FlatCandidate {
    std::size_t edge;
    PointId point;
    double delta;
};

inline std::vector<FlatCandidate> all_insertions(const Instance& inst, const std::vector<PointId>& order,
                                                 const std::vector<PointId>& outside) {
    std::vector<std::pair<PointId, PointId>> edges;
    if (order.size() == 2) {
        edges.push_back({order[0], order[1]});
    } else {
        for (std::size_t k = 0; k < order.size(); ++k) edges.push_back({order[k], order[(k + 1) % order.size()]});
    }
    std::vector<FlatCandidate> out;
    for (std::size_t e = 0; e < edges.size(); ++e)
        for (auto p : outside) {
            const auto [a, b] = edges[e];
            out.push_back({e, p, inst.matrix()(a, p) + inst.matrix()(p, b) - inst.matrix()(a, b)});
        }
    return out;
}

/// Brute-force nested extreme over the flat list. `group_by_point` selects
/// the point-first order. Returns (outer value, sorted winners).
inline std::pair<double, std::vector<std::pair<std::size_t, PointId>>> nested_extreme(
    const std::vector<FlatCandidate>& flat, bool group_by_point, bool inner_max, TieTolerance tol) {
    auto key = [&](const FlatCandidate& c) { return group_by_point ? c.point : c.edge; };
    std::vector<std::size_t> groups;
    for (const auto& c : flat)
        if (std::find(groups.begin(), groups.end(), key(c)) == groups.end()) groups.push_back(key(c));

    std::vector<double> inner;
    for (auto g : groups) {
        double v = inner_max ? -std::numeric_limits<double>::infinity() : std::numeric_limits<double>::infinity();
        for (const auto& c : flat)
            if (key(c) == g) v = inner_max ? std::max(v, c.delta) : std::min(v, c.delta);
        inner.push_back(v);
    }
    const double outer = inner_max ? *std::min_element(inner.begin(), inner.end())
                                   : *std::max_element(inner.begin(), inner.end());
    std::vector<std::pair<std::size_t, PointId>> winners;
    for (std::size_t gi = 0; gi < groups.size(); ++gi) {
        if (!tol.ties(inner[gi], outer)) continue;
        for (const auto& c : flat)
            if (key(c) == groups[gi] && tol.ties(c.delta, inner[gi])) winners.emplace_back(c.edge, c.point);
    }
    std::sort(winners.begin(), winners.end());
    return {outer, winners};
}

/// Segment crossing via the parametric form p + t r = q + u s, solved in
/// long double; collinear overlap measured by projection onto r.
inline bool parametric_intersect(Point p1, Point p2, Point q1, Point q2) {
    using LD = long double;
    const LD rx = LD(p2.x) - p1.x, ry = LD(p2.y) - p1.y;
    const LD sx = LD(q2.x) - q1.x, sy = LD(q2.y) - q1.y;
    const LD qpx = LD(q1.x) - p1.x, qpy = LD(q1.y) - p1.y;
    const LD denom = rx * sy - ry * sx;
    const LD qp_cross_r = qpx * ry - qpy * rx;
    if (denom == 0) {
        if (qp_cross_r != 0) return false;  // parallel, distinct lines
        const LD rr = rx * rx + ry * ry;
        const LD ss = sx * sx + sy * sy;
        if (rr == 0 || ss == 0) return false;  // a degenerate segment has no positive-length overlap
        const LD t0 = (qpx * rx + qpy * ry) / rr;
        const LD t1 = ((LD(q2.x) - p1.x) * rx + (LD(q2.y) - p1.y) * ry) / rr;
        const LD lo = std::max<LD>(0, std::min(t0, t1));
        const LD hi = std::min<LD>(1, std::max(t0, t1));
        return lo < hi;
    }
    const LD t = (qpx * sy - qpy * sx) / denom;
    const LD u = qp_cross_r / denom;
    return t > 0 && t < 1 && u > 0 && u < 1;
}

inline std::vector<std::pair<std::size_t, std::size_t>> crossings_by_parametric(const Instance& inst,
                                                                                 const std::vector<PointId>& order) {
    const auto& pts = inst.points();
    const auto m = order.size();
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = a + 1; b < m; ++b) {
            const bool adjacent = b == a + 1 || (a == 0 && b == m - 1);
            if (adjacent) continue;
            if (parametric_intersect(pts[order[a]], pts[order[(a + 1) % m]], pts[order[b]], pts[order[(b + 1) % m]]))
                out.emplace_back(a, b);
        }
    return out;
}

}  // namespace support
