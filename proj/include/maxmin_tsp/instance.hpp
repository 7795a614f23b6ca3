#pragma once

#include "error.hpp"
#include "rng.hpp"

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

namespace maxmin_tsp {

using PointId = std::size_t;

struct Point {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point&, const Point&) = default;
};

inline double euclidean(const Point& a, const Point& b) {
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    return std::sqrt(dx * dx + dy * dy);
}

/// Ordered 2D point list; a point's id is its position.
class PointSet {
public:
    PointSet() = default;

    explicit PointSet(std::vector<Point> points) : points_(std::move(points)) {
        for (std::size_t i = 0; i < points_.size(); ++i) {
            if (!std::isfinite(points_[i].x) || !std::isfinite(points_[i].y))
                throw InstanceFormatError(InstanceFormatError::Kind::NonFinite,
                                          "coordinate of point " + std::to_string(i));
        }
    }

    std::size_t size() const noexcept { return points_.size(); }
    const Point& operator[](PointId i) const { return points_[i]; }
    const Point& at(PointId i) const {
        if (i >= points_.size()) throw IndexOutOfRange(i, points_.size());
        return points_[i];
    }
    std::span<const Point> points() const noexcept { return points_; }

private:
    std::vector<Point> points_;
};

/// Dense symmetric matrix with zero diagonal, stored row-major.
/// The triangle inequality is not required.
class DistanceMatrix {
public:
    DistanceMatrix() = default;

    /// Validates symmetry (exact), zero diagonal, finiteness and non-negativity.
    DistanceMatrix(std::size_t n, std::vector<double> values) : n_(n), d_(std::move(values)) {
        using Kind = InstanceFormatError::Kind;
        if (d_.size() != n_ * n_)
            throw InstanceFormatError(Kind::Malformed, "expected " + std::to_string(n_ * n_) + " entries, got " +
                                                           std::to_string(d_.size()));
        for (std::size_t i = 0; i < n_; ++i) {
            for (std::size_t j = 0; j < n_; ++j) {
                const double v = d_[i * n_ + j];
                const auto where = "d[" + std::to_string(i) + "][" + std::to_string(j) + "]";
                if (!std::isfinite(v)) throw InstanceFormatError(Kind::NonFinite, where);
                if (v < 0.0) throw InstanceFormatError(Kind::NegativeDistance, where + " = " + std::to_string(v));
                if (i == j && v != 0.0) throw InstanceFormatError(Kind::NonZeroDiagonal, where);
                if (j > i && v != d_[j * n_ + i])
                    throw InstanceFormatError(Kind::Asymmetric, where + " != d[" + std::to_string(j) + "][" +
                                                                    std::to_string(i) + "]");
            }
        }
    }

    static DistanceMatrix from_points(const PointSet& points) {
        DistanceMatrix m;
        m.n_ = points.size();
        m.d_.assign(m.n_ * m.n_, 0.0);
        for (std::size_t i = 0; i < m.n_; ++i) {
            for (std::size_t j = i + 1; j < m.n_; ++j) {
                const double v = euclidean(points[i], points[j]);
                m.d_[i * m.n_ + j] = v;
                m.d_[j * m.n_ + i] = v;
            }
        }
        return m;
    }

    std::size_t size() const noexcept { return n_; }
    double operator()(PointId i, PointId j) const noexcept { return d_[i * n_ + j]; }
    std::span<const double> row(PointId i) const noexcept { return {d_.data() + i * n_, n_}; }

private:
    std::size_t n_ = 0;
    std::vector<double> d_;
};

/// A TSP instance: either Euclidean points or an explicit matrix. Immutable.
/// Point-sourced instances precompute their matrix from the coordinates.
class Instance {
public:
    Instance() = default;

    Instance(PointSet points, std::string name = {})
        : name_(std::move(name)), points_(std::move(points)), matrix_(DistanceMatrix::from_points(*points_)) {}

    Instance(DistanceMatrix matrix, std::string name = {}) : name_(std::move(name)), matrix_(std::move(matrix)) {}

    std::size_t size() const noexcept { return matrix_.size(); }
    const std::string& name() const noexcept { return name_; }
    bool has_points() const noexcept { return points_.has_value(); }

    const PointSet& points() const {
        if (!points_) throw InvalidArgument("instance '" + name_ + "' has no coordinates");
        return *points_;
    }

    const DistanceMatrix& matrix() const noexcept { return matrix_; }

    /// Unchecked lookup for hot loops.
    double d(PointId i, PointId j) const noexcept { return matrix_(i, j); }

    double distance(PointId i, PointId j) const {
        if (i >= size()) throw IndexOutOfRange(i, size());
        if (j >= size()) throw IndexOutOfRange(j, size());
        return matrix_(i, j);
    }

    /// Sub-instance over `keep` (renumbered 0..keep.size()-1 in that order).
    Instance subset(std::span<const PointId> keep, std::string name = {}) const {
        for (auto id : keep)
            if (id >= size()) throw IndexOutOfRange(id, size());
        if (points_) {
            std::vector<Point> pts;
            pts.reserve(keep.size());
            for (auto id : keep) pts.push_back((*points_)[id]);
            return Instance(PointSet(std::move(pts)), std::move(name));
        }
        std::vector<double> values(keep.size() * keep.size());
        for (std::size_t a = 0; a < keep.size(); ++a)
            for (std::size_t b = 0; b < keep.size(); ++b) values[a * keep.size() + b] = matrix_(keep[a], keep[b]);
        return Instance(DistanceMatrix(keep.size(), std::move(values)), std::move(name));
    }

private:
    std::string name_;
    std::optional<PointSet> points_;
    DistanceMatrix matrix_;
};

inline double distance(const Instance& inst, PointId i, PointId j) { return inst.distance(i, j); }

/// Throws unless `order` is a permutation of 0..n-1.
inline void require_permutation(std::span<const PointId> order, std::size_t n) {
    if (order.size() != n)
        throw InvalidArgument("order has " + std::to_string(order.size()) + " entries, instance has " +
                              std::to_string(n));
    std::vector<char> seen(n, 0);
    for (auto id : order) {
        if (id >= n) throw IndexOutOfRange(id, n);
        if (seen[id]) throw InvalidArgument("order repeats point " + std::to_string(id));
        seen[id] = 1;
    }
}

/// Closed route length over a subset of points, wraparound included.
/// A two-point route is out-and-back, so its length is 2 d(r1, r2).
inline double cycle_length(const Instance& inst, std::span<const PointId> order) {
    if (order.size() < 2) return 0.0;
    double total = 0.0;
    for (std::size_t k = 0; k + 1 < order.size(); ++k) total += inst.d(order[k], order[k + 1]);
    return total + inst.d(order.back(), order.front());
}

/// Length of a full tour; `order` must be a permutation of all points, n >= 2.
inline double tour_length(const Instance& inst, std::span<const PointId> order) {
    if (inst.size() < 2) throw InvalidArgument("tour_length needs at least 2 points");
    require_permutation(order, inst.size());
    return cycle_length(inst, order);
}

struct GeneratorConfig {
    std::size_t n = 0;
    std::uint64_t grid_w = 1000;
    std::uint64_t grid_h = 1000;
    std::uint64_t seed = 0;
    bool allow_duplicates = false;
    /// Uniform reals in [0, grid_w) x [0, grid_h) instead of integer cells.
    bool continuous = false;
};

/// Random instance on a `grid_w` x `grid_h` integer grid (or the continuous
/// rectangle). Pure function of `cfg`.
inline Instance generate(const GeneratorConfig& cfg) {
    if (cfg.n < 2) throw InvalidArgument("generate: n must be at least 2");
    if (cfg.grid_w == 0 || cfg.grid_h == 0) throw InvalidArgument("generate: grid dimensions must be positive");
    const std::uint64_t cells = cfg.grid_w * cfg.grid_h;
    if (!cfg.continuous && !cfg.allow_duplicates && cfg.n > cells)
        throw InvalidArgument("generate: " + std::to_string(cfg.n) + " points do not fit in " +
                              std::to_string(cfg.grid_w) + "x" + std::to_string(cfg.grid_h) +
                              " distinct cells");

    Rng rng(cfg.seed);
    std::vector<Point> pts;
    pts.reserve(cfg.n);
    auto cell_point = [&](std::uint64_t cell) {
        return Point{static_cast<double>(cell % cfg.grid_w), static_cast<double>(cell / cfg.grid_w)};
    };

    if (cfg.continuous) {
        for (std::size_t i = 0; i < cfg.n; ++i) {
            const double x = rng.unit_real() * static_cast<double>(cfg.grid_w);
            const double y = rng.unit_real() * static_cast<double>(cfg.grid_h);
            pts.push_back({x, y});
        }
    } else if (cfg.allow_duplicates) {
        for (std::size_t i = 0; i < cfg.n; ++i) pts.push_back(cell_point(rng.uniform_below(cells)));
    } else if (2 * cfg.n <= cells) {
        std::unordered_set<std::uint64_t> used;
        used.reserve(2 * cfg.n);
        while (pts.size() < cfg.n) {
            const auto cell = rng.uniform_below(cells);
            if (used.insert(cell).second) pts.push_back(cell_point(cell));
        }
    } else {
        // Dense: partial Fisher-Yates over all cells (cells < 2n here).
        std::vector<std::uint64_t> all(cells);
        for (std::uint64_t c = 0; c < cells; ++c) all[c] = c;
        for (std::size_t i = 0; i < cfg.n; ++i) {
            const auto j = i + rng.uniform_below(cells - i);
            std::swap(all[i], all[j]);
            pts.push_back(cell_point(all[i]));
        }
    }

    std::string name = (cfg.continuous ? "uniform" : "grid") + std::to_string(cfg.grid_w) + "x" +
                       std::to_string(cfg.grid_h) + "_n" + std::to_string(cfg.n) + "_s" + std::to_string(cfg.seed);
    return Instance(PointSet(std::move(pts)), std::move(name));
}

}  // namespace maxmin_tsp
