#pragma once

#include "error.hpp"
#include "instance.hpp"
#include "rng.hpp"
#include "solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <vector>

namespace maxmin_tsp {

/// Sign of the turn a -> b -> c (+1 counter-clockwise, -1 clockwise, 0 collinear).
/// Exact for integer coordinates below 2^25 in magnitude.
inline int orientation(const Point& a, const Point& b, const Point& c) noexcept {
    const double v = (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
    return (v > 0.0) - (v < 0.0);
}

namespace detail {

inline bool lex_less(const Point& a, const Point& b) noexcept { return a.x < b.x || (a.x == b.x && a.y < b.y); }

}  // namespace detail

/// True when the closed segments p1p2 and p3p4 cross at a single interior
/// point of both, or lie on one line and share a stretch of positive length.
/// Touching at an endpoint is not an intersection.
inline bool segments_intersect(const Point& p1, const Point& p2, const Point& p3, const Point& p4) noexcept {
    const int o1 = orientation(p1, p2, p3);
    const int o2 = orientation(p1, p2, p4);
    const int o3 = orientation(p3, p4, p1);
    const int o4 = orientation(p3, p4, p2);
    if (o1 * o2 < 0 && o3 * o4 < 0) return true;
    if (o1 != 0 || o2 != 0 || o3 != 0 || o4 != 0) return false;

    // Collinear: compare along the line via lexicographic point order.
    auto lo1 = p1, hi1 = p2, lo2 = p3, hi2 = p4;
    if (detail::lex_less(hi1, lo1)) std::swap(lo1, hi1);
    if (detail::lex_less(hi2, lo2)) std::swap(lo2, hi2);
    const auto& lo = detail::lex_less(lo1, lo2) ? lo2 : lo1;
    const auto& hi = detail::lex_less(hi1, hi2) ? hi1 : hi2;
    return detail::lex_less(lo, hi);
}

struct CrossingReport {
    /// (edge_pos_a, edge_pos_b), a < b, ascending.
    std::vector<std::pair<std::size_t, std::size_t>> crossing_pairs;
    std::size_t count = 0;
    bool has_loops = false;
};

/// All intersecting pairs of non-adjacent edges of the closed route `order`
/// (edge k joins order[k] and order[k+1], wrapping). Needs coordinates.
inline CrossingReport detect_crossings(const Instance& inst, std::span<const PointId> order) {
    const auto& pts = inst.points();
    for (auto id : order)
        if (id >= pts.size()) throw IndexOutOfRange(id, pts.size());
    CrossingReport r;
    const auto m = order.size();
    if (m >= 4) {
        for (std::size_t i = 0; i < m; ++i) {
            const auto& a = pts[order[i]];
            const auto& b = pts[order[(i + 1) % m]];
            for (std::size_t j = i + 2; j < m; ++j) {
                if (i == 0 && j == m - 1) continue;
                if (segments_intersect(a, b, pts[order[j]], pts[order[(j + 1) % m]])) r.crossing_pairs.emplace_back(i, j);
            }
        }
    }
    r.count = r.crossing_pairs.size();
    r.has_loops = r.count > 0;
    return r;
}

inline CrossingReport detect_crossings(const Instance& inst, const Tour& tour) {
    return detect_crossings(inst, std::span<const PointId>(tour.order()));
}

/// Least-squares slope of log(y) against log(x). Needs >= 3 positive pairs.
inline double fit_power_law(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size()) throw InvalidArgument("fit_power_law: size mismatch");
    if (xs.size() < 3) throw InvalidArgument("fit_power_law needs at least 3 points");
    const auto k = static_cast<double>(xs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (!(xs[i] > 0.0) || !(ys[i] > 0.0)) throw InvalidArgument("fit_power_law needs positive values");
        const double lx = std::log(xs[i]);
        const double ly = std::log(ys[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    const double denom = k * sxx - sx * sx;
    if (denom == 0.0) throw InvalidArgument("fit_power_law needs at least two distinct sizes");
    return (k * sxy - sx * sy) / denom;
}

/// The sum_{k} k (n - k) estimate of insertion work, k = 1..n-1.
constexpr std::uint64_t theoretical_delta_evals(std::uint64_t n) noexcept { return n < 2 ? 0 : (n * n * n - n) / 6; }

struct ScalingRow {
    std::size_t n = 0;
    /// Mean over repetitions (exact when every run agrees, as in Pure mode).
    std::uint64_t delta_evals = 0;
    std::uint64_t theoretical = 0;
    double wall_ms = 0.0;
    double tour_length = 0.0;
    double crossings = 0.0;
};

struct ScalingReport {
    std::vector<ScalingRow> rows;
    double fitted_exponent_ops = 0.0;
    double fitted_exponent_time = 0.0;
};

/// Fits both exponents over already-measured rows (sorted by n on return).
/// Zero timings are clamped to 1e-6 ms so the time fit stays defined.
inline ScalingReport fit_scaling(std::vector<ScalingRow> rows) {
    if (rows.size() < 3) throw InvalidArgument("scaling fit needs at least 3 sizes");
    std::sort(rows.begin(), rows.end(), [](const ScalingRow& a, const ScalingRow& b) { return a.n < b.n; });
    std::vector<double> ns, ops, ms;
    for (const auto& r : rows) {
        ns.push_back(static_cast<double>(r.n));
        ops.push_back(static_cast<double>(r.delta_evals));
        ms.push_back(std::max(r.wall_ms, 1e-6));
    }
    ScalingReport rep;
    rep.fitted_exponent_time = fit_power_law(ns, ms);
    rep.fitted_exponent_ops =
        std::all_of(ops.begin(), ops.end(), [](double v) { return v > 0.0; }) ? fit_power_law(ns, ops) : 0.0;
    rep.rows = std::move(rows);
    return rep;
}

struct ExperimentConfig {
    std::vector<std::size_t> sizes;
    std::size_t reps = 1;
    std::uint64_t seed = 1;
    /// n and seed are overwritten per run.
    GeneratorConfig generator;
    SolverConfig solver;
};

/// Seed of repetition `rep` at size `n`: keyed by size so that adding sizes
/// leaves existing runs unchanged.
inline std::uint64_t experiment_seed(std::uint64_t master, std::size_t n, std::size_t rep) {
    return derive_seed(derive_seed(master, n), rep);
}

struct ExperimentRun {
    std::size_t n = 0;
    std::size_t rep = 0;
    std::uint64_t seed = 0;
    double wall_ms = 0.0;
    SolveResult result;
    CrossingReport crossings;
};

/// Runs every (size, rep) in ascending size order and reports each run.
/// Full-mode truncation is not an error here: the partial result is used.
inline void run_experiment(const ExperimentConfig& cfg, const std::function<void(const Instance&, const ExperimentRun&)>& sink) {
    auto sizes = cfg.sizes;
    std::sort(sizes.begin(), sizes.end());
    for (auto n : sizes) {
        for (std::size_t rep = 0; rep < cfg.reps; ++rep) {
            auto g = cfg.generator;
            g.n = n;
            g.seed = experiment_seed(cfg.seed, n, rep);
            const auto inst = generate(g);
            ExperimentRun run{.n = n, .rep = rep, .seed = g.seed};
            const auto t0 = std::chrono::steady_clock::now();
            try {
                run.result = solve(inst, cfg.solver);
            } catch (const BranchCapExceeded& e) {
                run.result = e.partial();
            }
            run.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
            run.crossings = detect_crossings(inst, run.result.best_tour);
            sink(inst, run);
        }
    }
}

/// Per-run numbers kept after the tour itself is discarded.
struct RunRecord {
    std::size_t n = 0;
    std::size_t rep = 0;
    std::uint64_t seed = 0;
    double wall_ms = 0.0;
    std::uint64_t delta_evals = 0;
    double length = 0.0;
    std::size_t crossings = 0;
};

inline std::vector<RunRecord> collect_runs(
    const ExperimentConfig& cfg, const std::function<void(const Instance&, const ExperimentRun&)>& observer = {}) {
    if (cfg.reps < 1) throw InvalidArgument("experiments need at least 1 repetition");
    std::vector<RunRecord> out;
    run_experiment(cfg, [&](const Instance& inst, const ExperimentRun& run) {
        out.push_back({run.n, run.rep, run.seed, run.wall_ms, run.result.delta_evals, run.result.best_tour.length(),
                       run.crossings.count});
        if (observer) observer(inst, run);
    });
    return out;
}

/// Means per size (records must be grouped by ascending n), then the fit.
inline ScalingReport scaling_from_runs(std::span<const RunRecord> runs) {
    std::vector<ScalingRow> rows;
    std::vector<std::size_t> counts;
    for (const auto& r : runs) {
        if (rows.empty() || rows.back().n != r.n) {
            rows.push_back({.n = r.n, .theoretical = theoretical_delta_evals(r.n)});
            counts.push_back(0);
        }
        auto& row = rows.back();
        ++counts.back();
        row.delta_evals += r.delta_evals;
        row.wall_ms += r.wall_ms;
        row.tour_length += r.length;
        row.crossings += static_cast<double>(r.crossings);
    }
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto c = static_cast<double>(counts[i]);
        rows[i].delta_evals /= counts[i];
        rows[i].wall_ms /= c;
        rows[i].tour_length /= c;
        rows[i].crossings /= c;
    }
    return fit_scaling(std::move(rows));
}

/// Times and counts insertion work per size, then fits both exponents.
inline ScalingReport scaling_fit(const ExperimentConfig& cfg) {
    if (cfg.sizes.size() < 3) throw InvalidArgument("scaling_fit needs at least 3 sizes");
    return scaling_from_runs(collect_runs(cfg));
}

struct LoopRateRow {
    std::size_t n = 0;
    std::size_t runs = 0;
    std::size_t runs_with_loops = 0;
    double fraction = 0.0;
    double mean_crossings = 0.0;
    std::vector<std::uint64_t> seeds;
    std::vector<std::size_t> crossings;
};

inline std::vector<LoopRateRow> loop_rates_from_runs(std::span<const RunRecord> runs) {
    std::vector<LoopRateRow> rows;
    for (const auto& r : runs) {
        if (rows.empty() || rows.back().n != r.n) rows.push_back({.n = r.n});
        auto& row = rows.back();
        ++row.runs;
        if (r.crossings > 0) ++row.runs_with_loops;
        row.seeds.push_back(r.seed);
        row.crossings.push_back(r.crossings);
    }
    for (auto& row : rows) {
        row.fraction = static_cast<double>(row.runs_with_loops) / static_cast<double>(row.runs);
        double total = 0.0;
        for (auto c : row.crossings) total += static_cast<double>(c);
        row.mean_crossings = total / static_cast<double>(row.runs);
    }
    return rows;
}

/// Fraction of fresh instances per size whose solved tour self-intersects.
inline std::vector<LoopRateRow> loop_rate_experiment(
    const ExperimentConfig& cfg, const std::function<void(const Instance&, const ExperimentRun&)>& observer = {}) {
    return loop_rates_from_runs(collect_runs(cfg, observer));
}

}  // namespace maxmin_tsp
