#pragma once

// Exact small-instance solvers and empirical checkers for the claims behind
// the insertion method: optimal-route cutting (removing the point whose
// deletion leaves the shortest sub-route yields an optimal sub-route), the
// growth of length drops down the cutting chain, and exactness of the
// constructed tour. Claims are measured and reported; only the bound
// "nothing beats the optimum" is enforced.

#include "error.hpp"
#include "instance.hpp"
#include "rng.hpp"
#include "solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace maxmin_tsp {

enum class ExactMethod { Permutation, HeldKarp };

inline const char* to_string(ExactMethod m) { return m == ExactMethod::Permutation ? "permutation" : "held_karp"; }

struct ExactResult {
    double best_length = 0.0;
    std::vector<PointId> best_order;
    ExactMethod method = ExactMethod::Permutation;
    /// Tours evaluated (Permutation) or DP transitions relaxed (HeldKarp).
    std::uint64_t explored = 0;
};

inline constexpr std::size_t kBruteForceMaxN = 10;
inline constexpr std::size_t kHeldKarpMaxN = 18;

/// Enumerates the (n-1)!/2 distinct tours: point 0 fixed first, reflections
/// skipped by requiring order[1] < order[n-1]. First optimum found wins.
inline ExactResult brute_force(const Instance& inst, Objective objective = Objective::MinTour) {
    const auto n = inst.size();
    if (n < 3 || n > kBruteForceMaxN)
        throw OracleRangeError("brute_force supports 3 <= n <= " + std::to_string(kBruteForceMaxN) + ", got " +
                               std::to_string(n));
    const bool maximize = objective == Objective::MaxTour;
    std::vector<PointId> order(n);
    std::iota(order.begin(), order.end(), PointId{0});

    ExactResult best;
    best.method = ExactMethod::Permutation;
    bool have = false;
    do {
        if (order[1] > order[n - 1]) continue;
        const double len = cycle_length(inst, order);
        ++best.explored;
        if (!have || better(len, best.best_length, maximize)) {
            best.best_length = len;
            best.best_order = order;
            have = true;
        }
    } while (std::next_permutation(order.begin() + 1, order.end()));
    return best;
}

/// Bitmask dynamic program over subsets of points 1..n-1 with point 0 as the
/// fixed start. Needs (2^(n-1)) (n-1) cost cells plus as many parent bytes.
inline ExactResult held_karp(const Instance& inst, Objective objective = Objective::MinTour,
                             std::size_t max_bytes = std::size_t{1} << 30) {
    const auto n = inst.size();
    if (n < 3 || n > kHeldKarpMaxN)
        throw OracleRangeError("held_karp supports 3 <= n <= " + std::to_string(kHeldKarpMaxN) + ", got " +
                               std::to_string(n));
    const bool maximize = objective == Objective::MaxTour;
    const std::size_t m = n - 1;  // points 1..n-1 map to bits 0..m-1
    const std::size_t subsets = std::size_t{1} << m;
    const std::size_t cells = subsets * m;
    if (cells * (sizeof(double) + sizeof(std::uint8_t)) > max_bytes)
        throw OracleRangeError("held_karp table for n = " + std::to_string(n) + " exceeds the memory cap");

    const double unset = maximize ? -std::numeric_limits<double>::infinity() : std::numeric_limits<double>::infinity();
    std::vector<double> cost(cells, unset);
    std::vector<std::uint8_t> parent(cells, 0xFF);
    auto at = [m](std::size_t mask, std::size_t j) { return mask * m + j; };

    ExactResult res;
    res.method = ExactMethod::HeldKarp;
    for (std::size_t j = 0; j < m; ++j) cost[at(std::size_t{1} << j, j)] = inst.d(0, j + 1);

    for (std::size_t mask = 1; mask < subsets; ++mask) {
        for (std::size_t j = 0; j < m; ++j) {
            if (!(mask & (std::size_t{1} << j))) continue;
            const double here = cost[at(mask, j)];
            if (here == unset) continue;
            for (std::size_t k = 0; k < m; ++k) {
                if (mask & (std::size_t{1} << k)) continue;
                const auto next = mask | (std::size_t{1} << k);
                const double v = here + inst.d(j + 1, k + 1);
                ++res.explored;
                if (better(v, cost[at(next, k)], maximize)) {
                    cost[at(next, k)] = v;
                    parent[at(next, k)] = static_cast<std::uint8_t>(j);
                }
            }
        }
    }

    const std::size_t full = subsets - 1;
    std::size_t last = 0;
    double best = unset;
    for (std::size_t j = 0; j < m; ++j) {
        const double v = cost[at(full, j)] + inst.d(j + 1, 0);
        if (better(v, best, maximize)) {
            best = v;
            last = j;
        }
    }

    std::vector<PointId> rev;
    std::size_t mask = full;
    std::size_t j = last;
    while (true) {
        rev.push_back(j + 1);
        const auto p = parent[at(mask, j)];
        mask &= ~(std::size_t{1} << j);
        if (p == 0xFF) break;
        j = p;
    }
    res.best_order.push_back(0);
    res.best_order.insert(res.best_order.end(), rev.rbegin(), rev.rend());
    // Report the length of the reconstructed order itself.
    res.best_length = cycle_length(inst, res.best_order);
    return res;
}

struct CutResult {
    Tour tour;
    PointId removed = 0;
};

/// Removes the point whose deletion (reconnecting its neighbours) leaves the
/// shortest closed sub-route. Lengths within `tol` tie; the smallest point
/// id among them is removed.
inline CutResult cut_step(const Instance& inst, const Tour& tour, TieTolerance tol = {}) {
    const auto m = tour.size();
    if (m < 3) throw InvalidArgument("cut_step needs a tour of at least 3 points");
    const auto& order = tour.order();

    std::vector<double> after(m);
    for (std::size_t k = 0; k < m; ++k) {
        const auto prev = order[(k + m - 1) % m];
        const auto p = order[k];
        const auto next = order[(k + 1) % m];
        // From 3 points this gives 2 d(prev, next), the out-and-back length.
        after[k] = tour.length() - ((inst.d(prev, p) + inst.d(p, next)) - inst.d(prev, next));
    }
    const double shortest = *std::min_element(after.begin(), after.end());
    std::size_t pick = m;
    for (std::size_t k = 0; k < m; ++k)
        if (tol.ties(after[k], shortest) && (pick == m || order[k] < order[pick])) pick = k;

    std::vector<PointId> rest;
    rest.reserve(m - 1);
    for (std::size_t k = 0; k < m; ++k)
        if (k != pick) rest.push_back(order[k]);
    return {Tour::from_order(inst, std::move(rest)), order[pick]};
}

struct LemmaReport {
    std::string instance_id;
    std::size_t n = 0;
    bool lemma_holds = false;
    PointId removed_point = 0;
    double cut_length = 0.0;
    double true_subopt_length = 0.0;
    /// cut_length - true_subopt_length; never below -1e-9 relative.
    double gap = 0.0;
};

inline constexpr std::size_t kCheckerMinN = 4;
inline constexpr std::size_t kCheckerMaxN = 9;

namespace detail {

inline void require_checker_range(std::size_t n, const char* who) {
    if (n < kCheckerMinN || n > kCheckerMaxN)
        throw OracleRangeError(std::string(who) + " supports " + std::to_string(kCheckerMinN) + " <= n <= " +
                               std::to_string(kCheckerMaxN) + ", got " + std::to_string(n));
}

inline bool rel_equal(double a, double b, double rel = 1e-9) {
    return std::abs(a - b) <= rel * std::max({std::abs(a), std::abs(b), 1e-300});
}

}  // namespace detail

/// Cuts one point from an exact optimum and compares the resulting route
/// against an exact solve of the remaining n-1 points.
inline LemmaReport check_lemma(const Instance& inst) {
    const auto n = inst.size();
    detail::require_checker_range(n, "check_lemma");
    const auto opt = held_karp(inst);
    const auto cut = cut_step(inst, Tour::from_order(inst, opt.best_order));

    std::vector<PointId> keep;
    for (PointId p = 0; p < n; ++p)
        if (p != cut.removed) keep.push_back(p);
    const auto sub = held_karp(inst.subset(keep));

    LemmaReport r;
    r.instance_id = inst.name();
    r.n = n;
    r.removed_point = cut.removed;
    r.cut_length = cut.tour.length();
    r.true_subopt_length = sub.best_length;
    r.gap = r.cut_length - r.true_subopt_length;
    r.lemma_holds = detail::rel_equal(r.cut_length, r.true_subopt_length);
    return r;
}

struct MonotonicityReport {
    std::string instance_id;
    std::size_t n = 0;
    /// Route lengths from the optimum (n points) down to 2 points.
    std::vector<double> chain_lengths;
    /// |L(k+1) - L(k)| down the chain, first entry for the first cut.
    std::vector<double> disturbances;
    /// L(k+1) - L(k) signed; non-negative for Euclidean instances.
    std::vector<double> length_drops;
    /// Adjacent pairs where a later cut disturbed less than an earlier one.
    std::size_t violations = 0;
};

/// Cuts the exact optimum down to two points and counts where the
/// disturbance sequence fails to be non-decreasing (1e-9 relative slack).
inline MonotonicityReport check_monotonicity(const Instance& inst) {
    const auto n = inst.size();
    detail::require_checker_range(n, "check_monotonicity");
    MonotonicityReport r;
    r.instance_id = inst.name();
    r.n = n;

    auto tour = Tour::from_order(inst, held_karp(inst).best_order);
    r.chain_lengths.push_back(tour.length());
    while (tour.size() > 2) {
        tour = cut_step(inst, tour).tour;
        r.chain_lengths.push_back(tour.length());
    }
    for (std::size_t k = 0; k + 1 < r.chain_lengths.size(); ++k) {
        const double drop = r.chain_lengths[k] - r.chain_lengths[k + 1];
        r.length_drops.push_back(drop);
        r.disturbances.push_back(std::abs(drop));
    }
    for (std::size_t k = 0; k + 1 < r.disturbances.size(); ++k) {
        const double earlier = r.disturbances[k];
        const double later = r.disturbances[k + 1];
        if (earlier > later + 1e-9 * std::max({earlier, later, 1e-300})) ++r.violations;
    }
    return r;
}

/// Relative shortfall against the optimum: positive means worse.
inline double relative_gap(double length, double optimum, Objective objective) {
    const double diff = objective == Objective::MinTour ? length - optimum : optimum - length;
    return optimum != 0.0 ? diff / std::abs(optimum) : diff;
}

struct ModeOutcome {
    BranchMode mode = BranchMode::Pure;
    double length = 0.0;
    double gap = 0.0;
    bool matched = false;
    bool truncated = false;
    std::size_t leaves = 0;
    /// Full mode: best equals the extreme over its own leaves.
    bool best_is_leaf_extreme = true;
    std::vector<PointId> order;
};

struct HarnessRow {
    std::size_t id = 0;
    std::uint64_t seed = 0;
    std::size_t n = 0;
    double optimum = 0.0;
    std::vector<PointId> optimal_order;
    std::vector<ModeOutcome> outcomes;
};

struct ModeSummary {
    BranchMode mode = BranchMode::Pure;
    std::size_t runs = 0;
    std::size_t matches = 0;
    double mean_gap = 0.0;
    double max_gap = 0.0;
    /// Runs whose length beat the optimum by more than 1e-9 relative.
    std::size_t bound_violations = 0;
    std::size_t truncated = 0;

    double match_rate() const { return runs ? static_cast<double>(matches) / static_cast<double>(runs) : 0.0; }
};

struct HarnessConfig {
    std::size_t count = 100;
    std::size_t n_min = 5;
    std::size_t n_max = 9;
    Objective objective = Objective::MinTour;
    std::vector<BranchMode> modes{BranchMode::Pure, BranchMode::Full, BranchMode::Pruned};
    SelectionOrder selection = SelectionOrder::PointFirst;
    std::uint64_t seed = 42;
    /// Instance template; n and seed are overwritten per instance.
    GeneratorConfig generator{.n = 0, .grid_w = 20, .grid_h = 20};
    std::size_t branch_cap = 10000;
};

struct HarnessSummary {
    std::vector<HarnessRow> rows;
    std::vector<ModeSummary> per_mode;
};

/// Instance i uses seed derive_seed(cfg.seed, i) and n drawn uniformly from
/// [n_min, n_max] by the first output of an Rng on that seed.
inline Instance harness_instance(const HarnessConfig& cfg, std::size_t i, std::uint64_t* seed_out = nullptr) {
    const auto seed = derive_seed(cfg.seed, i);
    Rng pick(seed);
    auto g = cfg.generator;
    g.n = cfg.n_min + static_cast<std::size_t>(pick.uniform_below(cfg.n_max - cfg.n_min + 1));
    g.seed = seed;
    if (seed_out) *seed_out = seed;
    return generate(g);
}

/// Solves `count` random instances with each mode and compares against
/// Held-Karp. Deterministic in `cfg`.
inline HarnessSummary exactness_harness(const HarnessConfig& cfg) {
    if (cfg.n_min < 3 || cfg.n_max > kHeldKarpMaxN || cfg.n_min > cfg.n_max)
        throw OracleRangeError("exactness_harness needs 3 <= n_min <= n_max <= " + std::to_string(kHeldKarpMaxN));
    HarnessSummary out;
    for (auto mode : cfg.modes) out.per_mode.push_back({.mode = mode});

    for (std::size_t i = 0; i < cfg.count; ++i) {
        HarnessRow row;
        row.id = i;
        const auto inst = harness_instance(cfg, i, &row.seed);
        row.n = inst.size();
        const auto exact = held_karp(inst, cfg.objective);
        row.optimum = exact.best_length;
        row.optimal_order = exact.best_order;

        for (std::size_t m = 0; m < cfg.modes.size(); ++m) {
            SolverConfig sc;
            sc.objective = cfg.objective;
            sc.branching = cfg.modes[m];
            sc.selection = cfg.selection;
            sc.branch_cap = cfg.branch_cap;
            SolveResult res;
            try {
                res = solve(inst, sc);
            } catch (const BranchCapExceeded& e) {
                res = e.partial();
            }
            ModeOutcome o;
            o.mode = cfg.modes[m];
            o.length = res.best_tour.length();
            o.gap = relative_gap(o.length, row.optimum, cfg.objective);
            o.matched = detail::rel_equal(o.length, row.optimum);
            o.truncated = res.truncated;
            o.leaves = res.all_leaves.size();
            o.order = res.best_tour.order();
            const bool want_min = cfg.objective == Objective::MinTour;
            for (const auto& leaf : res.all_leaves)
                if (better(leaf.length(), o.length, !want_min)) o.best_is_leaf_extreme = false;

            auto& s = out.per_mode[m];
            ++s.runs;
            if (o.matched) ++s.matches;
            if (o.truncated) ++s.truncated;
            if (o.gap < -1e-9) ++s.bound_violations;
            s.mean_gap += o.gap;
            s.max_gap = std::max(s.max_gap, o.gap);
            row.outcomes.push_back(std::move(o));
        }
        out.rows.push_back(std::move(row));
    }
    for (auto& s : out.per_mode)
        if (s.runs) s.mean_gap /= static_cast<double>(s.runs);
    return out;
}

}  // namespace maxmin_tsp
