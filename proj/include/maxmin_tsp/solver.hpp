#pragma once

// Recurrent insertion construction.
//
//   1. start from the extreme pair (farthest for MinTour, closest for MaxTour)
//   2. append the third point with the extreme triangle perimeter
//   3. repeatedly splice one outside point p into one tour edge (a, b),
//      choosing by the insertion disturbance
//        delta(a, b, p) = d(a, p) + d(p, b) - d(a, b)
//      through a nested extreme: the inner extreme is cheapest (MinTour) or
//      dearest (MaxTour), the outer one the opposite.
//
// SelectionOrder fixes what the inner extreme runs over:
//   PointFirst  for each outside point, the extreme over edges; then the
//               outer extreme across points (farthest-insertion order)
//   EdgeFirst   for each edge, the extreme over outside points; then the
//               outer extreme across edges
// Both evaluate every (edge, point) pair once per step.
//
// Candidates whose selection values agree within tolerance form a tie set.
// Pure follows one path (lexicographically smallest candidate), Full
// expands every tie breadth-first, Pruned keeps only the branches whose
// intermediate length is extremal at each depth (longest for MinTour,
// shortest for MaxTour).
//
// Delta-evaluation count: the pair scan evaluates distances only; the third
// point costs n-2 evaluations (one edge); a tour of k >= 3 points costs
// k (n - k). A complete Pure run therefore performs
//   K(n) = (n - 2) + sum_{k=3}^{n-1} k (n - k) = (n^3 - n) / 6 - (2n - 3)
// evaluations for n >= 2; see closed_form_delta_evals.

#include "error.hpp"
#include "instance.hpp"

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstdint>
#include <set>
#include <span>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#if !defined(MAXMIN_TSP_CHECK_TOURS)
#if defined(NDEBUG)
#define MAXMIN_TSP_CHECK_TOURS 0
#else
#define MAXMIN_TSP_CHECK_TOURS 1
#endif
#endif

namespace maxmin_tsp {

enum class Objective { MinTour, MaxTour };
enum class BranchMode { Pure, Full, Pruned };
enum class SelectionOrder { PointFirst, EdgeFirst };

inline const char* to_string(Objective o) { return o == Objective::MinTour ? "min" : "max"; }

inline const char* to_string(BranchMode m) {
    switch (m) {
    case BranchMode::Pure: return "pure";
    case BranchMode::Full: return "full";
    case BranchMode::Pruned: return "pruned";
    }
    return "?";
}

inline const char* to_string(SelectionOrder s) { return s == SelectionOrder::PointFirst ? "point" : "edge"; }

/// `a` and `b` tie when |a - b| <= max(abs, rel * max(|a|, |b|)).
struct TieTolerance {
    double rel = 1e-9;
    double abs = 1e-12;

    bool ties(double a, double b) const noexcept {
        return std::abs(a - b) <= std::max(abs, rel * std::max(std::abs(a), std::abs(b)));
    }
};

/// True when `value` is strictly better than `incumbent` for the outer/inner
/// selection that prefers larger values (`maximize`).
inline bool better(double value, double incumbent, bool maximize) noexcept {
    return maximize ? value > incumbent : value < incumbent;
}

struct SolverConfig {
    Objective objective = Objective::MinTour;
    BranchMode branching = BranchMode::Pure;
    SelectionOrder selection = SelectionOrder::PointFirst;
    double tie_rel_tol = 1e-9;
    double tie_abs_tol = 1e-12;
    std::size_t branch_cap = 10000;
    bool count_deltas = true;
    /// Record the candidates applied by a Pure run (steps with >= 3 points).
    bool record_trace = false;

    TieTolerance tolerance() const noexcept { return {tie_rel_tol, tie_abs_tol}; }

    void validate() const {
        if (!(tie_rel_tol >= 0.0) || !(tie_abs_tol >= 0.0)) throw InvalidArgument("tie tolerances must be >= 0");
        if (branch_cap < 1) throw InvalidArgument("branch_cap must be >= 1");
    }
};

struct Candidate;

/// Closed route over a subset of the instance's points, with cached length.
/// A two-point tour has one undirected edge and length 2 d(r1, r2).
class Tour {
public:
    Tour() = default;

    /// Builds a tour from an explicit order (no repeats) and computes its length.
    static Tour from_order(const Instance& inst, std::vector<PointId> order) {
        Tour t;
        t.member_.assign(inst.size(), 0);
        for (auto id : order) {
            if (id >= inst.size()) throw IndexOutOfRange(id, inst.size());
            if (t.member_[id]) throw InvalidArgument("tour repeats point " + std::to_string(id));
            t.member_[id] = 1;
        }
        t.order_ = std::move(order);
        t.length_ = cycle_length(inst, t.order_);
        return t;
    }

    std::size_t size() const noexcept { return order_.size(); }
    const std::vector<PointId>& order() const noexcept { return order_; }
    double length() const noexcept { return length_; }
    bool contains(PointId p) const noexcept { return p < member_.size() && member_[p]; }

    std::size_t edge_count() const noexcept { return order_.size() < 2 ? 0 : order_.size() == 2 ? 1 : order_.size(); }

    /// Endpoints of edge k: (order[k], order[k+1]) with wraparound.
    std::pair<PointId, PointId> edge(std::size_t k) const noexcept {
        return {order_[k], order_[(k + 1) % order_.size()]};
    }

    /// Points not on the tour, ascending.
    std::vector<PointId> outside() const {
        std::vector<PointId> out;
        out.reserve(member_.size() - order_.size());
        for (PointId p = 0; p < member_.size(); ++p)
            if (!member_[p]) out.push_back(p);
        return out;
    }

    /// Cached length within `rel` of a full recomputation (1e-12 absolute floor).
    bool length_consistent(const Instance& inst, double rel = 1e-9) const {
        const double full = cycle_length(inst, order_);
        return std::abs(length_ - full) <= std::max(rel * std::abs(full), 1e-12);
    }

private:
    friend Tour insert(const Instance&, Tour, const Candidate&);
    friend Tour append_point(const Instance&, Tour, PointId);

    std::vector<PointId> order_;
    std::vector<char> member_;
    double length_ = 0.0;
};

/// An (edge, outside point, delta) triple.
struct Candidate {
    std::size_t edge_pos = 0;
    PointId point = 0;
    double delta = 0.0;

    friend bool operator==(const Candidate& a, const Candidate& b) noexcept {
        return a.edge_pos == b.edge_pos && a.point == b.point;
    }
    friend auto operator<=>(const Candidate& a, const Candidate& b) noexcept {
        return std::pair(a.edge_pos, a.point) <=> std::pair(b.edge_pos, b.point);
    }
};

/// Length increase from splicing `point` into edge `edge_pos`. May be
/// negative when the matrix violates the triangle inequality.
inline double insertion_delta(const Instance& inst, const Tour& tour, std::size_t edge_pos, PointId point) {
    if (point >= inst.size()) throw IndexOutOfRange(point, inst.size());
    if (tour.contains(point)) throw InvalidArgument("point " + std::to_string(point) + " is already in the tour");
    if (edge_pos >= tour.edge_count()) throw IndexOutOfRange(edge_pos, tour.edge_count());
    const auto [a, b] = tour.edge(edge_pos);
    return (inst.d(a, point) + inst.d(point, b)) - inst.d(a, b);
}

/// Splices the candidate's point between the endpoints of its edge:
/// new order = order[0..=m], p, order[m+1..]. The cached length moves by
/// the candidate's delta. Throws if the candidate does not describe `tour`.
inline Tour insert(const Instance& inst, Tour tour, const Candidate& c) {
    const double recomputed = insertion_delta(inst, tour, c.edge_pos, c.point);
    if (recomputed != c.delta)
        throw InvalidArgument("stale candidate: edge " + std::to_string(c.edge_pos) + ", point " +
                              std::to_string(c.point) + " no longer has the recorded delta");
    tour.order_.insert(tour.order_.begin() + static_cast<std::ptrdiff_t>(c.edge_pos) + 1, c.point);
    tour.member_[c.point] = 1;
    tour.length_ += c.delta;
#if MAXMIN_TSP_CHECK_TOURS
    if (!tour.length_consistent(inst))
        throw std::logic_error("cached tour length drifted from recomputation after insertion");
#endif
    return tour;
}

/// Appends the third point to a two-point tour (orientation is fixed).
inline Tour append_point(const Instance& inst, Tour tour, PointId p) {
    if (tour.size() != 2) throw InvalidArgument("append_point expects a two-point tour");
    if (p >= inst.size()) throw IndexOutOfRange(p, inst.size());
    if (tour.contains(p)) throw InvalidArgument("point " + std::to_string(p) + " is already in the tour");
    tour.order_.push_back(p);
    tour.member_[p] = 1;
    tour.length_ = cycle_length(inst, tour.order_);
    return tour;
}

/// All unordered pairs (i < j, ascending) at the extreme distance: farthest
/// for MinTour, closest for MaxTour.
inline std::vector<std::pair<PointId, PointId>> init_pair(const Instance& inst, Objective objective,
                                                          TieTolerance tol = {}) {
    const auto n = inst.size();
    if (n < 2) throw InvalidArgument("init_pair needs at least 2 points");
    const bool maximize = objective == Objective::MinTour;
    double extreme = inst.d(0, 1);
    for (PointId i = 0; i < n; ++i)
        for (PointId j = i + 1; j < n; ++j)
            if (better(inst.d(i, j), extreme, maximize)) extreme = inst.d(i, j);
    std::vector<std::pair<PointId, PointId>> pairs;
    for (PointId i = 0; i < n; ++i)
        for (PointId j = i + 1; j < n; ++j)
            if (tol.ties(inst.d(i, j), extreme)) pairs.emplace_back(i, j);
    return pairs;
}

inline double triangle_perimeter(const Instance& inst, PointId a, PointId b, PointId p) {
    return inst.d(a, p) + inst.d(b, p) + inst.d(a, b);
}

/// Outside points (ascending) at the extreme triangle perimeter with the
/// pair: largest for MinTour, smallest for MaxTour.
inline std::vector<PointId> init_third(const Instance& inst, std::pair<PointId, PointId> pair, Objective objective,
                                       TieTolerance tol = {}) {
    const auto n = inst.size();
    if (n < 3) throw InvalidArgument("init_third needs at least 3 points");
    const auto [a, b] = pair;
    if (a >= n) throw IndexOutOfRange(a, n);
    if (b >= n) throw IndexOutOfRange(b, n);
    if (a == b) throw InvalidArgument("init_third: pair members must differ");
    const bool maximize = objective == Objective::MinTour;

    bool first = true;
    double extreme = 0.0;
    for (PointId p = 0; p < n; ++p) {
        if (p == a || p == b) continue;
        const double v = triangle_perimeter(inst, a, b, p);
        if (first || better(v, extreme, maximize)) extreme = v;
        first = false;
    }
    std::vector<PointId> out;
    for (PointId p = 0; p < n; ++p)
        if (p != a && p != b && tol.ties(triangle_perimeter(inst, a, b, p), extreme)) out.push_back(p);
    return out;
}

/// The tie set of one recurrence step on `tour`, sorted by (edge_pos, point).
/// Every (edge, point) pair over `remaining` is evaluated once; `delta_evals`
/// grows by edges x remaining when given. Tied outer winners contribute every
/// partner tying their own inner extreme.
inline std::vector<Candidate> select_candidates(const Instance& inst, const Tour& tour,
                                                std::span<const PointId> remaining, Objective objective,
                                                TieTolerance tol = {},
                                                SelectionOrder order = SelectionOrder::PointFirst,
                                                std::uint64_t* delta_evals = nullptr) {
    if (remaining.empty()) throw InvalidArgument("select_candidates: no remaining points");
    if (tour.size() < 2) throw InvalidArgument("select_candidates: tour needs at least 2 points");
    for (auto p : remaining) {
        if (p >= inst.size()) throw IndexOutOfRange(p, inst.size());
        if (tour.contains(p)) throw InvalidArgument("remaining point " + std::to_string(p) + " is in the tour");
    }
    const bool inner_max = objective == Objective::MaxTour;
    const std::size_t edges = tour.edge_count();
    std::vector<PointId> head(edges), tail(edges);
    std::vector<double> edge_len(edges);
    for (std::size_t k = 0; k < edges; ++k) {
        std::tie(head[k], tail[k]) = tour.edge(k);
        edge_len[k] = inst.d(head[k], tail[k]);
    }
    if (delta_evals) *delta_evals += static_cast<std::uint64_t>(edges) * remaining.size();

    auto outer_of = [&](const std::vector<double>& inner) {
        return inner_max ? *std::min_element(inner.begin(), inner.end())
                         : *std::max_element(inner.begin(), inner.end());
    };
    std::vector<Candidate> out;

    if (order == SelectionOrder::PointFirst) {
        std::vector<double> inner(remaining.size());
        for (std::size_t i = 0; i < remaining.size(); ++i) {
            const auto rp = inst.matrix().row(remaining[i]);
            double best = (rp[head[0]] + rp[tail[0]]) - edge_len[0];
            for (std::size_t k = 1; k < edges; ++k) {
                const double v = (rp[head[k]] + rp[tail[k]]) - edge_len[k];
                best = inner_max ? std::max(best, v) : std::min(best, v);
            }
            inner[i] = best;
        }
        const double outer = outer_of(inner);
        for (std::size_t i = 0; i < remaining.size(); ++i) {
            if (!tol.ties(inner[i], outer)) continue;
            const auto p = remaining[i];
            for (std::size_t k = 0; k < edges; ++k) {
                const double v = (inst.d(head[k], p) + inst.d(p, tail[k])) - edge_len[k];
                if (tol.ties(v, inner[i])) out.push_back({k, p, v});
            }
        }
        std::sort(out.begin(), out.end());
        return out;
    }

    std::vector<double> inner(edges);
    for (std::size_t k = 0; k < edges; ++k) {
        const auto ra = inst.matrix().row(head[k]);
        const auto rb = inst.matrix().row(tail[k]);
        const double dab = edge_len[k];
        double best = (ra[remaining[0]] + rb[remaining[0]]) - dab;
        if (inner_max) {
            for (auto p : remaining) best = std::max(best, (ra[p] + rb[p]) - dab);
        } else {
            for (auto p : remaining) best = std::min(best, (ra[p] + rb[p]) - dab);
        }
        inner[k] = best;
    }
    const double outer = outer_of(inner);
    for (std::size_t k = 0; k < edges; ++k) {
        if (!tol.ties(inner[k], outer)) continue;
        for (auto p : remaining) {
            const double v = (inst.d(head[k], p) + inst.d(p, tail[k])) - edge_len[k];
            if (tol.ties(v, inner[k])) out.push_back({k, p, v});
        }
    }
    return out;
}

/// Lexicographically smallest (edge_pos, point).
inline Candidate pure_tie_break(std::span<const Candidate> candidates) {
    if (candidates.empty()) throw InvalidArgument("pure_tie_break: empty candidate set");
    return *std::min_element(candidates.begin(), candidates.end());
}

/// Rotation/reflection-invariant form of a cycle: start at the smallest
/// point id, then take the lexicographically smaller direction.
inline std::vector<PointId> canonical_cycle(std::span<const PointId> order) {
    const auto m = order.size();
    if (m == 0) return {};
    const auto start = static_cast<std::size_t>(std::min_element(order.begin(), order.end()) - order.begin());
    std::vector<PointId> fwd(m), bwd(m);
    for (std::size_t k = 0; k < m; ++k) {
        fwd[k] = order[(start + k) % m];
        bwd[k] = order[(start + m - k) % m];
    }
    return std::min(fwd, bwd);
}

/// A partial tour in the tie tree plus the tie set it was chosen from.
struct BranchNode {
    Tour tour;
    std::vector<Candidate> spawned_from;

    std::size_t depth() const noexcept { return tour.size(); }
};

struct SolveResult {
    Tour best_tour;
    std::vector<Tour> all_leaves;
    std::uint64_t delta_evals = 0;
    /// Expansions whose tie set held more than one choice.
    std::uint64_t branch_events = 0;
    std::size_t max_live_branches = 0;
    /// Dropped by the Pruned length criterion.
    std::uint64_t pruned_branches = 0;
    /// Dropped as rotations/reflections of an earlier branch.
    std::uint64_t merged_branches = 0;
    /// Dropped because the frontier exceeded branch_cap.
    std::uint64_t capped_branches = 0;
    bool truncated = false;
    std::vector<Candidate> trace;
};

/// Full mode hit branch_cap. `partial()` holds the result of finishing the
/// first branch_cap branches of every overflowing level (truncated = true).
class BranchCapExceeded : public Error {
public:
    explicit BranchCapExceeded(SolveResult partial)
        : Error("branch cap exceeded; result covers a truncated tie tree"), partial_(std::move(partial)) {}

    const SolveResult& partial() const noexcept { return partial_; }

private:
    SolveResult partial_;
};

/// The documented delta-evaluation count of a Pure run on n points.
constexpr std::uint64_t closed_form_delta_evals(std::uint64_t n) noexcept {
    if (n < 3) return 0;
    return (n * n * n - n) / 6 - (2 * n - 3);
}

namespace detail {

class LevelFilter {
public:
    LevelFilter(const SolverConfig& cfg, SolveResult& result) : cfg_(cfg), result_(result) {}

    std::vector<BranchNode> operator()(std::vector<BranchNode> level) {
        if (cfg_.branching != BranchMode::Pure) dedup(level);
        if (cfg_.branching == BranchMode::Pruned) prune(level);
        if (level.size() > cfg_.branch_cap) {
            result_.capped_branches += level.size() - cfg_.branch_cap;
            level.resize(cfg_.branch_cap);
            result_.truncated = true;
        }
        result_.max_live_branches = std::max(result_.max_live_branches, level.size());
        return level;
    }

private:
    void dedup(std::vector<BranchNode>& level) {
        std::set<std::vector<PointId>> seen;
        std::vector<BranchNode> kept;
        kept.reserve(level.size());
        for (auto& node : level) {
            if (seen.insert(canonical_cycle(node.tour.order())).second)
                kept.push_back(std::move(node));
            else
                ++result_.merged_branches;
        }
        level = std::move(kept);
    }

    void prune(std::vector<BranchNode>& level) {
        if (level.empty()) return;
        const bool keep_longest = cfg_.objective == Objective::MinTour;
        double extreme = level.front().tour.length();
        for (const auto& node : level)
            if (better(node.tour.length(), extreme, keep_longest)) extreme = node.tour.length();
        const auto tol = cfg_.tolerance();
        const auto before = level.size();
        std::erase_if(level, [&](const BranchNode& node) { return !tol.ties(node.tour.length(), extreme); });
        result_.pruned_branches += before - level.size();
    }

    const SolverConfig& cfg_;
    SolveResult& result_;
};

}  // namespace detail

/// Builds a closed tour over every point. Throws BranchCapExceeded when a
/// Full run had to truncate its tie tree.
inline SolveResult solve(const Instance& inst, const SolverConfig& cfg = {}) {
    cfg.validate();
    const auto n = inst.size();
    if (n < 2) throw InvalidArgument("solve needs at least 2 points");
    const auto tol = cfg.tolerance();
    const bool pure = cfg.branching == BranchMode::Pure;

    SolveResult result;
    detail::LevelFilter finish_level(cfg, result);
    std::uint64_t* counter = cfg.count_deltas ? &result.delta_evals : nullptr;

    std::vector<BranchNode> frontier;
    {
        auto pairs = init_pair(inst, cfg.objective, tol);
        if (pairs.size() > 1) ++result.branch_events;
        if (pure) pairs.resize(1);
        for (auto [a, b] : pairs) frontier.push_back({Tour::from_order(inst, {a, b}), {}});
        frontier = finish_level(std::move(frontier));
    }

    for (std::size_t depth = 2; depth < n; ++depth) {
        std::vector<BranchNode> children;
        for (auto& node : frontier) {
            const auto& tour = node.tour;
            if (depth == 2) {
                const auto [a, b] = tour.edge(0);
                auto thirds = init_third(inst, {a, b}, cfg.objective, tol);
                if (counter) *counter += n - 2;
                if (thirds.size() > 1) ++result.branch_events;
                if (pure) thirds.resize(1);
                std::vector<Candidate> tie_set;
                for (auto p : thirds) tie_set.push_back({0, p, insertion_delta(inst, tour, 0, p)});
                for (auto p : thirds) children.push_back({append_point(inst, tour, p), tie_set});
                continue;
            }
            const auto remaining = tour.outside();
            auto candidates = select_candidates(inst, tour, remaining, cfg.objective, tol, cfg.selection, counter);
            if (pure) {
                const auto chosen = pure_tie_break(candidates);
                if (cfg.record_trace) result.trace.push_back(chosen);
                if (candidates.size() > 1) ++result.branch_events;
                children.push_back({insert(inst, tour, chosen), std::move(candidates)});
                continue;
            }
            if (candidates.size() > 1) ++result.branch_events;
            for (const auto& c : candidates) children.push_back({insert(inst, tour, c), candidates});
        }
        frontier = finish_level(std::move(children));
    }

    const bool want_min = cfg.objective == Objective::MinTour;
    std::size_t best = 0;
    for (std::size_t k = 1; k < frontier.size(); ++k)
        if (better(frontier[k].tour.length(), frontier[best].tour.length(), !want_min)) best = k;
    result.best_tour = frontier[best].tour;
    result.all_leaves.reserve(frontier.size());
    for (auto& node : frontier) result.all_leaves.push_back(std::move(node.tour));

    if (result.truncated && cfg.branching == BranchMode::Full) throw BranchCapExceeded(std::move(result));
    return result;
}

}  // namespace maxmin_tsp
