#pragma once

// JSON reports (schema version "1") and aligned text tables.
// Every real number is rounded to 12 significant digits before it is
// stored, so a dumped report re-parses and re-dumps byte-identically.

#include "analysis.hpp"
#include "instance.hpp"
#include "instance_io.hpp"
#include "oracle.hpp"
#include "solver.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <optional>
#include <string>
#include <vector>

namespace maxmin_tsp {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchemaVersion = "1";

inline double round12(double v) { return std::strtod(format_number(v).c_str(), nullptr); }

inline Json config_json(const SolverConfig& c) {
    return Json{{"objective", to_string(c.objective)},
                {"mode", to_string(c.branching)},
                {"selection", to_string(c.selection)},
                {"tie_rel_tol", round12(c.tie_rel_tol)},
                {"tie_abs_tol", round12(c.tie_abs_tol)},
                {"branch_cap", c.branch_cap},
                {"count_deltas", c.count_deltas}};
}

inline Json order_json(const std::vector<PointId>& order) {
    Json a = Json::array();
    for (auto p : order) a.push_back(p);
    return a;
}

struct RunContext {
    std::optional<std::uint64_t> seed;
    std::optional<CrossingReport> crossings;
    std::optional<double> oracle_gap;
    double total_ms = 0.0;
};

inline Json run_report(const Instance& inst, const SolverConfig& cfg, const SolveResult& res, const RunContext& ctx) {
    Json instance{{"name", inst.name()}, {"n", inst.size()}, {"source", inst.has_points() ? "points" : "matrix"}};
    if (ctx.seed) instance["seed"] = *ctx.seed;

    Json result{{"order", order_json(res.best_tour.order())},
                {"length", round12(res.best_tour.length())},
                {"delta_evals", res.delta_evals},
                {"branch_events", res.branch_events},
                {"pruned_branches", res.pruned_branches},
                {"merged_branches", res.merged_branches},
                {"max_live_branches", res.max_live_branches},
                {"leaves", res.all_leaves.size()},
                {"truncated", res.truncated}};

    Json analysis{{"crossings", ctx.crossings ? Json(ctx.crossings->count) : Json(nullptr)}};
    if (ctx.oracle_gap) analysis["oracle_gap"] = round12(*ctx.oracle_gap);

    return Json{{"schema_version", kSchemaVersion},
                {"instance", std::move(instance)},
                {"config", config_json(cfg)},
                {"result", std::move(result)},
                {"analysis", std::move(analysis)},
                {"timings", {{"total_ms", round12(ctx.total_ms)}}}};
}

inline std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

inline Json harness_json(const HarnessConfig& cfg, const HarnessSummary& sum) {
    Json modes = Json::array();
    for (auto m : cfg.modes) modes.push_back(to_string(m));
    Json summary = Json::array();
    for (const auto& s : sum.per_mode)
        summary.push_back({{"mode", to_string(s.mode)},
                           {"runs", s.runs},
                           {"matches", s.matches},
                           {"match_rate", round12(s.match_rate())},
                           {"mean_gap", round12(s.mean_gap)},
                           {"max_gap", round12(s.max_gap)},
                           {"bound_violations", s.bound_violations},
                           {"truncated", s.truncated}});
    Json rows = Json::array();
    for (const auto& r : sum.rows) {
        Json outcomes = Json::array();
        for (const auto& o : r.outcomes) {
            Json oj{{"mode", to_string(o.mode)},
                    {"length", round12(o.length)},
                    {"gap", round12(o.gap)},
                    {"matched", o.matched},
                    {"truncated", o.truncated},
                    {"leaves", o.leaves}};
            if (!o.matched) oj["order"] = order_json(o.order);
            outcomes.push_back(std::move(oj));
        }
        Json row{{"id", r.id}, {"seed", r.seed}, {"n", r.n}, {"optimum", round12(r.optimum)}};
        if (std::any_of(r.outcomes.begin(), r.outcomes.end(), [](const ModeOutcome& o) { return !o.matched; }))
            row["optimal_order"] = order_json(r.optimal_order);
        row["outcomes"] = std::move(outcomes);
        rows.push_back(std::move(row));
    }
    return Json{{"schema_version", kSchemaVersion},
                {"harness",
                 {{"count", cfg.count},
                  {"n_min", cfg.n_min},
                  {"n_max", cfg.n_max},
                  {"objective", to_string(cfg.objective)},
                  {"selection", to_string(cfg.selection)},
                  {"modes", modes},
                  {"seed", cfg.seed},
                  {"grid", std::to_string(cfg.generator.grid_w) + "x" + std::to_string(cfg.generator.grid_h)}}},
                {"summary", std::move(summary)},
                {"rows", std::move(rows)}};
}

inline Json scaling_json(const ScalingReport& rep) {
    Json rows = Json::array();
    for (const auto& r : rep.rows)
        rows.push_back({{"n", r.n},
                        {"delta_evals", r.delta_evals},
                        {"theoretical", r.theoretical},
                        {"wall_ms", round12(r.wall_ms)},
                        {"tour_length", round12(r.tour_length)},
                        {"crossings", round12(r.crossings)}});
    return Json{{"rows", std::move(rows)},
                {"fitted_exponent_ops", round12(rep.fitted_exponent_ops)},
                {"fitted_exponent_time", round12(rep.fitted_exponent_time)}};
}

inline Json loop_rate_json(const std::vector<LoopRateRow>& rows) {
    Json out = Json::array();
    for (const auto& r : rows) {
        Json seeds = Json::array();
        for (auto s : r.seeds) seeds.push_back(s);
        Json cross = Json::array();
        for (auto c : r.crossings) cross.push_back(c);
        out.push_back({{"n", r.n},
                       {"runs", r.runs},
                       {"runs_with_loops", r.runs_with_loops},
                       {"fraction", round12(r.fraction)},
                       {"mean_crossings", round12(r.mean_crossings)},
                       {"seeds", std::move(seeds)},
                       {"crossings", std::move(cross)}});
    }
    return out;
}

/// Left-aligned first column, right-aligned numeric columns.
class TextTable {
public:
    explicit TextTable(std::vector<std::string> header) : header_(std::move(header)) {}

    void add(std::vector<std::string> row) { rows_.push_back(std::move(row)); }

    std::string render() const {
        std::vector<std::size_t> width(header_.size(), 0);
        auto grow = [&](const std::vector<std::string>& r) {
            for (std::size_t c = 0; c < r.size() && c < width.size(); ++c) width[c] = std::max(width[c], r[c].size());
        };
        grow(header_);
        for (const auto& r : rows_) grow(r);
        auto line = [&](const std::vector<std::string>& r) {
            std::string s;
            for (std::size_t c = 0; c < width.size(); ++c) {
                const std::string cell = c < r.size() ? r[c] : "";
                const std::string pad(width[c] - cell.size(), ' ');
                if (c) s += "  ";
                s += c == 0 ? cell + pad : pad + cell;
            }
            while (!s.empty() && s.back() == ' ') s.pop_back();
            return s + "\n";
        };
        std::string out = line(header_);
        std::size_t total = 0;
        for (auto w : width) total += w;
        out += std::string(total + 2 * (width.size() - 1), '-') + "\n";
        for (const auto& r : rows_) out += line(r);
        return out;
    }

private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

inline std::string fixed(double v, int digits = 6) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

/// Per-instance rows, then a per-mode summary, then details of mismatches.
inline std::string harness_table(const HarnessSummary& sum) {
    std::vector<std::string> header{"id", "n", "seed", "optimum"};
    if (!sum.rows.empty())
        for (const auto& o : sum.rows.front().outcomes) {
            header.push_back(std::string(to_string(o.mode)));
            header.push_back(std::string(to_string(o.mode)) + "_gap");
        }
    TextTable rows(header);
    for (const auto& r : sum.rows) {
        std::vector<std::string> cells{std::to_string(r.id), std::to_string(r.n), std::to_string(r.seed),
                                       format_number(r.optimum)};
        for (const auto& o : r.outcomes) {
            cells.push_back(format_number(o.length) + (o.truncated ? "*" : ""));
            cells.push_back(fixed(o.gap));
        }
        rows.add(std::move(cells));
    }

    TextTable summary({"mode", "runs", "matches", "match_rate", "mean_gap", "max_gap", "bound_violations"});
    for (const auto& s : sum.per_mode)
        summary.add({to_string(s.mode), std::to_string(s.runs), std::to_string(s.matches), fixed(s.match_rate(), 4),
                     fixed(s.mean_gap), fixed(s.max_gap), std::to_string(s.bound_violations)});

    std::string out = rows.render() + "\n" + summary.render();
    auto join = [](const std::vector<PointId>& o) {
        std::string s;
        for (std::size_t k = 0; k < o.size(); ++k) s += (k ? " " : "") + std::to_string(o[k]);
        return s;
    };
    bool heading = false;
    for (const auto& r : sum.rows) {
        for (const auto& o : r.outcomes) {
            if (o.matched) continue;
            if (!heading) {
                out += "\nmismatches:\n";
                heading = true;
            }
            out += "  id " + std::to_string(r.id) + " " + to_string(o.mode) + " gap " + fixed(o.gap) + "\n";
            out += "    solver  [" + join(o.order) + "] " + format_number(o.length) + "\n";
            out += "    optimum [" + join(r.optimal_order) + "] " + format_number(r.optimum) + "\n";
        }
    }
    return out;
}

inline std::string scaling_table(const ScalingReport& rep) {
    TextTable t({"n", "delta_evals", "sum_k(n-k)", "wall_ms", "tour_length", "crossings"});
    for (const auto& r : rep.rows)
        t.add({std::to_string(r.n), std::to_string(r.delta_evals), std::to_string(r.theoretical), fixed(r.wall_ms, 2),
               format_number(r.tour_length), fixed(r.crossings, 2)});
    return t.render() + "fitted exponent (delta evals): " + fixed(rep.fitted_exponent_ops, 4) +
           "\nfitted exponent (wall time):   " + fixed(rep.fitted_exponent_time, 4) + "\n";
}

inline std::string loop_rate_table(const std::vector<LoopRateRow>& rows) {
    TextTable t({"n", "runs", "with_loops", "fraction", "mean_crossings"});
    for (const auto& r : rows)
        t.add({std::to_string(r.n), std::to_string(r.runs), std::to_string(r.runs_with_loops), fixed(r.fraction, 3),
               fixed(r.mean_crossings, 2)});
    return t.render();
}

}  // namespace maxmin_tsp
