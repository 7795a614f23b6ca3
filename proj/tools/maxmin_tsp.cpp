// Command-line front end: generate, solve, verify, bench, fig4.
//
// Exit codes: 0 success (suboptimal tours and loops are findings, not
// failures), 2 usage or invalid arguments, 3 file I/O or unreadable
// instance, 4 branch cap truncation in full mode (reports still written).

#include "maxmin_tsp/maxmin_tsp.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace mt = maxmin_tsp;
namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;
constexpr int kExitTruncated = 4;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::pair<std::uint64_t, std::uint64_t> parse_grid(const std::string& text) {
    const auto x = text.find_first_of("xX");
    try {
        if (x == std::string::npos) throw UsageError("");
        std::size_t used_w = 0, used_h = 0;
        const auto w = std::stoull(text.substr(0, x), &used_w);
        const auto h = std::stoull(text.substr(x + 1), &used_h);
        if (used_w != x || used_h != text.size() - x - 1 || w == 0 || h == 0) throw UsageError("");
        return {w, h};
    } catch (const std::exception&) {
        throw UsageError("--grid expects WxH with positive integers, got '" + text + "'");
    }
}

std::vector<mt::BranchMode> parse_modes(const std::string& text) {
    static const std::map<std::string, mt::BranchMode> names{
        {"pure", mt::BranchMode::Pure}, {"full", mt::BranchMode::Full}, {"pruned", mt::BranchMode::Pruned}};
    std::vector<mt::BranchMode> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto it = names.find(item);
        if (it == names.end()) throw UsageError("unknown mode '" + item + "'");
        out.push_back(it->second);
    }
    if (out.empty()) throw UsageError("--modes needs at least one mode");
    return out;
}

std::string number(double v) { return mt::Json(mt::round12(v)).dump(); }

void write_json(const fs::path& path, const mt::Json& j) { mt::write_text_file(path, mt::dump_json(j)); }

struct SolverFlags {
    std::string objective = "min";
    std::string mode = "pure";
    std::string selection = "point";
    double tie_rel = 1e-9;
    double tie_abs = 1e-12;
    std::size_t branch_cap = 10000;

    void attach(CLI::App* cmd) {
        cmd->add_option("--objective", objective, "min (shortest tour) or max (longest tour)")
            ->check(CLI::IsMember({"min", "max"}))
            ->capture_default_str();
        cmd->add_option("--mode", mode, "branching policy")
            ->check(CLI::IsMember({"pure", "full", "pruned"}))
            ->capture_default_str();
        cmd->add_option("--selection", selection, "inner extreme per point (point) or per edge (edge)")
            ->check(CLI::IsMember({"point", "edge"}))
            ->capture_default_str();
        cmd->add_option("--tie-rel", tie_rel, "relative tie tolerance")->check(CLI::NonNegativeNumber)->capture_default_str();
        cmd->add_option("--tie-abs", tie_abs, "absolute tie tolerance")->check(CLI::NonNegativeNumber)->capture_default_str();
        cmd->add_option("--branch-cap", branch_cap, "maximum live branches")->check(CLI::PositiveNumber)->capture_default_str();
    }

    mt::SolverConfig config() const {
        mt::SolverConfig c;
        c.objective = objective == "max" ? mt::Objective::MaxTour : mt::Objective::MinTour;
        c.branching = parse_modes(mode).front();
        c.selection = selection == "edge" ? mt::SelectionOrder::EdgeFirst : mt::SelectionOrder::PointFirst;
        c.tie_rel_tol = tie_rel;
        c.tie_abs_tol = tie_abs;
        c.branch_cap = branch_cap;
        return c;
    }
};

struct Solved {
    mt::SolveResult result;
    std::optional<mt::CrossingReport> crossings;
    double total_ms = 0.0;
};

Solved run_solver(const mt::Instance& inst, const mt::SolverConfig& cfg) {
    Solved s;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        s.result = mt::solve(inst, cfg);
    } catch (const mt::BranchCapExceeded& e) {
        s.result = e.partial();
    }
    if (inst.has_points()) s.crossings = mt::detect_crossings(inst, s.result.best_tour);
    s.total_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return s;
}

std::string summary_line(const Solved& s) {
    std::string line = "length=" + number(s.result.best_tour.length()) +
                       " delta_evals=" + std::to_string(s.result.delta_evals) +
                       " crossings=" + (s.crossings ? std::to_string(s.crossings->count) : std::string("n/a"));
    if (s.result.truncated) line += " truncated=true";
    return line;
}

// --- generate -------------------------------------------------------------

struct GenerateCmd {
    std::size_t n = 0;
    std::string grid = "1000x1000";
    std::uint64_t seed = 1;
    bool continuous = false;
    bool allow_duplicates = false;
    std::string out;
    bool quiet = false;

    void attach(CLI::App* cmd) {
        cmd->add_option("--n", n, "number of points")->required()->check(CLI::Range(std::size_t{2}, std::size_t{1} << 30));
        cmd->add_option("--grid", grid, "grid size WxH")->capture_default_str();
        cmd->add_option("--seed", seed, "generator seed")->capture_default_str();
        cmd->add_flag("--continuous", continuous, "uniform real coordinates instead of grid cells");
        cmd->add_flag("--allow-duplicates", allow_duplicates, "allow several points per grid cell");
        cmd->add_option("--out", out, "output file (.pts, .tsp or .mat)")->required();
        cmd->add_flag("--quiet", quiet, "no standard output");
    }

    int run() const {
        const auto [w, h] = parse_grid(grid);
        mt::GeneratorConfig g{.n = n, .grid_w = w, .grid_h = h, .seed = seed,
                              .allow_duplicates = allow_duplicates, .continuous = continuous};
        const auto inst = mt::generate(g);
        mt::write_instance(inst, out);
        if (!quiet)
            std::cout << "generated n=" << n << " grid=" << w << "x" << h << " seed=" << seed
                      << (continuous ? " continuous" : "") << " -> " << out << "\n";
        return kExitOk;
    }
};

// --- solve ----------------------------------------------------------------

struct SolveCmd {
    std::string in;
    SolverFlags solver;
    std::string svg;
    std::string json;
    bool oracle = false;
    bool quiet = false;

    void attach(CLI::App* cmd) {
        cmd->add_option("--in", in, "instance file")->required();
        solver.attach(cmd);
        cmd->add_option("--svg", svg, "write a drawing of the tour");
        cmd->add_option("--json", json, "write a JSON run report");
        cmd->add_flag("--oracle", oracle, "also solve exactly (n <= 18) and report the gap");
        cmd->add_flag("--quiet", quiet, "no standard output");
    }

    int run() const {
        const auto inst = mt::read_instance(in);
        const auto cfg = solver.config();
        const auto s = run_solver(inst, cfg);

        mt::RunContext ctx{.crossings = s.crossings, .total_ms = s.total_ms};
        if (oracle) {
            if (inst.size() < 3 || inst.size() > mt::kHeldKarpMaxN)
                throw UsageError("--oracle supports 3 <= n <= " + std::to_string(mt::kHeldKarpMaxN));
            const auto exact = mt::held_karp(inst, cfg.objective);
            ctx.oracle_gap = mt::relative_gap(s.result.best_tour.length(), exact.best_length, cfg.objective);
        }
        if (!json.empty()) write_json(json, mt::run_report(inst, cfg, s.result, ctx));
        if (!svg.empty()) mt::emit_svg(inst, s.result.best_tour.order(), s.crossings.value_or(mt::CrossingReport{}), svg, inst.name());
        if (!quiet) {
            std::string line = summary_line(s);
            if (ctx.oracle_gap) line += " oracle_gap=" + number(*ctx.oracle_gap);
            std::cout << line << "\n";
        }
        return s.result.truncated && cfg.branching == mt::BranchMode::Full ? kExitTruncated : kExitOk;
    }
};

// --- verify ---------------------------------------------------------------

struct VerifyCmd {
    std::size_t count = 100;
    std::size_t n_min = 5;
    std::size_t n_max = 9;
    std::uint64_t seed = 42;
    std::string modes = "pure,full,pruned";
    std::string objective = "min";
    std::string selection = "point";
    std::string grid = "20x20";
    std::size_t branch_cap = 10000;
    std::string json;
    bool quiet = false;

    void attach(CLI::App* cmd) {
        cmd->add_option("--count", count, "number of random instances")->capture_default_str();
        cmd->add_option("--n-min", n_min, "smallest instance size")->capture_default_str();
        cmd->add_option("--n-max", n_max, "largest instance size (exact oracle limit 18)")->capture_default_str();
        cmd->add_option("--seed", seed, "master seed")->capture_default_str();
        cmd->add_option("--modes", modes, "comma-separated branching modes")->capture_default_str();
        cmd->add_option("--objective", objective)->check(CLI::IsMember({"min", "max"}))->capture_default_str();
        cmd->add_option("--selection", selection)->check(CLI::IsMember({"point", "edge"}))->capture_default_str();
        cmd->add_option("--grid", grid, "grid size WxH for generated instances")->capture_default_str();
        cmd->add_option("--branch-cap", branch_cap)->check(CLI::PositiveNumber)->capture_default_str();
        cmd->add_option("--json", json, "write the harness report as JSON");
        cmd->add_flag("--quiet", quiet, "no standard output");
    }

    int run() const {
        if (n_min < 3 || n_max > mt::kHeldKarpMaxN || n_min > n_max)
            throw UsageError("verify needs 3 <= n-min <= n-max <= " + std::to_string(mt::kHeldKarpMaxN));
        const auto [w, h] = parse_grid(grid);
        mt::HarnessConfig cfg;
        cfg.count = count;
        cfg.n_min = n_min;
        cfg.n_max = n_max;
        cfg.seed = seed;
        cfg.modes = parse_modes(modes);
        cfg.objective = objective == "max" ? mt::Objective::MaxTour : mt::Objective::MinTour;
        cfg.selection = selection == "edge" ? mt::SelectionOrder::EdgeFirst : mt::SelectionOrder::PointFirst;
        cfg.generator.grid_w = w;
        cfg.generator.grid_h = h;
        cfg.branch_cap = branch_cap;
        if (!cfg.generator.allow_duplicates && n_max > w * h)
            throw UsageError("grid " + grid + " cannot hold " + std::to_string(n_max) + " distinct points");
        const auto sum = mt::exactness_harness(cfg);
        if (!json.empty()) write_json(json, mt::harness_json(cfg, sum));
        if (!quiet) std::cout << mt::harness_table(sum);
        return kExitOk;
    }
};

// --- bench ----------------------------------------------------------------

std::vector<std::size_t> parse_sizes(const std::string& text) {
    std::vector<std::size_t> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            const auto v = std::stoull(item, &used);
            if (used != item.size() || v < 3) throw UsageError("");
            out.push_back(v);
        } catch (const std::exception&) {
            throw UsageError("--sizes expects comma-separated integers >= 3, got '" + item + "'");
        }
    }
    return out;
}

struct BenchCmd {
    std::string sizes = "100,200,400";
    std::size_t reps = 3;
    std::uint64_t seed = 1;
    std::string grid = "1000x1000";
    bool continuous = false;
    SolverFlags solver;
    std::string svg_dir;
    std::string json;
    bool quiet = false;

    void attach(CLI::App* cmd) {
        cmd->add_option("--sizes", sizes, "comma-separated instance sizes (at least 3)")->capture_default_str();
        cmd->add_option("--reps", reps, "fresh instances per size")->check(CLI::PositiveNumber)->capture_default_str();
        cmd->add_option("--seed", seed, "master seed")->capture_default_str();
        cmd->add_option("--grid", grid, "grid size WxH")->capture_default_str();
        cmd->add_flag("--continuous", continuous, "uniform real coordinates");
        solver.attach(cmd);
        cmd->add_option("--svg-dir", svg_dir, "write a drawing of the first run at each size");
        cmd->add_option("--json", json, "write scaling and loop-rate reports as JSON");
        cmd->add_flag("--quiet", quiet, "no standard output");
    }

    int run() const {
        const auto list = parse_sizes(sizes);
        if (list.size() < 3) throw UsageError("bench needs at least 3 sizes");
        const auto [w, h] = parse_grid(grid);
        mt::ExperimentConfig cfg;
        cfg.sizes = list;
        cfg.reps = reps;
        cfg.seed = seed;
        cfg.generator.grid_w = w;
        cfg.generator.grid_h = h;
        cfg.generator.continuous = continuous;
        cfg.solver = solver.config();

        if (!svg_dir.empty()) fs::create_directories(svg_dir);
        const auto runs = mt::collect_runs(cfg, [&](const mt::Instance& inst, const mt::ExperimentRun& run) {
            if (!svg_dir.empty() && run.rep == 0)
                mt::emit_svg(inst, run.result.best_tour.order(), run.crossings,
                             fs::path(svg_dir) / ("bench_n" + std::to_string(run.n) + ".svg"), inst.name());
        });
        const auto scaling = mt::scaling_from_runs(runs);
        const auto loops = mt::loop_rates_from_runs(runs);

        if (!json.empty()) {
            mt::Json sizes_json = mt::Json::array();
            for (const auto& r : scaling.rows) sizes_json.push_back(r.n);
            write_json(json, mt::Json{{"schema_version", mt::kSchemaVersion},
                                      {"bench",
                                       {{"sizes", sizes_json},
                                        {"reps", reps},
                                        {"seed", seed},
                                        {"grid", std::to_string(w) + "x" + std::to_string(h)},
                                        {"continuous", continuous}}},
                                      {"config", mt::config_json(cfg.solver)},
                                      {"scaling", mt::scaling_json(scaling)},
                                      {"loop_rates", mt::loop_rate_json(loops)}});
        }
        if (!quiet) std::cout << mt::scaling_table(scaling) << "\n" << mt::loop_rate_table(loops);
        return kExitOk;
    }
};

// --- fig4 -----------------------------------------------------------------

struct Fig4Cmd {
    std::size_t n = 100;
    std::uint64_t seed = 1;
    std::string grid = "1000x1000";
    std::string out_dir = ".";
    bool quiet = false;

    void attach(CLI::App* cmd) {
        cmd->add_option("--n", n, "number of points")->check(CLI::Range(std::size_t{3}, std::size_t{1} << 20))->capture_default_str();
        cmd->add_option("--seed", seed, "generator seed")->capture_default_str();
        cmd->add_option("--grid", grid, "grid size WxH")->capture_default_str();
        cmd->add_option("--out-dir", out_dir, "directory for fig4_min.svg, fig4_max.svg, fig4.json")->capture_default_str();
        cmd->add_flag("--quiet", quiet, "no standard output");
    }

    int run() const {
        const auto [w, h] = parse_grid(grid);
        const auto inst = mt::generate({.n = n, .grid_w = w, .grid_h = h, .seed = seed});
        fs::create_directories(out_dir);
        mt::Json combined{{"schema_version", mt::kSchemaVersion}};
        for (auto objective : {mt::Objective::MinTour, mt::Objective::MaxTour}) {
            mt::SolverConfig cfg;
            cfg.objective = objective;
            const auto s = run_solver(inst, cfg);
            const std::string tag = mt::to_string(objective);
            mt::emit_svg(inst, s.result.best_tour.order(), *s.crossings, fs::path(out_dir) / ("fig4_" + tag + ".svg"),
                         inst.name() + " " + tag);
            combined[tag] = mt::run_report(inst, cfg, s.result, {.seed = seed, .crossings = s.crossings, .total_ms = s.total_ms});
            if (!quiet) std::cout << tag << " " << summary_line(s) << "\n";
        }
        write_json(fs::path(out_dir) / "fig4.json", combined);
        return kExitOk;
    }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Recurrent maxmin insertion TSP solver with exact oracles and experiment harnesses"};
    app.require_subcommand(1);

    GenerateCmd generate;
    SolveCmd solve;
    VerifyCmd verify;
    BenchCmd bench;
    Fig4Cmd fig4;
    generate.attach(app.add_subcommand("generate", "write a random grid instance"));
    solve.attach(app.add_subcommand("solve", "construct a tour for an instance file"));
    verify.attach(app.add_subcommand("verify", "compare the solver with an exact oracle on random instances"));
    bench.attach(app.add_subcommand("bench", "operation-count scaling and loop-rate experiment"));
    fig4.attach(app.add_subcommand("fig4", "shortest and longest tour drawings for one instance"));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return e.get_exit_code() == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (app.got_subcommand("generate")) return generate.run();
        if (app.got_subcommand("solve")) return solve.run();
        if (app.got_subcommand("verify")) return verify.run();
        if (app.got_subcommand("bench")) return bench.run();
        if (app.got_subcommand("fig4")) return fig4.run();
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const mt::IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const mt::InstanceFormatError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const mt::InvalidArgument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const fs::filesystem_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    }
    return kExitUsage;
}
