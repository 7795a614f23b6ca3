// Solves the unit square with both objectives and every branching mode,
// then checks the shortest-tour result against Held-Karp.

#include "maxmin_tsp/maxmin_tsp.hpp"

#include <cstdio>

int main() {
    using namespace maxmin_tsp;
    const Instance square(PointSet({{0, 0}, {1, 0}, {1, 1}, {0, 1}}), "unit_square");

    for (auto objective : {Objective::MinTour, Objective::MaxTour}) {
        for (auto mode : {BranchMode::Pure, BranchMode::Full, BranchMode::Pruned}) {
            SolverConfig cfg;
            cfg.objective = objective;
            cfg.branching = mode;
            const auto res = solve(square, cfg);
            std::printf("%-3s %-6s length %.9f  leaves %zu  delta evals %llu\n", to_string(objective), to_string(mode),
                        res.best_tour.length(), res.all_leaves.size(),
                        static_cast<unsigned long long>(res.delta_evals));
        }
    }
    std::printf("held-karp optimum %.9f\n", held_karp(square).best_length);
}
