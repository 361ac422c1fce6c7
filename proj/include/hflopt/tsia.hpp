#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "hflopt/sroa.hpp"

namespace hflopt {

struct TsiaMove {
    int step = 0;   // strictly increasing across both stages
    int stage = 0;  // 1: costly user moves, 2: economic user moves
    int from_edge = 0;
    int to_edge = 0;
    int user = 0;
    double objective = 0;       // R of the pattern after this move
    double best_objective = 0;  // running minimum including this move
};

enum class TsiaStop { PatternRepeat, IterationCap };

struct TsiaConfig {
    SolverConfig solver;
    int stage_iteration_cap = 500;
};

struct TsiaResult {
    Assignment best_assignment;
    double best_objective = 0;
    SroaResult best_solution;
    std::vector<TsiaMove> trace;
    TsiaStop converged_by = TsiaStop::PatternRepeat;
};

// Costly edge = highest per-edge weighted cost among edges that still have
// users; economic edge = lowest cost over all edges. Ties break to the lower
// index. nullopt when the two coincide (no useful transfer exists).
std::optional<std::pair<int, int>> costly_economic_servers(
    const std::vector<double>& edge_cost, const std::vector<std::size_t>& group_sizes);

// Within one group: the users holding the most and the least bandwidth,
// ties to the lower user id. Throws std::invalid_argument on empty groups.
std::pair<int, int> costly_economic_users(const std::vector<double>& bandwidth_hz,
                                          const std::vector<int>& group);

// Two-stage local search over assignment patterns. Stage 1 repeatedly moves
// the costly user of the costly edge to the economic edge; stage 2 restarts
// from the stage-1 best and moves the economic user instead. A stage ends
// when its pattern repeats or at the iteration cap. Deterministic.
TsiaResult tsia(const Scenario& s, const TsiaConfig& cfg = {});

}  // namespace hflopt
