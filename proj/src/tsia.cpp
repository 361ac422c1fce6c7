#include "hflopt/tsia.hpp"

#include <algorithm>
#include <limits>
#include <set>
#include <stdexcept>

namespace hflopt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// user -> edge vector; equal vectors mean equal patterns
std::vector<int> canonical(const Assignment& a, int n_users) {
    return a.edge_of_user(n_users);
}

void move_user(Assignment& a, int user, int from_edge, int to_edge) {
    auto& src = a.groups[static_cast<std::size_t>(from_edge)];
    auto it = std::find(src.begin(), src.end(), user);
    if (it == src.end()) throw std::logic_error("transfer source does not hold the user");
    src.erase(it);
    auto& dst = a.groups[static_cast<std::size_t>(to_edge)];
    dst.insert(std::upper_bound(dst.begin(), dst.end(), user), user);
}

}  // namespace

std::optional<std::pair<int, int>> costly_economic_servers(
    const std::vector<double>& edge_cost, const std::vector<std::size_t>& group_sizes) {
    if (edge_cost.size() != group_sizes.size())
        throw std::invalid_argument("edge cost / group size length mismatch");
    int costly = -1, economic = -1;
    for (std::size_t m = 0; m < edge_cost.size(); ++m) {
        if (group_sizes[m] > 0 && (costly < 0 || edge_cost[m] > edge_cost[static_cast<std::size_t>(costly)]))
            costly = static_cast<int>(m);
        if (economic < 0 || edge_cost[m] < edge_cost[static_cast<std::size_t>(economic)])
            economic = static_cast<int>(m);
    }
    if (costly < 0 || costly == economic) return std::nullopt;
    return std::make_pair(costly, economic);
}

std::pair<int, int> costly_economic_users(const std::vector<double>& bandwidth_hz,
                                          const std::vector<int>& group) {
    if (group.empty()) throw std::invalid_argument("cannot pick users from an empty group");
    int costly = group.front(), economic = group.front();
    for (int n : group) {
        auto ni = static_cast<std::size_t>(n);
        if (bandwidth_hz.at(ni) > bandwidth_hz.at(static_cast<std::size_t>(costly))) costly = n;
        if (bandwidth_hz.at(ni) < bandwidth_hz.at(static_cast<std::size_t>(economic))) economic = n;
    }
    return {costly, economic};
}

TsiaResult tsia(const Scenario& s, const TsiaConfig& cfg) {
    s.validate();

    TsiaResult result;
    result.best_assignment = geo_initial_assignment(s);
    result.best_solution = sroa(s, result.best_assignment, cfg.solver);
    result.best_objective =
        result.best_solution.feasible ? result.best_solution.objective : kInf;

    if (s.n_edges() < 2) return result;

    Assignment current = result.best_assignment;
    SroaResult current_solution = result.best_solution;
    int step = 0;

    for (int stage = 1; stage <= 2; ++stage) {
        if (stage == 2) {
            current = result.best_assignment;
            current_solution = result.best_solution;
        }
        std::set<std::vector<int>> seen;
        seen.insert(canonical(current, s.n_users()));

        bool capped = true;
        for (int q = 0; q < cfg.stage_iteration_cap; ++q) {
            if (!current_solution.feasible) {
                // no allocation to rank servers or users by; nothing to move
                capped = false;
                break;
            }
            std::vector<double> edge_cost(current.groups.size());
            std::vector<std::size_t> sizes(current.groups.size());
            for (std::size_t m = 0; m < current.groups.size(); ++m) {
                edge_cost[m] = current_solution.report.edges[m].weighted_cost;
                sizes[m] = current.groups[m].size();
            }
            auto servers = costly_economic_servers(edge_cost, sizes);
            if (!servers) {
                capped = false;  // next pattern would equal this one
                break;
            }
            auto [from, to] = *servers;
            auto [costly_user, economic_user] = costly_economic_users(
                current_solution.allocation.bandwidth_hz,
                current.groups[static_cast<std::size_t>(from)]);
            int user = stage == 1 ? costly_user : economic_user;

            move_user(current, user, from, to);
            current_solution = sroa(s, current, cfg.solver);
            double objective =
                current_solution.feasible ? current_solution.objective : kInf;
            if (objective < result.best_objective) {
                result.best_assignment = current;
                result.best_objective = objective;
                result.best_solution = current_solution;
            }
            ++step;
            result.trace.push_back(
                TsiaMove{step, stage, from, to, user, objective, result.best_objective});

            if (!seen.insert(canonical(current, s.n_users())).second) {
                capped = false;  // pattern revisited: the stage has cycled
                break;
            }
        }
        if (capped) result.converged_by = TsiaStop::IterationCap;
    }
    return result;
}

}  // namespace hflopt
