#pragma once

#include <stdexcept>
#include <utility>
#include <vector>

#include "hflopt/scenario.hpp"

namespace hflopt {

// Per-user decision variables plus the derived per-edge bandwidth split.
struct Allocation {
    std::vector<double> bandwidth_hz;       // b_n
    std::vector<double> cpu_hz;             // f_n
    std::vector<double> power_w;            // p_n
    std::vector<double> edge_bandwidth_hz;  // B_m = sum of b_n over the group
};

// Requesting a computation at zero CPU frequency: the delay is unbounded
// rather than the inputs being malformed.
struct InfiniteDelayError : std::domain_error {
    using std::domain_error::domain_error;
};

// A transmission at non-positive rate can never complete.
struct InfeasibleRateError : std::domain_error {
    using std::domain_error::domain_error;
};

struct CostReport {
    struct PerUser {
        double t_cmp = 0, e_cmp = 0;  // computation per edge iteration
        double t_com = 0, e_com = 0;  // upload per edge iteration
    };
    struct PerEdge {
        double t_edge = 0, e_edge = 0;    // K edge iterations (straggler time, summed energy)
        double t_cloud = 0, e_cloud = 0;  // one cloud upload per global iteration
        double weighted_cost = 0;         // R_m = (E_cloud+E_edge) + lambda (T_cloud+T_edge)
    };
    std::vector<PerUser> users;
    std::vector<PerEdge> edges;
    double t_round = 0, e_round = 0;  // per global iteration
    double t_sum = 0, e_sum = 0;      // over all I global iterations
    double objective = 0;             // R = E_sum + lambda T_sum
};

// Time and energy for one edge iteration of local training (L passes over
// D_n samples). f = 0 raises InfiniteDelayError; zero work returns (0, 0).
std::pair<double, double> local_cost(const User& u, double f_hz, int local_iters,
                                     double alpha);

// Shannon rate over a dedicated band: b log2(1 + g p / (N0 b)).
double tx_rate(double b_hz, double p_w, double gain, double n0_w_hz);

// Upload time and energy for one model of `model_bits` at a fixed rate.
std::pair<double, double> comm_cost(double model_bits, double rate_bps, double p_w);

// (T_m, E_m) over K edge iterations: slowest user bounds the time, energies
// add. Empty groups cost nothing.
std::pair<double, double> edge_round_cost(const Scenario& s, const Assignment& a,
                                          const Allocation& x, int edge);

// Full evaluation of a (scenario, assignment, allocation) triple.
CostReport total_cost(const Scenario& s, const Assignment& a, const Allocation& x);

}  // namespace hflopt
