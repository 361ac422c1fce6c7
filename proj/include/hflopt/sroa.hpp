#pragma once

#include <optional>
#include <vector>

#include "hflopt/cost_model.hpp"
#include "hflopt/scenario.hpp"

namespace hflopt {

struct SolverConfig {
    double tol_f = 1e-4;  // relative gap stop for the CPU-frequency loop
    double tol_p = 1e-4;  // ... transmit-power loop
    double tol_t = 1e-4;  // ... deadline loop
    double tol_b = 1e-4;  // ... per-user bandwidth search
    // Per-user bandwidth cap used by the bound initialisers and the inner
    // search; <= 0 means "use the total budget B".
    double b_max_hz = 0.0;

    enum class TBounds { Analytic, Explicit };
    TBounds t_bounds = TBounds::Analytic;
    double t_low_s = 0.0;  // used only with TBounds::Explicit
    double t_up_s = 0.0;

    int max_iters = 200;  // safety cap per loop

    void validate() const;
};

// Per-user constants of the transformed problem, fixed by (scenario,
// assignment). The whole-run view folds I and K into each term.
struct UserCoeffs {
    double cmp_energy_coeff = 0;  // (alpha/2) I K L c_n D_n; E_cmp(run) = coeff * f^2
    double total_cycles = 0;      // I K L c_n D_n;           T_cmp(run) = cycles / f
    double upload_bits = 0;       // I K s;                   T_com(run) = bits / rate
    double gain = 0;              // channel gain to the assigned edge
    double cloud_delay_s = 0;     // I * s / r_m of the assigned edge
    double f_max_hz = 0;
    double p_max_w = 0;
};

std::vector<UserCoeffs> derive_coeffs(const Scenario& s, const Assignment& a);

struct IterationCounts {
    long t_steps = 0;  // deadline bisection iterations
    long p_steps = 0;  // power loop iterations (summed over deadline steps)
    long f_steps = 0;  // frequency loop iterations (summed)
    long b_steps = 0;  // per-user bandwidth bisection steps (summed)
};

// Smallest bandwidth meeting the user's end-to-end deadline at fixed (f, p),
// found by bisection on the monotone rate b log2(1 + G/b) up to b_max.
// nullopt: the deadline is unreachable (no time left after computation and
// the cloud hop, or the required throughput exceeds what b_max supports).
std::optional<double> solve_b_for_deadline(double t_s, const UserCoeffs& u, double f_hz,
                                           double p_w, double n0_w_hz, double b_max_hz,
                                           double tol, int max_iters,
                                           long* steps = nullptr);

// Smallest CPU frequency that can meet the deadline at fixed p, reached in
// the limit of unbounded bandwidth (rate capped at G/ln2). nullopt: no
// frequency works at this deadline.
std::optional<double> f_lower_bound(double t_s, const UserCoeffs& u, double p_w,
                                    double n0_w_hz);

// Smallest transmit power that can meet the deadline, reached at b_max and
// f_max. nullopt: no power works at this deadline.
std::optional<double> p_lower_bound(double t_s, const UserCoeffs& u, double b_max_hz,
                                    double n0_w_hz);

// One evaluated point of the (b, f) stage.
struct BfPoint {
    std::vector<double> bandwidth_hz;
    std::vector<double> cpu_hz;
    double bandwidth_sum_hz = 0;
};

struct BfOutcome {
    BfPoint last;                       // the final bisection point (may overshoot B)
    std::optional<BfPoint> budget_fit;  // most recent point with sum(b) <= B
};

// Joint (b, f) optimisation at fixed (p, t): all users' frequencies move
// with a shared relative position between their per-user lower bounds and
// f_max, driven by the total bandwidth the deadline then requires.
// nullopt: some user cannot meet the deadline even at f_max with b_max.
std::optional<BfOutcome> optimize_bf(double t_s, const std::vector<double>& p_w,
                                     const std::vector<UserCoeffs>& users, double total_b_hz,
                                     double n0_w_hz, const SolverConfig& cfg,
                                     IterationCounts* counts = nullptr);

struct PbPoint {
    std::vector<double> power_w;
    BfPoint bf;
};

struct PbOutcome {
    PbPoint last;
    std::optional<PbPoint> budget_fit;
};

// Transmit-power optimisation at fixed t. Power moves between the analytic
// per-user lower bounds and p_max, shrinking whenever the (b, f) stage finds
// spare bandwidth. nullopt: the deadline is infeasible at any power.
std::optional<PbOutcome> optimize_p(double t_s, const std::vector<UserCoeffs>& users,
                                    double total_b_hz, double n0_w_hz,
                                    const SolverConfig& cfg,
                                    IterationCounts* counts = nullptr);

struct SroaResult {
    bool feasible = false;
    Allocation allocation;
    double t_star_s = 0;     // accepted whole-run deadline
    double objective = 0;    // R evaluated by the cost model on the allocation
    CostReport report;
    IterationCounts iterations;
};

// Full resource allocation for a fixed assignment: bisects the whole-run
// deadline t, re-optimising (p, b, f) at each midpoint, and returns the
// best-scoring feasible point seen.
SroaResult sroa(const Scenario& s, const Assignment& a, const SolverConfig& cfg = {});

}  // namespace hflopt
