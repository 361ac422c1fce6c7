#include "hflopt/sroa.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace hflopt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Loop contracts that must hold up to solver noise; a violation is a logic
// bug, not an infeasible instance.
void ensure(bool cond, const char* msg) {
    if (!cond) throw std::logic_error(msg);
}

// Whole-run achievable rate at bandwidth b: b log2(1 + G/b), G = p h / N0.
// Strictly increasing in b, bounded above by G/ln2.
double spectral_rate(double b_hz, double snr_scale) {
    return b_hz * std::log1p(snr_scale / b_hz) / std::numbers::ln2;
}

double snr_scale(const UserCoeffs& u, double p_w, double n0) { return p_w * u.gain / n0; }

struct LinkedSums {
    // most recent bandwidth sums observed at the moving bounds of a
    // bisection; +inf marks an infeasible side
    double at_low = kInf;
    double at_up = kInf;
};

void check_monotone(const LinkedSums& s, double mid_sum, double rel_tol, const char* who) {
    if (std::isfinite(s.at_low))
        ensure(mid_sum <= s.at_low * (1.0 + rel_tol), who);
    if (std::isfinite(s.at_up) && std::isfinite(mid_sum))
        ensure(mid_sum >= s.at_up * (1.0 - rel_tol), who);
}

}  // namespace

void SolverConfig::validate() const {
    for (double tol : {tol_f, tol_p, tol_t, tol_b})
        if (!(tol > 0 && tol < 1))
            throw std::invalid_argument("solver tolerances must lie in (0, 1)");
    if (max_iters < 1) throw std::invalid_argument("max_iters must be >= 1");
    if (t_bounds == TBounds::Explicit && !(t_low_s > 0 && t_up_s > t_low_s))
        throw std::invalid_argument("explicit t bounds must satisfy 0 < t_low < t_up");
}

std::vector<UserCoeffs> derive_coeffs(const Scenario& s, const Assignment& a) {
    std::vector<int> edge = a.edge_of_user(s.n_users());
    double iters = static_cast<double>(s.params.global_iters);
    double ik = iters * static_cast<double>(s.params.edge_iters);
    double ikl = ik * static_cast<double>(s.params.local_iters);

    std::vector<UserCoeffs> out(s.users.size());
    for (std::size_t n = 0; n < s.users.size(); ++n) {
        const User& u = s.users[n];
        auto m = static_cast<std::size_t>(edge[n]);
        UserCoeffs& c = out[n];
        double work = u.cycles_per_sample * static_cast<double>(u.samples);
        c.cmp_energy_coeff = 0.5 * s.params.capacitance_coeff * ikl * work;
        c.total_cycles = ikl * work;
        c.upload_bits = ik * s.params.model_size_bits;
        c.gain = s.gain[n][m];
        c.cloud_delay_s = iters * s.params.model_size_bits / s.edges[m].cloud_rate_bps;
        c.f_max_hz = u.f_max_hz;
        c.p_max_w = u.p_max_w;
    }
    return out;
}

std::optional<double> solve_b_for_deadline(double t_s, const UserCoeffs& u, double f_hz,
                                           double p_w, double n0_w_hz, double b_max_hz,
                                           double tol, int max_iters, long* steps) {
    double comm_window = t_s - u.cloud_delay_s - u.total_cycles / f_hz;
    if (!(comm_window > 0)) return std::nullopt;
    double required = u.upload_bits / comm_window;
    double g = snr_scale(u, p_w, n0_w_hz);
    if (spectral_rate(b_max_hz, g) < required) return std::nullopt;

    double lo = 0.0, hi = b_max_hz;
    for (int i = 0; i < max_iters && (hi - lo) / hi > tol; ++i) {
        double mid = 0.5 * (lo + hi);
        if (spectral_rate(mid, g) >= required)
            hi = mid;
        else
            lo = mid;
        if (steps) ++*steps;
    }
    return hi;  // feasible side: the deadline holds at hi
}

std::optional<double> f_lower_bound(double t_s, const UserCoeffs& u, double p_w,
                                    double n0_w_hz) {
    double g = snr_scale(u, p_w, n0_w_hz);
    if (!(g > 0)) return std::nullopt;
    // even unbounded bandwidth cannot push the rate past G/ln2
    double denom = t_s - u.cloud_delay_s - std::numbers::ln2 * u.upload_bits / g;
    if (!(denom > 0)) return std::nullopt;
    return std::max(0.0, u.total_cycles / denom);
}

std::optional<double> p_lower_bound(double t_s, const UserCoeffs& u, double b_max_hz,
                                    double n0_w_hz) {
    double avail = t_s - u.cloud_delay_s - u.total_cycles / u.f_max_hz;
    if (!(avail > 0)) return std::nullopt;
    double se_needed = u.upload_bits / (b_max_hz * avail);  // bits per second per Hz
    double scale = n0_w_hz * b_max_hz / u.gain;
    return std::max(0.0, scale * std::expm1(se_needed * std::numbers::ln2));
}

std::optional<BfOutcome> optimize_bf(double t_s, const std::vector<double>& p_w,
                                     const std::vector<UserCoeffs>& users, double total_b_hz,
                                     double n0_w_hz, const SolverConfig& cfg,
                                     IterationCounts* counts) {
    const std::size_t n = users.size();
    if (p_w.size() != n) throw std::invalid_argument("power vector size mismatch");
    double b_max = cfg.b_max_hz > 0 ? cfg.b_max_hz : total_b_hz;

    std::vector<double> f_low(n), f_up(n);
    for (std::size_t i = 0; i < n; ++i) {
        auto lb = f_lower_bound(t_s, users[i], p_w[i], n0_w_hz);
        if (!lb || *lb > users[i].f_max_hz) return std::nullopt;
        f_low[i] = *lb;
        f_up[i] = users[i].f_max_hz;
    }

    long* b_steps = counts ? &counts->b_steps : nullptr;
    auto evaluate = [&](const std::vector<double>& f) -> std::optional<BfPoint> {
        BfPoint pt;
        pt.bandwidth_hz.resize(n);
        pt.cpu_hz = f;
        for (std::size_t i = 0; i < n; ++i) {
            auto b = solve_b_for_deadline(t_s, users[i], f[i], p_w[i], n0_w_hz, b_max,
                                          cfg.tol_b, cfg.max_iters, b_steps);
            if (!b) return std::nullopt;
            pt.bandwidth_hz[i] = *b;
            pt.bandwidth_sum_hz += *b;
        }
        return pt;
    };

    // The deadline always holds at f_max (checked above), so this evaluation
    // cannot fail and seeds the result in case the loop converges instantly.
    auto at_fmax = evaluate(f_up);
    if (!at_fmax) return std::nullopt;

    BfOutcome out;
    out.last = *at_fmax;
    if (at_fmax->bandwidth_sum_hz <= total_b_hz) out.budget_fit = *at_fmax;

    LinkedSums sums;
    sums.at_up = at_fmax->bandwidth_sum_hz;
    double contract_tol = std::max(1e-9, 10.0 * cfg.tol_b);

    auto gap = [&] {
        double worst = 0;
        for (std::size_t i = 0; i < n; ++i)
            worst = std::max(worst, (f_up[i] - f_low[i]) / f_up[i]);
        return worst;
    };

    std::vector<double> f_mid(n);
    for (int it = 0; it < cfg.max_iters && gap() > cfg.tol_f; ++it) {
        if (counts) ++counts->f_steps;
        for (std::size_t i = 0; i < n; ++i) f_mid[i] = 0.5 * (f_low[i] + f_up[i]);
        auto mid = evaluate(f_mid);
        if (!mid) {
            // some user cannot reach the deadline this slow; speed back up
            f_low = f_mid;
            sums.at_low = kInf;
            continue;
        }
        check_monotone(sums, mid->bandwidth_sum_hz, contract_tol,
                       "bandwidth sum must be non-increasing in the shared f position");
        out.last = *mid;
        if (mid->bandwidth_sum_hz <= total_b_hz) out.budget_fit = *mid;
        if (mid->bandwidth_sum_hz < total_b_hz) {
            f_up = f_mid;
            sums.at_up = mid->bandwidth_sum_hz;
        } else if (mid->bandwidth_sum_hz > total_b_hz) {
            f_low = f_mid;
            sums.at_low = mid->bandwidth_sum_hz;
        } else {
            break;
        }
    }
    return out;
}

std::optional<PbOutcome> optimize_p(double t_s, const std::vector<UserCoeffs>& users,
                                    double total_b_hz, double n0_w_hz,
                                    const SolverConfig& cfg, IterationCounts* counts) {
    const std::size_t n = users.size();
    double b_max = cfg.b_max_hz > 0 ? cfg.b_max_hz : total_b_hz;

    std::vector<double> p_low(n), p_up(n);
    for (std::size_t i = 0; i < n; ++i) {
        auto lb = p_lower_bound(t_s, users[i], b_max, n0_w_hz);
        if (!lb || *lb > users[i].p_max_w) return std::nullopt;
        p_low[i] = *lb;
        p_up[i] = users[i].p_max_w;
    }

    auto gap = [&] {
        double worst = 0;
        for (std::size_t i = 0; i < n; ++i)
            worst = std::max(worst, (p_up[i] - p_low[i]) / p_up[i]);
        return worst;
    };

    std::optional<PbOutcome> out;
    LinkedSums sums;
    double contract_tol = std::max(1e-4, 100.0 * (cfg.tol_b + cfg.tol_f));

    std::vector<double> p_mid(n);
    int it = 0;
    do {
        if (counts) ++counts->p_steps;
        for (std::size_t i = 0; i < n; ++i) p_mid[i] = 0.5 * (p_low[i] + p_up[i]);
        auto bf = optimize_bf(t_s, p_mid, users, total_b_hz, n0_w_hz, cfg, counts);
        if (!bf) {
            // deadline unreachable at this power level (only possible when
            // called below the analytic bound); push the power up
            p_low = p_mid;
            sums.at_low = kInf;
            continue;
        }
        double sum = bf->last.bandwidth_sum_hz;
        check_monotone(sums, sum, contract_tol,
                       "bandwidth sum must be non-increasing in the shared p position");
        if (!out) out.emplace();
        out->last = PbPoint{p_mid, bf->last};
        if (bf->budget_fit) out->budget_fit = PbPoint{p_mid, *bf->budget_fit};
        if (sum < total_b_hz) {
            p_up = p_mid;
            sums.at_up = sum;
        } else if (sum > total_b_hz) {
            p_low = p_mid;
            sums.at_low = sum;
        } else {
            break;
        }
    } while (++it < cfg.max_iters && gap() > cfg.tol_p);

    return out;
}

namespace {

// Whole-run delay of one user at an explicit (b, f, p) point.
double user_delay(const UserCoeffs& u, double b, double f, double p, double n0) {
    return u.cloud_delay_s + u.total_cycles / f +
           u.upload_bits / spectral_rate(b, snr_scale(u, p, n0));
}

struct TBracket {
    double low = 0, up = 0;
    bool ok = false;
};

TBracket analytic_t_bounds(const std::vector<UserCoeffs>& users, double total_b_hz,
                           double n0) {
    TBracket tb;
    double equal_share = total_b_hz / static_cast<double>(users.size());
    for (const auto& u : users) {
        double cap_rate = snr_scale(u, u.p_max_w, n0) / std::numbers::ln2;
        if (!(cap_rate > 0)) return tb;
        // everything maxed out, bandwidth unbounded: hard floor on t
        double floor_t =
            u.cloud_delay_s + u.total_cycles / u.f_max_hz + u.upload_bits / cap_rate;
        // everything maxed out at an equal bandwidth split: achievable point
        double achieved =
            user_delay(u, equal_share, u.f_max_hz, u.p_max_w, n0);
        tb.low = std::max(tb.low, floor_t);
        tb.up = std::max(tb.up, achieved);
    }
    tb.up *= 10.0;  // generous headroom above the achievable point
    tb.ok = std::isfinite(tb.low) && std::isfinite(tb.up) && tb.up > tb.low && tb.low > 0;
    return tb;
}

}  // namespace

SroaResult sroa(const Scenario& s, const Assignment& a, const SolverConfig& cfg) {
    s.validate();
    a.validate(s.n_users());
    cfg.validate();

    SroaResult result;
    auto users = derive_coeffs(s, a);
    double total_b = s.params.total_bandwidth_hz;
    double n0 = s.params.noise_density_w_hz;
    double lambda = s.params.importance_weight;

    TBracket tb;
    if (cfg.t_bounds == SolverConfig::TBounds::Explicit) {
        tb.low = cfg.t_low_s;
        tb.up = cfg.t_up_s;
        tb.ok = true;
    } else {
        tb = analytic_t_bounds(users, total_b, n0);
    }
    if (!tb.ok) return result;  // degenerate instance: no finite bracket

    struct Best {
        Allocation alloc;
        double t = 0;
        double score = kInf;  // E_sum + lambda * t, as ranked inside the loop
    };
    std::optional<Best> best;

    auto build_allocation = [&](const PbPoint& pt) {
        Allocation x;
        x.bandwidth_hz = pt.bf.bandwidth_hz;
        x.cpu_hz = pt.bf.cpu_hz;
        x.power_w = pt.power_w;
        x.edge_bandwidth_hz.assign(a.groups.size(), 0.0);
        for (std::size_t m = 0; m < a.groups.size(); ++m)
            for (int u : a.groups[m])
                x.edge_bandwidth_hz[m] += x.bandwidth_hz[static_cast<std::size_t>(u)];
        return x;
    };

    double t_low = tb.low, t_up = tb.up;
    for (int it = 0; it < cfg.max_iters && (t_up - t_low) / t_up > cfg.tol_t; ++it) {
        ++result.iterations.t_steps;
        double t = 0.5 * (t_low + t_up);
        auto stage = optimize_p(t, users, total_b, n0, cfg, &result.iterations);
        if (!stage || !stage->budget_fit) {
            t_low = t;  // bandwidth cannot fit this deadline; relax it
            continue;
        }
        Allocation x = build_allocation(*stage->budget_fit);
        double e_sum = total_cost(s, a, x).e_sum;
        double score = e_sum + lambda * t;
        if (best && score > best->score) {
            t_low = t;
        } else {
            t_up = t;
            best = Best{std::move(x), t, score};
        }
    }

    if (!best) return result;

    result.feasible = true;
    result.allocation = std::move(best->alloc);
    result.t_star_s = best->t;
    result.report = total_cost(s, a, result.allocation);
    result.objective = result.report.objective;
    return result;
}

}  // namespace hflopt
