#include "hflopt/cost_model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hflopt {

std::pair<double, double> local_cost(const User& u, double f_hz, int local_iters,
                                     double alpha) {
    if (f_hz < 0) throw std::invalid_argument("cpu frequency must be >= 0");
    if (local_iters < 0) throw std::invalid_argument("local_iters must be >= 0");
    if (alpha <= 0) throw std::invalid_argument("alpha must be > 0");
    if (f_hz == 0) throw InfiniteDelayError("local computation at zero cpu frequency");
    double work = static_cast<double>(local_iters) * u.cycles_per_sample *
                  static_cast<double>(u.samples);
    double t = work / f_hz;
    double e = 0.5 * alpha * f_hz * f_hz * work;
    return {t, e};
}

double tx_rate(double b_hz, double p_w, double gain, double n0_w_hz) {
    if (b_hz <= 0) throw std::invalid_argument("bandwidth must be > 0");
    if (p_w < 0) throw std::invalid_argument("power must be >= 0");
    if (gain <= 0) throw std::invalid_argument("gain must be > 0");
    if (n0_w_hz <= 0) throw std::invalid_argument("noise density must be > 0");
    // log1p keeps precision when the per-Hz SNR is tiny
    return b_hz * std::log1p(gain * p_w / (n0_w_hz * b_hz)) / std::numbers::ln2;
}

std::pair<double, double> comm_cost(double model_bits, double rate_bps, double p_w) {
    if (model_bits < 0) throw std::invalid_argument("model size must be >= 0");
    if (p_w < 0) throw std::invalid_argument("power must be >= 0");
    if (rate_bps <= 0) throw InfeasibleRateError("transmission at non-positive rate");
    double t = model_bits / rate_bps;
    return {t, p_w * t};
}

std::pair<double, double> edge_round_cost(const Scenario& s, const Assignment& a,
                                          const Allocation& x, int edge) {
    const auto& group = a.groups.at(static_cast<std::size_t>(edge));
    double slowest = 0, energy = 0;
    for (int n : group) {
        auto idx = static_cast<std::size_t>(n);
        const User& u = s.users.at(idx);
        auto [t_cmp, e_cmp] =
            local_cost(u, x.cpu_hz.at(idx), s.params.local_iters, s.params.capacitance_coeff);
        double rate = tx_rate(x.bandwidth_hz.at(idx), x.power_w.at(idx),
                              s.gain[idx][static_cast<std::size_t>(edge)],
                              s.params.noise_density_w_hz);
        auto [t_com, e_com] = comm_cost(s.params.model_size_bits, rate, x.power_w.at(idx));
        slowest = std::max(slowest, t_cmp + t_com);
        energy += e_cmp + e_com;
    }
    double k = static_cast<double>(s.params.edge_iters);
    return {k * slowest, k * energy};
}

CostReport total_cost(const Scenario& s, const Assignment& a, const Allocation& x) {
    s.validate();
    a.validate(s.n_users());
    if (x.bandwidth_hz.size() != s.users.size() || x.cpu_hz.size() != s.users.size() ||
        x.power_w.size() != s.users.size())
        throw std::invalid_argument("allocation size mismatch");

    CostReport r;
    r.users.resize(s.users.size());
    r.edges.resize(s.edges.size());

    double lambda = s.params.importance_weight;
    double iters = static_cast<double>(s.params.global_iters);
    double k = static_cast<double>(s.params.edge_iters);

    for (int m = 0; m < s.n_edges(); ++m) {
        auto mi = static_cast<std::size_t>(m);
        const auto& group = a.groups[mi];
        auto& edge = r.edges[mi];

        double slowest = 0, energy = 0;
        for (int n : group) {
            auto ni = static_cast<std::size_t>(n);
            const User& u = s.users[ni];
            auto& per_user = r.users[ni];
            std::tie(per_user.t_cmp, per_user.e_cmp) = local_cost(
                u, x.cpu_hz[ni], s.params.local_iters, s.params.capacitance_coeff);
            double rate = tx_rate(x.bandwidth_hz[ni], x.power_w[ni], s.gain[ni][mi],
                                  s.params.noise_density_w_hz);
            std::tie(per_user.t_com, per_user.e_com) =
                comm_cost(s.params.model_size_bits, rate, x.power_w[ni]);
            slowest = std::max(slowest, per_user.t_cmp + per_user.t_com);
            energy += per_user.e_cmp + per_user.e_com;
        }
        edge.t_edge = k * slowest;
        edge.e_edge = k * energy;

        // an edge with no users has no model to forward
        if (!group.empty()) {
            const EdgeServer& es = s.edges[mi];
            edge.t_cloud = s.params.model_size_bits / es.cloud_rate_bps;
            edge.e_cloud = es.cloud_power_w * edge.t_cloud;
        }
        edge.weighted_cost =
            (edge.e_cloud + edge.e_edge) + lambda * (edge.t_cloud + edge.t_edge);

        r.t_round = std::max(r.t_round, edge.t_cloud + edge.t_edge);
        r.e_round += edge.e_cloud + edge.e_edge;
    }

    r.t_sum = iters * r.t_round;
    r.e_sum = iters * r.e_round;
    r.objective = r.e_sum + lambda * r.t_sum;
    return r;
}

}  // namespace hflopt
