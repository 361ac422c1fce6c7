#include "hflopt/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "hflopt/units.hpp"

namespace hflopt {

namespace {

void require(bool cond, const char* msg) {
    if (!cond) throw std::invalid_argument(msg);
}

}  // namespace

void SystemParams::validate() const {
    require(total_bandwidth_hz > 0, "total_bandwidth_hz must be > 0");
    require(importance_weight > 0, "importance_weight must be > 0");
    require(global_iters >= 1, "global_iters must be >= 1");
    require(edge_iters >= 1, "edge_iters must be >= 1");
    require(local_iters >= 1, "local_iters must be >= 1");
    require(model_size_bits > 0, "model_size_bits must be > 0");
    require(capacitance_coeff > 0, "capacitance_coeff must be > 0");
    require(noise_density_w_hz > 0, "noise_density_w_hz must be > 0");
}

void Scenario::validate() const {
    params.validate();
    require(!users.empty(), "scenario needs at least one user");
    require(!edges.empty(), "scenario needs at least one edge server");
    for (const auto& u : users) {
        require(u.samples >= 1, "user samples must be >= 1");
        require(u.cycles_per_sample > 0, "cycles_per_sample must be > 0");
        require(u.f_max_hz > 0, "f_max must be > 0");
        require(u.p_max_w > 0, "p_max must be > 0");
    }
    for (const auto& e : edges) {
        require(e.cloud_rate_bps > 0, "cloud_rate must be > 0");
        require(e.cloud_power_w >= 0, "cloud_power must be >= 0");
    }
    require(gain.size() == users.size(), "gain matrix row count mismatch");
    for (const auto& row : gain) {
        require(row.size() == edges.size(), "gain matrix column count mismatch");
        for (double g : row) require(g > 0, "channel gains must be > 0");
    }
}

void Assignment::validate(int n_users) const {
    std::vector<char> seen(static_cast<std::size_t>(n_users), 0);
    for (const auto& group : groups) {
        for (int n : group) {
            require(n >= 0 && n < n_users, "user index out of range");
            require(!seen[static_cast<std::size_t>(n)], "user assigned to two edges");
            seen[static_cast<std::size_t>(n)] = 1;
        }
    }
    for (char s : seen) require(s, "user missing from every group");
}

std::vector<int> Assignment::edge_of_user(int n_users) const {
    validate(n_users);
    std::vector<int> edge(static_cast<std::size_t>(n_users), -1);
    for (int m = 0; m < n_edges(); ++m)
        for (int n : groups[static_cast<std::size_t>(m)])
            edge[static_cast<std::size_t>(n)] = m;
    return edge;
}

void ScenarioGenConfig::set(const std::string& key, double value) {
    if (key == "area_side_m") area_side_m = value;
    else if (key == "edge_bandwidth_min_hz") edge_bandwidth_min_hz = value;
    else if (key == "edge_bandwidth_max_hz") edge_bandwidth_max_hz = value;
    else if (key == "pathloss_fixed_db") pathloss_fixed_db = value;
    else if (key == "pathloss_per_decade_db") pathloss_per_decade_db = value;
    else if (key == "shadow_sigma_db") shadow_sigma_db = value;
    else if (key == "min_distance_m") min_distance_m = value;
    else if (key == "cycles_min") cycles_min = value;
    else if (key == "cycles_max") cycles_max = value;
    else if (key == "samples_min") samples_min = static_cast<int>(value);
    else if (key == "samples_max") samples_max = static_cast<int>(value);
    else if (key == "f_max_hz") f_max_hz = value;
    else if (key == "p_max_dbm") p_max_dbm = value;
    else if (key == "alpha") alpha = value;
    else if (key == "noise_density_dbm") noise_density_dbm = value;
    else if (key == "lambda") lambda = value;
    else if (key == "global_iters") global_iters = static_cast<int>(value);
    else if (key == "edge_iters") edge_iters = static_cast<int>(value);
    else if (key == "local_iters") local_iters = static_cast<int>(value);
    else if (key == "model_size_bits") model_size_bits = value;
    else if (key == "cloud_rate_bps") cloud_rate_bps = value;
    else if (key == "cloud_power_w") cloud_power_w = value;
    else throw std::invalid_argument("unknown scenario override: " + key);
}

void ScenarioGenConfig::validate() const {
    require(area_side_m > 0, "area_side_m must be > 0");
    require(edge_bandwidth_min_hz > 0 && edge_bandwidth_max_hz >= edge_bandwidth_min_hz,
            "edge bandwidth range invalid");
    require(shadow_sigma_db >= 0, "shadow_sigma_db must be >= 0");
    require(min_distance_m > 0, "min_distance_m must be > 0");
    require(cycles_min > 0 && cycles_max >= cycles_min, "cycles range invalid");
    require(samples_min >= 1 && samples_max >= samples_min, "samples range invalid");
    require(f_max_hz > 0, "f_max_hz must be > 0");
    require(alpha > 0, "alpha must be > 0");
    require(lambda > 0, "lambda must be > 0");
    require(global_iters >= 1 && edge_iters >= 1 && local_iters >= 1,
            "iteration counts must be >= 1");
    require(model_size_bits > 0, "model_size_bits must be > 0");
    require(cloud_rate_bps > 0, "cloud_rate_bps must be > 0");
    require(cloud_power_w >= 0, "cloud_power_w must be >= 0");
}

double ScenarioGenConfig::noise_density_w_hz() const {
    double dbm_per_hz = noise_density_dbm;
    if (noise_unit == NoiseUnit::DbmPerMhz) dbm_per_hz -= 60.0;  // spread over 10^6 Hz
    return dbm_to_watt(dbm_per_hz);
}

double ScenarioGenConfig::p_max_w() const { return dbm_to_watt(p_max_dbm); }

double path_loss_db(double distance_m, const ScenarioGenConfig& cfg) {
    double d_km = std::max(distance_m, cfg.min_distance_m) / 1000.0;
    return cfg.pathloss_fixed_db + cfg.pathloss_per_decade_db * std::log10(d_km);
}

Scenario generate_scenario(std::uint64_t seed, int n_users, int n_edges,
                           const ScenarioGenConfig& cfg) {
    require(n_users >= 1, "n_users must be >= 1");
    require(n_edges >= 1, "n_edges must be >= 1");
    cfg.validate();

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> coord(0.0, cfg.area_side_m);
    std::uniform_real_distribution<double> cycles(cfg.cycles_min, cfg.cycles_max);
    std::uniform_int_distribution<int> samples(cfg.samples_min, cfg.samples_max);
    std::uniform_real_distribution<double> edge_bw(cfg.edge_bandwidth_min_hz,
                                                   cfg.edge_bandwidth_max_hz);
    std::normal_distribution<double> shadow(0.0, cfg.shadow_sigma_db);

    Scenario s;
    s.users.reserve(static_cast<std::size_t>(n_users));
    for (int n = 0; n < n_users; ++n) {
        User u;
        u.id = n;
        u.position_m = {coord(rng), coord(rng)};
        u.cycles_per_sample = cycles(rng);
        u.samples = samples(rng);
        u.f_max_hz = cfg.f_max_hz;
        u.p_max_w = cfg.p_max_w();
        s.users.push_back(u);
    }

    double total_bandwidth = 0;
    s.edges.reserve(static_cast<std::size_t>(n_edges));
    for (int m = 0; m < n_edges; ++m) {
        EdgeServer e;
        e.id = m;
        e.position_m = {coord(rng), coord(rng)};
        e.cloud_rate_bps = cfg.cloud_rate_bps;
        e.cloud_power_w = cfg.cloud_power_w;
        s.edges.push_back(e);
        total_bandwidth += edge_bw(rng);
    }

    s.gain.assign(static_cast<std::size_t>(n_users),
                  std::vector<double>(static_cast<std::size_t>(n_edges), 0.0));
    for (int n = 0; n < n_users; ++n) {
        for (int m = 0; m < n_edges; ++m) {
            double dx = s.users[static_cast<std::size_t>(n)].position_m[0] -
                        s.edges[static_cast<std::size_t>(m)].position_m[0];
            double dy = s.users[static_cast<std::size_t>(n)].position_m[1] -
                        s.edges[static_cast<std::size_t>(m)].position_m[1];
            double loss_db = path_loss_db(std::hypot(dx, dy), cfg);
            if (cfg.shadow_sigma_db > 0) loss_db += shadow(rng);
            s.gain[static_cast<std::size_t>(n)][static_cast<std::size_t>(m)] =
                db_to_linear(-loss_db);
        }
    }

    s.params.total_bandwidth_hz = total_bandwidth;
    s.params.importance_weight = cfg.lambda;
    s.params.global_iters = cfg.global_iters;
    s.params.edge_iters = cfg.edge_iters;
    s.params.local_iters = cfg.local_iters;
    s.params.model_size_bits = cfg.model_size_bits;
    s.params.capacitance_coeff = cfg.alpha;
    s.params.noise_density_w_hz = cfg.noise_density_w_hz();

    s.validate();
    return s;
}

Assignment geo_initial_assignment(const Scenario& s) {
    s.validate();
    Assignment a;
    a.groups.assign(static_cast<std::size_t>(s.n_edges()), {});
    for (const auto& u : s.users) {
        int best = 0;
        double best_d2 = std::numeric_limits<double>::infinity();
        for (int m = 0; m < s.n_edges(); ++m) {
            double dx = u.position_m[0] - s.edges[static_cast<std::size_t>(m)].position_m[0];
            double dy = u.position_m[1] - s.edges[static_cast<std::size_t>(m)].position_m[1];
            double d2 = dx * dx + dy * dy;
            if (d2 < best_d2) {
                best_d2 = d2;
                best = m;
            }
        }
        a.groups[static_cast<std::size_t>(best)].push_back(u.id);
    }
    for (auto& group : a.groups) std::sort(group.begin(), group.end());
    return a;
}

}  // namespace hflopt
