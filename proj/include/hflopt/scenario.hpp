#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace hflopt {

// Global constants of one deployment. All values in SI units.
struct SystemParams {
    double total_bandwidth_hz = 0;   // B, shared uplink budget across all edges
    double importance_weight = 1.0;  // lambda, weight of latency vs energy
    int global_iters = 1;            // I
    int edge_iters = 1;              // K
    int local_iters = 1;             // L
    double model_size_bits = 0;      // s
    double capacitance_coeff = 0;    // alpha; per-cycle energy is (alpha/2) f^2
    double noise_density_w_hz = 0;   // N0

    void validate() const;  // throws std::invalid_argument
};

struct User {
    int id = 0;
    int samples = 0;                // D_n
    double cycles_per_sample = 0;   // c_n
    double f_max_hz = 0;
    double p_max_w = 0;
    std::array<double, 2> position_m{0, 0};
};

struct EdgeServer {
    int id = 0;
    std::array<double, 2> position_m{0, 0};
    double cloud_rate_bps = 0;  // fixed backhaul rate to the cloud
    double cloud_power_w = 0;   // average transmit power for cloud uploads
};

struct Scenario {
    SystemParams params;
    std::vector<User> users;
    std::vector<EdgeServer> edges;
    // gain[n][m]: linear channel gain between user n and edge m
    std::vector<std::vector<double>> gain;

    int n_users() const { return static_cast<int>(users.size()); }
    int n_edges() const { return static_cast<int>(edges.size()); }
    void validate() const;
};

// Partition of users over edges. groups[m] holds sorted user ids; groups may
// be empty, but together they must cover every user exactly once.
struct Assignment {
    std::vector<std::vector<int>> groups;

    int n_edges() const { return static_cast<int>(groups.size()); }
    void validate(int n_users) const;
    // inverse map user -> edge; throws if the partition is invalid
    std::vector<int> edge_of_user(int n_users) const;
};

enum class NoiseUnit { DbmPerHz, DbmPerMhz };

// Deployment generator knobs. Defaults follow a dense urban uplink snapshot:
// 500 m square, 3GPP-style path loss 128.1 + 37.6 log10(d_km), 8 dB lognormal
// shadowing, 23 dBm user power cap, 5 GHz CPU cap.
struct ScenarioGenConfig {
    double area_side_m = 500.0;
    double edge_bandwidth_min_hz = 10e3;    // per-edge budget draw, summed into B
    double edge_bandwidth_max_hz = 1000e3;
    double pathloss_fixed_db = 128.1;
    double pathloss_per_decade_db = 37.6;   // per decade of distance in km
    double shadow_sigma_db = 8.0;
    double min_distance_m = 1.0;            // floor applied before the path loss
    double cycles_min = 1e4;                // c_n range, cycles per sample
    double cycles_max = 1e5;
    int samples_min = 150;                  // D_n range
    int samples_max = 220;
    double f_max_hz = 5e9;
    double p_max_dbm = 23.0;
    double alpha = 2e-28;
    double noise_density_dbm = -174.0;
    NoiseUnit noise_unit = NoiseUnit::DbmPerHz;
    double lambda = 1.0;
    int global_iters = 80;
    int edge_iters = 5;
    int local_iters = 5;
    double model_size_bits = 881.0 * 1024.0 * 8.0;  // 881 KiB model
    double cloud_rate_bps = 10e6;
    double cloud_power_w = 0.5;

    // Named override used by the CLI (--set key=value). Unknown keys throw.
    void set(const std::string& key, double value);
    void validate() const;

    double noise_density_w_hz() const;
    double p_max_w() const;
};

// dB path loss at a given distance, before shadowing.
double path_loss_db(double distance_m, const ScenarioGenConfig& cfg);

// Deterministic in (seed, n_users, n_edges, cfg). Users and edges are placed
// uniformly in the square (the cloud sits at its centre); channel gains are
// path loss plus one lognormal shadowing draw per (user, edge) pair, fixed
// for the lifetime of the scenario.
Scenario generate_scenario(std::uint64_t seed, int n_users, int n_edges,
                           const ScenarioGenConfig& cfg = {});

// Each user joins its Euclidean-nearest edge server; ties go to the lowest
// edge index.
Assignment geo_initial_assignment(const Scenario& s);

}  // namespace hflopt
