// Command-line front end: scenario generation, resource allocation, user
// assignment search, lambda sweeps, and the synthetic training simulator.
#include <atomic>
#include <cstdint>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "hflopt/hfl_sim.hpp"
#include "hflopt/scenario.hpp"
#include "hflopt/serialize.hpp"
#include "hflopt/sroa.hpp"
#include "hflopt/tsia.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitInfeasible = 2;

struct ToleranceFlags {
    double all = -1;
    double f = -1, p = -1, t = -1, b = -1;
    int max_iters = -1;

    void attach(CLI::App* cmd) {
        cmd->add_option("--tol", all, "Relative tolerance for every solver loop");
        cmd->add_option("--tol-f", f, "Override: CPU frequency loop tolerance");
        cmd->add_option("--tol-p", p, "Override: transmit power loop tolerance");
        cmd->add_option("--tol-t", t, "Override: deadline loop tolerance");
        cmd->add_option("--tol-b", b, "Override: bandwidth search tolerance");
        cmd->add_option("--max-iters", max_iters, "Safety cap per solver loop");
    }

    hflopt::SolverConfig build() const {
        hflopt::SolverConfig cfg;
        if (all > 0) cfg.tol_f = cfg.tol_p = cfg.tol_t = cfg.tol_b = all;
        if (f > 0) cfg.tol_f = f;
        if (p > 0) cfg.tol_p = p;
        if (t > 0) cfg.tol_t = t;
        if (b > 0) cfg.tol_b = b;
        if (max_iters > 0) cfg.max_iters = max_iters;
        return cfg;
    }
};

std::string join_path(const std::string& dir, const std::string& name) {
    if (dir.empty()) return name;
    if (dir.back() == '/') return dir + name;
    return dir + "/" + name;
}

hflopt::Scenario load_with_lambda(const std::string& path, double lambda_override) {
    hflopt::Scenario s = hflopt::load_scenario(path);
    if (lambda_override > 0) s.params.importance_weight = lambda_override;
    return s;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Energy/latency cost optimiser for hierarchical federated learning "
                 "over a shared wireless uplink"};
    app.require_subcommand(1);

    // ---- generate ----
    auto* gen = app.add_subcommand("generate", "Generate a randomized deployment");
    std::uint64_t seed = 1;
    int n_users = 50, n_edges = 5;
    std::string out_dir;
    std::string gen_out;
    std::vector<std::string> overrides;
    std::string noise_unit = "dbm_per_hz";
    gen->add_option("--seed", seed, "RNG seed");
    gen->add_option("--users", n_users, "Number of mobile users")->check(CLI::PositiveNumber);
    gen->add_option("--edges", n_edges, "Number of edge servers")->check(CLI::PositiveNumber);
    gen->add_option("--out", gen_out, "Output scenario path");
    gen->add_option("--out-dir", out_dir, "Directory for default-named outputs");
    gen->add_option("--set", overrides, "Generator override key=value (repeatable)");
    gen->add_option("--n0-unit", noise_unit, "Noise density unit: dbm_per_hz | dbm_per_mhz")
        ->check(CLI::IsMember({"dbm_per_hz", "dbm_per_mhz"}));

    // ---- sroa ----
    auto* sroa_cmd = app.add_subcommand("sroa", "Resource allocation for a fixed assignment");
    std::string scenario_path, result_out, report_out;
    double lambda_override = -1;
    ToleranceFlags sroa_tols;
    sroa_cmd->add_option("--scenario", scenario_path, "Scenario document")->required();
    sroa_cmd->add_option("--out", result_out, "Result document path");
    sroa_cmd->add_option("--out-dir", out_dir, "Directory for default-named outputs");
    sroa_cmd->add_option("--report", report_out, "Also write the per-user/per-edge cost CSV");
    sroa_cmd->add_option("--lambda", lambda_override, "Override the scenario importance weight");
    sroa_tols.attach(sroa_cmd);

    // ---- tsia ----
    auto* tsia_cmd = app.add_subcommand("tsia", "Two-stage user assignment search");
    std::string trace_out;
    int stage_cap = 500;
    ToleranceFlags tsia_tols;
    tsia_cmd->add_option("--scenario", scenario_path, "Scenario document")->required();
    tsia_cmd->add_option("--out", result_out, "Result document path");
    tsia_cmd->add_option("--out-dir", out_dir, "Directory for default-named outputs");
    tsia_cmd->add_option("--trace", trace_out, "Also write the per-move trace CSV");
    tsia_cmd->add_option("--lambda", lambda_override, "Override the scenario importance weight");
    tsia_cmd->add_option("--stage-cap", stage_cap, "Iteration cap per stage");
    tsia_tols.attach(tsia_cmd);

    // ---- sweep ----
    auto* sweep_cmd = app.add_subcommand("sweep", "Solve across a list of lambda values");
    std::vector<double> lambdas;
    std::string sweep_out, assigner = "geo";
    int jobs = 1;
    ToleranceFlags sweep_tols;
    sweep_cmd->add_option("--scenario", scenario_path, "Scenario document")->required();
    sweep_cmd->add_option("--lambda", lambdas, "Importance weight (repeatable)")->required();
    sweep_cmd->add_option("--out", sweep_out, "Sweep CSV path");
    sweep_cmd->add_option("--out-dir", out_dir, "Directory for default-named outputs");
    sweep_cmd->add_option("--assigner", assigner, "geo (sroa on nearest-edge groups) | tsia")
        ->check(CLI::IsMember({"geo", "tsia"}));
    sweep_cmd->add_option("--jobs", jobs, "Concurrent sweep entries")->check(CLI::PositiveNumber);
    sweep_tols.attach(sweep_cmd);

    // ---- hfl-sim ----
    auto* sim_cmd = app.add_subcommand("hfl-sim", "Hierarchical training on synthetic tasks");
    std::string loss_out;
    int dim = 8, sim_iters = -1;
    double lr = 0.05, noise_std = 0.1;
    std::uint64_t task_seed = 7;
    sim_cmd->add_option("--scenario", scenario_path, "Scenario document")->required();
    sim_cmd->add_option("--out", loss_out, "Loss trajectory CSV path");
    sim_cmd->add_option("--out-dir", out_dir, "Directory for default-named outputs");
    sim_cmd->add_option("--dim", dim, "Model dimension")->check(CLI::PositiveNumber);
    sim_cmd->add_option("--lr", lr, "Learning rate")->check(CLI::PositiveNumber);
    sim_cmd->add_option("--noise", noise_std, "Label noise std");
    sim_cmd->add_option("--task-seed", task_seed, "Seed for the synthetic tasks");
    sim_cmd->add_option("--iters", sim_iters, "Global iterations (default: scenario I)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return e.get_exit_code() == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (gen->parsed()) {
            hflopt::ScenarioGenConfig cfg;
            if (noise_unit == "dbm_per_mhz") cfg.noise_unit = hflopt::NoiseUnit::DbmPerMhz;
            for (const auto& kv : overrides) {
                auto eq = kv.find('=');
                if (eq == std::string::npos)
                    throw std::invalid_argument("--set expects key=value, got: " + kv);
                cfg.set(kv.substr(0, eq), std::stod(kv.substr(eq + 1)));
            }
            auto scenario = hflopt::generate_scenario(seed, n_users, n_edges, cfg);
            if (gen_out.empty()) gen_out = join_path(out_dir, "scenario.json");
            hflopt::save_scenario(scenario, gen_out);
            std::cout << "wrote " << gen_out << "\n";
            return kExitOk;
        }

        if (sroa_cmd->parsed()) {
            auto scenario = load_with_lambda(scenario_path, lambda_override);
            auto assignment = hflopt::geo_initial_assignment(scenario);
            auto result = hflopt::sroa(scenario, assignment, sroa_tols.build());
            if (result_out.empty()) result_out = join_path(out_dir, "sroa_result.json");
            hflopt::write_text_file(result_out, hflopt::sroa_result_to_json(result));
            if (!report_out.empty())
                hflopt::write_text_file(report_out,
                                        hflopt::cost_report_to_csv(result.report));
            std::cout << "wrote " << result_out << "\n";
            return result.feasible ? kExitOk : kExitInfeasible;
        }

        if (tsia_cmd->parsed()) {
            auto scenario = load_with_lambda(scenario_path, lambda_override);
            hflopt::TsiaConfig cfg;
            cfg.solver = tsia_tols.build();
            cfg.stage_iteration_cap = stage_cap;
            auto result = hflopt::tsia(scenario, cfg);
            if (result_out.empty()) result_out = join_path(out_dir, "tsia_result.json");
            hflopt::write_text_file(result_out, hflopt::tsia_result_to_json(result));
            if (!trace_out.empty())
                hflopt::write_text_file(trace_out, hflopt::tsia_trace_to_csv(result.trace));
            std::cout << "wrote " << result_out << "\n";
            return result.best_solution.feasible ? kExitOk : kExitInfeasible;
        }

        if (sweep_cmd->parsed()) {
            if (lambdas.empty()) throw std::invalid_argument("empty lambda list");
            auto base = hflopt::load_scenario(scenario_path);
            std::vector<hflopt::SweepRow> rows(lambdas.size());
            std::atomic<std::size_t> next{0};
            auto worker = [&] {
                for (std::size_t i = next.fetch_add(1); i < lambdas.size();
                     i = next.fetch_add(1)) {
                    hflopt::Scenario scenario = base;
                    scenario.params.importance_weight = lambdas[i];
                    hflopt::SroaResult solved;
                    if (assigner == "tsia") {
                        hflopt::TsiaConfig cfg;
                        cfg.solver = sweep_tols.build();
                        solved = hflopt::tsia(scenario, cfg).best_solution;
                    } else {
                        solved = hflopt::sroa(scenario,
                                              hflopt::geo_initial_assignment(scenario),
                                              sweep_tols.build());
                    }
                    rows[i] = hflopt::SweepRow{lambdas[i], solved.feasible, solved.objective,
                                               solved.report.e_sum, solved.report.t_sum};
                }
            };
            std::vector<std::thread> pool;
            int thread_count = std::min<int>(jobs, static_cast<int>(lambdas.size()));
            for (int j = 1; j < thread_count; ++j) pool.emplace_back(worker);
            worker();
            for (auto& th : pool) th.join();

            if (sweep_out.empty()) sweep_out = join_path(out_dir, "sweep.csv");
            hflopt::write_text_file(sweep_out, hflopt::sweep_to_csv(rows));
            std::cout << "wrote " << sweep_out << "\n";
            bool any_infeasible = false;
            for (const auto& r : rows) any_infeasible |= !r.feasible;
            return any_infeasible ? kExitInfeasible : kExitOk;
        }

        if (sim_cmd->parsed()) {
            auto scenario = hflopt::load_scenario(scenario_path);
            auto assignment = hflopt::geo_initial_assignment(scenario);
            std::vector<int> samples;
            for (const auto& u : scenario.users) samples.push_back(u.samples);
            auto tasks = hflopt::make_synthetic_tasks(task_seed, samples, dim, noise_std);
            int iters = sim_iters > 0 ? sim_iters : scenario.params.global_iters;
            hflopt::WeightVector init(static_cast<std::size_t>(dim), 0.0);
            auto run = hflopt::run_hfl(tasks, assignment, iters, scenario.params.edge_iters,
                                       scenario.params.local_iters, lr, init);
            if (loss_out.empty()) loss_out = join_path(out_dir, "hfl_loss.csv");
            hflopt::write_text_file(loss_out,
                                    hflopt::loss_trajectory_to_csv(run.loss_per_global_iter));
            std::cout << "wrote " << loss_out << "\n";
            return kExitOk;
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
