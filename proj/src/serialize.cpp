#include "hflopt/serialize.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace hflopt {

namespace {

using nlohmann::json;

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void check_schema(const json& j, const char* expected) {
    if (!j.contains("schema") || j.at("schema").get<std::string>() != expected)
        throw std::runtime_error(std::string("document schema mismatch, expected ") +
                                 expected);
}

json allocation_to_json(const Allocation& x) {
    return json{{"bandwidth_hz", x.bandwidth_hz},
                {"cpu_hz", x.cpu_hz},
                {"power_w", x.power_w},
                {"edge_bandwidth_hz", x.edge_bandwidth_hz}};
}

json totals_to_json(const CostReport& r) {
    return json{{"t_round_s", r.t_round},
                {"e_round_j", r.e_round},
                {"t_sum_s", r.t_sum},
                {"e_sum_j", r.e_sum},
                {"objective", r.objective}};
}

}  // namespace

std::string scenario_to_json(const Scenario& s) {
    json users = json::array();
    for (const auto& u : s.users)
        users.push_back(json{{"id", u.id},
                             {"samples", u.samples},
                             {"cycles_per_sample", u.cycles_per_sample},
                             {"f_max_hz", u.f_max_hz},
                             {"p_max_w", u.p_max_w},
                             {"position_m", u.position_m}});
    json edges = json::array();
    for (const auto& e : s.edges)
        edges.push_back(json{{"id", e.id},
                             {"position_m", e.position_m},
                             {"cloud_rate_bps", e.cloud_rate_bps},
                             {"cloud_power_w", e.cloud_power_w}});

    json doc{
        {"schema", kScenarioSchema},
        {"units",
         {{"bandwidth", "Hz"},
          {"power", "W"},
          {"model_size", "bit"},
          {"noise_density", "W/Hz"},
          {"position", "m"},
          {"cpu_frequency", "Hz"},
          {"time", "s"},
          {"energy", "J"}}},
        {"params",
         {{"total_bandwidth_hz", s.params.total_bandwidth_hz},
          {"importance_weight", s.params.importance_weight},
          {"global_iters", s.params.global_iters},
          {"edge_iters", s.params.edge_iters},
          {"local_iters", s.params.local_iters},
          {"model_size_bits", s.params.model_size_bits},
          {"capacitance_coeff", s.params.capacitance_coeff},
          {"noise_density_w_hz", s.params.noise_density_w_hz}}},
        {"users", users},
        {"edges", edges},
        {"gains", s.gain},
    };
    return doc.dump(2) + "\n";
}

Scenario scenario_from_json(const std::string& text) {
    json doc = json::parse(text);
    check_schema(doc, kScenarioSchema);
    Scenario s;
    const auto& p = doc.at("params");
    s.params.total_bandwidth_hz = p.at("total_bandwidth_hz").get<double>();
    s.params.importance_weight = p.at("importance_weight").get<double>();
    s.params.global_iters = p.at("global_iters").get<int>();
    s.params.edge_iters = p.at("edge_iters").get<int>();
    s.params.local_iters = p.at("local_iters").get<int>();
    s.params.model_size_bits = p.at("model_size_bits").get<double>();
    s.params.capacitance_coeff = p.at("capacitance_coeff").get<double>();
    s.params.noise_density_w_hz = p.at("noise_density_w_hz").get<double>();
    for (const auto& ju : doc.at("users")) {
        User u;
        u.id = ju.at("id").get<int>();
        u.samples = ju.at("samples").get<int>();
        u.cycles_per_sample = ju.at("cycles_per_sample").get<double>();
        u.f_max_hz = ju.at("f_max_hz").get<double>();
        u.p_max_w = ju.at("p_max_w").get<double>();
        u.position_m = ju.at("position_m").get<std::array<double, 2>>();
        s.users.push_back(u);
    }
    for (const auto& je : doc.at("edges")) {
        EdgeServer e;
        e.id = je.at("id").get<int>();
        e.position_m = je.at("position_m").get<std::array<double, 2>>();
        e.cloud_rate_bps = je.at("cloud_rate_bps").get<double>();
        e.cloud_power_w = je.at("cloud_power_w").get<double>();
        s.edges.push_back(e);
    }
    s.gain = doc.at("gains").get<std::vector<std::vector<double>>>();
    s.validate();
    return s;
}

void save_scenario(const Scenario& s, const std::string& path) {
    write_text_file(path, scenario_to_json(s));
}

Scenario load_scenario(const std::string& path) {
    return scenario_from_json(read_text_file(path));
}

std::string sroa_result_to_json(const SroaResult& r) {
    json doc{
        {"schema", kSroaResultSchema},
        {"feasible", r.feasible},
        {"objective", r.objective},
        {"t_star_s", r.t_star_s},
        {"iterations",
         {{"t_steps", r.iterations.t_steps},
          {"p_steps", r.iterations.p_steps},
          {"f_steps", r.iterations.f_steps},
          {"b_steps", r.iterations.b_steps}}},
    };
    if (r.feasible) {
        doc["allocation"] = allocation_to_json(r.allocation);
        doc["totals"] = totals_to_json(r.report);
    }
    return doc.dump(2) + "\n";
}

std::string tsia_result_to_json(const TsiaResult& r) {
    json doc{
        {"schema", kTsiaResultSchema},
        {"feasible", r.best_solution.feasible},
        {"objective", r.best_objective},
        {"converged_by",
         r.converged_by == TsiaStop::PatternRepeat ? "pattern-repeat" : "iteration-cap"},
        {"moves", r.trace.size()},
        {"assignment", r.best_assignment.groups},
    };
    if (r.best_solution.feasible) {
        doc["allocation"] = allocation_to_json(r.best_solution.allocation);
        doc["totals"] = totals_to_json(r.best_solution.report);
    }
    return doc.dump(2) + "\n";
}

std::string cost_report_to_csv(const CostReport& report) {
    std::ostringstream out;
    out << "row,id,t_cmp_s,e_cmp_j,t_com_s,e_com_j,t_edge_s,e_edge_j,t_cloud_s,"
           "e_cloud_j,weighted_cost,t_sum_s,e_sum_j,objective\n";
    for (std::size_t n = 0; n < report.users.size(); ++n) {
        const auto& u = report.users[n];
        out << "user," << n << ',' << fmt(u.t_cmp) << ',' << fmt(u.e_cmp) << ','
            << fmt(u.t_com) << ',' << fmt(u.e_com) << ",,,,,,,,\n";
    }
    for (std::size_t m = 0; m < report.edges.size(); ++m) {
        const auto& e = report.edges[m];
        out << "edge," << m << ",,,,," << fmt(e.t_edge) << ',' << fmt(e.e_edge) << ','
            << fmt(e.t_cloud) << ',' << fmt(e.e_cloud) << ',' << fmt(e.weighted_cost)
            << ",,,\n";
    }
    out << "total,,,,,,,,,,," << fmt(report.t_sum) << ',' << fmt(report.e_sum) << ','
        << fmt(report.objective) << "\n";
    return out.str();
}

std::string tsia_trace_to_csv(const std::vector<TsiaMove>& trace) {
    std::ostringstream out;
    out << "q,stage,m_plus,m_minus,user,R,R_star\n";
    for (const auto& mv : trace)
        out << mv.step << ',' << mv.stage << ',' << mv.from_edge << ',' << mv.to_edge << ','
            << mv.user << ',' << fmt(mv.objective) << ',' << fmt(mv.best_objective) << "\n";
    return out.str();
}

std::string sweep_to_csv(std::vector<SweepRow> rows) {
    std::sort(rows.begin(), rows.end(),
              [](const SweepRow& a, const SweepRow& b) { return a.lambda < b.lambda; });
    std::ostringstream out;
    out << "lambda,feasible,objective,e_sum_j,t_sum_s\n";
    for (const auto& r : rows) {
        out << fmt(r.lambda) << ',' << (r.feasible ? 1 : 0) << ',';
        if (r.feasible)
            out << fmt(r.objective) << ',' << fmt(r.e_sum) << ',' << fmt(r.t_sum);
        else
            out << ",,";
        out << "\n";
    }
    return out.str();
}

std::string loss_trajectory_to_csv(const std::vector<double>& losses) {
    std::ostringstream out;
    out << "global_iter,loss\n";
    for (std::size_t i = 0; i < losses.size(); ++i)
        out << (i + 1) << ',' << fmt(losses[i]) << "\n";
    return out.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    f << content;
    if (!f) throw std::runtime_error("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for reading: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

}  // namespace hflopt
