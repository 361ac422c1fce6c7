#pragma once

#include <string>
#include <vector>

#include "hflopt/cost_model.hpp"
#include "hflopt/scenario.hpp"
#include "hflopt/sroa.hpp"
#include "hflopt/tsia.hpp"

namespace hflopt {

// Document schemas are versioned; loading a document with a different
// schema tag is a hard error (std::runtime_error).
inline constexpr const char* kScenarioSchema = "hflopt.scenario/1";
inline constexpr const char* kSroaResultSchema = "hflopt.sroa_result/1";
inline constexpr const char* kTsiaResultSchema = "hflopt.tsia_result/1";

std::string scenario_to_json(const Scenario& s);
Scenario scenario_from_json(const std::string& text);

void save_scenario(const Scenario& s, const std::string& path);
Scenario load_scenario(const std::string& path);

std::string sroa_result_to_json(const SroaResult& r);
std::string tsia_result_to_json(const TsiaResult& r);

// One row per user, one per edge, one totals row.
std::string cost_report_to_csv(const CostReport& report);

// Columns: q, stage, m_plus, m_minus, user, R, R_star.
std::string tsia_trace_to_csv(const std::vector<TsiaMove>& trace);

struct SweepRow {
    double lambda = 0;
    bool feasible = false;
    double objective = 0;
    double e_sum = 0;
    double t_sum = 0;
};

// Rows sorted by lambda ascending.
std::string sweep_to_csv(std::vector<SweepRow> rows);

// Columns: global_iter, loss.
std::string loss_trajectory_to_csv(const std::vector<double>& losses);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace hflopt
