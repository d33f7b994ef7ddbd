// File formats: the JSON graph description, solve reports, and sweep rows.
//
// Graph description (UTF-8 JSON):
//   {"vertices":["a","b"],
//    "edges":[{"from":"a","to":"b","length":1.0}],
//    "halflines":[{"at":"b"}]}
// Parallel edges are repeated entries; a self-loop has from == to.
#pragma once

#include <string>

#include <nlohmann/json_fwd.hpp>

#include "graphnls/metric_graph.hpp"
#include "graphnls/solver.hpp"

namespace graphnls {

MetricGraph graph_from_json(const nlohmann::json& j);
MetricGraph load_graph(const std::string& path);
nlohmann::json graph_to_json(const MetricGraph& g);

nlohmann::json report_to_json(const SolveReport& report, const SolveConfig& cfg);
void write_report(const SolveReport& report, const SolveConfig& cfg, const std::string& path);

// One sweep row; the column set is frozen:
// mu,best_F,soliton_level,gap,verdict,core_mass_fraction,iters
struct SweepRow {
    double mu = 0.0;
    double best_F = 0.0;
    double soliton_level = 0.0;
    double gap = 0.0;
    Verdict verdict = Verdict::Inconclusive;
    double core_mass_fraction = 0.0;
    long iters = 0;
};

extern const char* kSweepCsvHeader;
std::string sweep_row_csv(const SweepRow& row);

}  // namespace graphnls
