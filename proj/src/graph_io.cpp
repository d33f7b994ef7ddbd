#include "graphnls/graph_io.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace graphnls {

MetricGraph graph_from_json(const nlohmann::json& j) {
    std::vector<std::string> ids;
    for (const auto& v : j.at("vertices")) ids.push_back(v.get<std::string>());

    const auto index_of = [&](const std::string& id) {
        for (size_t i = 0; i < ids.size(); ++i) {
            if (ids[i] == id) return static_cast<int>(i);
        }
        throw std::invalid_argument("graph file references unknown vertex '" + id + "'");
    };

    std::vector<BoundedEdge> edges;
    if (j.contains("edges")) {
        for (const auto& e : j.at("edges")) {
            BoundedEdge be;
            be.a = index_of(e.at("from").get<std::string>());
            be.b = index_of(e.at("to").get<std::string>());
            be.length = e.at("length").get<double>();
            edges.push_back(be);
        }
    }
    std::vector<int> anchors;
    if (j.contains("halflines")) {
        for (const auto& h : j.at("halflines")) {
            anchors.push_back(index_of(h.at("at").get<std::string>()));
        }
    }
    return MetricGraph(std::move(ids), std::move(edges), std::move(anchors));
}

MetricGraph load_graph(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open graph file " + path);
    nlohmann::json j;
    in >> j;
    return graph_from_json(j);
}

nlohmann::json graph_to_json(const MetricGraph& g) {
    nlohmann::json j;
    j["vertices"] = g.vertex_ids();
    j["edges"] = nlohmann::json::array();
    for (const BoundedEdge& e : g.edges()) {
        j["edges"].push_back({{"from", g.vertex_ids()[e.a]},
                              {"to", g.vertex_ids()[e.b]},
                              {"length", e.length}});
    }
    j["halflines"] = nlohmann::json::array();
    for (int a : g.halfline_anchors()) {
        j["halflines"].push_back({{"at", g.vertex_ids()[a]}});
    }
    return j;
}

nlohmann::json report_to_json(const SolveReport& report, const SolveConfig& cfg) {
    nlohmann::json j;
    j["graph"] = graph_to_json(report.best.grid->graph());
    j["params"] = {{"p", report.params.p},
                   {"q", report.params.q},
                   {"tau", report.params.tau},
                   {"mu", report.params.mu}};
    j["config"] = {{"grid_h", report.grid_used.h},
                   {"halfline_trunc", report.grid_used.halfline_length},
                   {"max_iters", cfg.max_iters},
                   {"tol", cfg.tol},
                   {"num_random_starts", cfg.num_random_starts},
                   {"seed", cfg.seed},
                   {"verdict_margin_frac", cfg.verdict_margin_frac},
                   {"core_escape_fraction", cfg.core_escape_fraction}};
    j["best_energy"] = report.breakdown.F;
    j["soliton_level"] = report.soliton_level;
    j["gap"] = report.gap;
    j["verdict"] = to_string(report.verdict);
    nlohmann::json starts = nlohmann::json::array();
    for (const StartOutcome& o : report.diagnostics.starts) {
        starts.push_back({{"kind", o.kind},
                          {"final_F", o.final_F},
                          {"gap", o.gap},
                          {"iters", o.iters},
                          {"converged", o.converged},
                          {"escape_probe_improved", o.escape_probe_improved}});
    }
    j["diagnostics"] = {
        {"core_mass_fraction", report.diagnostics.core_mass_fraction},
        {"sup_distance_to_vertex", report.diagnostics.sup_distance_to_vertex},
        {"monotonicity_violations", report.diagnostics.monotonicity_violations},
        {"energy_breakdown",
         {{"kinetic", report.breakdown.kinetic},
          {"bulk", report.breakdown.bulk},
          {"vertex", report.breakdown.vertex},
          {"mass", report.breakdown.mass}}},
        {"starts", starts}};
    return j;
}

void write_report(const SolveReport& report, const SolveConfig& cfg, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << report_to_json(report, cfg).dump(2) << '\n';
}

const char* kSweepCsvHeader = "mu,best_F,soliton_level,gap,verdict,core_mass_fraction,iters";

std::string sweep_row_csv(const SweepRow& row) {
    std::ostringstream os;
    os.precision(12);
    os << row.mu << ',' << row.best_F << ',' << row.soliton_level << ',' << row.gap << ','
       << to_string(row.verdict) << ',' << row.core_mass_fraction << ',' << row.iters;
    return os.str();
}

}  // namespace graphnls
