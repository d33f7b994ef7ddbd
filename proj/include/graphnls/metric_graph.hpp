// Finite metric graphs with half-lines: combinatorial structure, lengths,
// topological predicates (trail condition, line / bubble-tower detection),
// and the named graph families used throughout the experiments.
#pragma once

#include <string>
#include <vector>

namespace graphnls {

struct BoundedEdge {
    int a = -1;
    int b = -1;          // a == b for a self-loop
    double length = 0.0;  // dimensionless length units, > 0
};

// Immutable after construction; safe to share across threads.
class MetricGraph {
  public:
    MetricGraph(std::vector<std::string> vertex_ids, std::vector<BoundedEdge> edges,
                std::vector<int> halfline_anchors);

    int num_vertices() const { return static_cast<int>(vertex_ids_.size()); }
    int num_halflines() const { return static_cast<int>(halfline_anchors_.size()); }
    int num_edges() const { return static_cast<int>(edges_.size()); }

    const std::vector<std::string>& vertex_ids() const { return vertex_ids_; }
    const std::vector<BoundedEdge>& edges() const { return edges_; }
    const std::vector<int>& halfline_anchors() const { return halfline_anchors_; }

    // Total length of the compact core (sum of bounded edge lengths).
    double core_length() const { return core_length_; }

    // Half-lines count 1 toward degree, self-loops count 2.
    int degree(int v) const { return degree_[v]; }
    int min_degree() const;

    // Vertices attached to at least one half-line.
    const std::vector<int>& vplus() const { return vplus_; }

    int vertex_index(const std::string& id) const;  // -1 if absent

  private:
    std::vector<std::string> vertex_ids_;
    std::vector<BoundedEdge> edges_;
    std::vector<int> halfline_anchors_;
    std::vector<int> degree_;
    std::vector<int> vplus_;
    double core_length_ = 0.0;
};

struct TopologyReport {
    bool satisfies_H = false;
    int num_halflines = 0;
    int min_degree = 0;
    bool has_degree2_vertex = false;
    bool is_line = false;
    bool is_tower_of_bubbles = false;
    std::vector<std::string> regime_tags;  // e.g. "Thm-1.1", "Cor-1.4"
};

// True iff every bounded edge lies on a trail (edge-simple walk) containing
// two distinct half-lines; each half-line must itself lie on such a trail.
// Exhaustive backtracking over edge-simple walks between half-line anchors —
// exponential in the edge count, intended for desk-scale graphs.
bool check_assumption_H(const MetricGraph& g);

TopologyReport classify(const MetricGraph& g);

// Named families.
MetricGraph make_star(int num_halflines);
// Degree-2 vertex v joined by two edges of length l to v1 and v2, each of
// which carries two half-lines.
MetricGraph make_fig6_Gl(double l);
// v1 = (3 parallel unit edges) = v2 = (k parallel unit edges) = v3, with two
// half-lines at v3.
MetricGraph make_fig7_Gk(int k);
// make_fig7_Gk(k) with the two half-lines moved off v3 onto a new vertex z,
// reached through a chain v3 - w - z of two edges of length l; w is the
// degree-2 vertex, and contracting the chain (l -> 0) recovers the fig7
// graph.
MetricGraph make_fig8_Gl(int k, double l);
// A fixed multigraph satisfying the trail condition: parallel pairs, one
// self-loop and three half-lines. Used as the generic "irregular" test
// topology.
MetricGraph make_fig1();

}  // namespace graphnls
