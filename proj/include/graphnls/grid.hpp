// Finite-dimensional representation of H^1 functions on a metric graph.
// Each bounded edge of length L gets ceil(L/h) uniform intervals (at least
// 2); each half-line is truncated at `halfline_length` with a homogeneous
// Dirichlet value at the artificial end. Vertex samples are stored once and
// shared by all incident edges, so continuity holds by construction.
#pragma once

#include <Eigen/Core>
#include <functional>
#include <memory>
#include <stdexcept>
#include <vector>

#include "graphnls/metric_graph.hpp"

namespace graphnls {

struct GridSpec {
    double h = 0.02;               // target grid step
    double halfline_length = 40.0;  // truncation length for each half-line

    void validate() const {
        if (!(h > 0.0)) throw std::invalid_argument("grid step must be > 0");
        if (!(halfline_length >= 10.0 * h))
            throw std::invalid_argument("halfline truncation must be >= 10*h");
    }
};

class Grid {
  public:
    struct Segment {
        bool halfline = false;
        int vertex_a = -1;     // anchor / from-vertex node id
        int vertex_b = -1;     // to-vertex node id (bounded edges only)
        int n_intervals = 0;
        double dx = 0.0;
        int first_interior = 0;  // node id of the first non-vertex sample
        double length = 0.0;
    };

    Grid(MetricGraph graph, GridSpec spec);
    // Same topology but explicit per-segment interval counts (used by the
    // scaling transform so node layouts transfer exactly).
    Grid(MetricGraph graph, GridSpec spec, const std::vector<int>& interval_counts);

    const MetricGraph& graph() const { return graph_; }
    const GridSpec& spec() const { return spec_; }
    const std::vector<Segment>& segments() const { return segments_; }
    int node_count() const { return node_count_; }

    // Node id of the k-th sample along segment s, k = 0..n_intervals.
    // Bounded edges end at the far vertex; half-lines end at a Dirichlet node.
    int node_at(const Segment& s, int k) const {
        if (k == 0) return s.vertex_a;
        if (!s.halfline && k == s.n_intervals) return s.vertex_b;
        return s.first_interior + k - 1;
    }

    bool is_dirichlet(int node) const { return dirichlet_[node]; }
    // Trapezoid quadrature weight of a node (sum of dx/2 over incident
    // interval ends).
    double lumped_weight(int node) const { return lumped_[node]; }
    bool is_vertex_node(int node) const { return node < graph_.num_vertices(); }

    // Arc-length distance from a node to the nearest graph vertex.
    double distance_to_vertex(int node) const;

    std::vector<int> interval_counts() const;

  private:
    void build();
    void layout();
    MetricGraph graph_;
    GridSpec spec_;
    std::vector<Segment> segments_;
    std::vector<double> lumped_;
    std::vector<char> dirichlet_;
    int node_count_ = 0;
};

struct GraphFunction {
    std::shared_ptr<const Grid> grid;
    Eigen::VectorXd values;

    GraphFunction() = default;
    explicit GraphFunction(std::shared_ptr<const Grid> g)
        : grid(std::move(g)), values(Eigen::VectorXd::Zero(grid->node_count())) {}

    double operator[](int node) const { return values[node]; }
    double& operator[](int node) { return values[node]; }
    double vertex_value(int v) const { return values[v]; }
};

// Samples a radial profile f(distance to `center_vertex`) on every segment
// touching the vertex, measuring arclength outward from it; all other nodes
// are zero. Used for competitor construction and solver starts.
GraphFunction sample_radial(const std::shared_ptr<const Grid>& grid, int center_vertex,
                            const std::function<double(double)>& profile);

}  // namespace graphnls
