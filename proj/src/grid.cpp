#include "graphnls/grid.hpp"

#include <cmath>
#include <functional>

namespace graphnls {

Grid::Grid(MetricGraph graph, GridSpec spec) : graph_(std::move(graph)), spec_(spec) {
    spec_.validate();
    build();
    layout();
}

Grid::Grid(MetricGraph graph, GridSpec spec, const std::vector<int>& interval_counts)
    : graph_(std::move(graph)), spec_(spec) {
    spec_.validate();
    build();
    if (interval_counts.size() != segments_.size())
        throw std::invalid_argument("interval_counts size mismatch");
    for (size_t i = 0; i < segments_.size(); ++i) {
        if (interval_counts[i] < 2) throw std::invalid_argument("need >= 2 intervals per edge");
        segments_[i].n_intervals = interval_counts[i];
        segments_[i].dx = segments_[i].length / interval_counts[i];
    }
    layout();
}

void Grid::build() {
    segments_.clear();
    for (const BoundedEdge& e : graph_.edges()) {
        Segment s;
        s.halfline = false;
        s.vertex_a = e.a;
        s.vertex_b = e.b;
        s.length = e.length;
        s.n_intervals = std::max(2, static_cast<int>(std::ceil(e.length / spec_.h)));
        s.dx = e.length / s.n_intervals;
        segments_.push_back(s);
    }
    for (int anchor : graph_.halfline_anchors()) {
        Segment s;
        s.halfline = true;
        s.vertex_a = anchor;
        s.length = spec_.halfline_length;
        s.n_intervals = std::max(2, static_cast<int>(std::ceil(s.length / spec_.h)));
        s.dx = s.length / s.n_intervals;
        segments_.push_back(s);
    }
}

void Grid::layout() {
    int next = graph_.num_vertices();
    for (Segment& s : segments_) {
        s.first_interior = next;
        next += s.halfline ? s.n_intervals : s.n_intervals - 1;
    }
    node_count_ = next;
    lumped_.assign(node_count_, 0.0);
    dirichlet_.assign(node_count_, 0);
    for (const Segment& s : segments_) {
        for (int k = 0; k < s.n_intervals; ++k) {
            lumped_[node_at(s, k)] += 0.5 * s.dx;
            lumped_[node_at(s, k + 1)] += 0.5 * s.dx;
        }
        if (s.halfline) dirichlet_[node_at(s, s.n_intervals)] = 1;
    }
}

double Grid::distance_to_vertex(int node) const {
    if (is_vertex_node(node)) return 0.0;
    for (const Segment& s : segments_) {
        const int lo = s.first_interior;
        const int hi = lo + (s.halfline ? s.n_intervals : s.n_intervals - 1);
        if (node >= lo && node < hi) {
            const int k = node - lo + 1;
            const double da = k * s.dx;
            if (s.halfline) return da;
            return std::min(da, (s.n_intervals - k) * s.dx);
        }
    }
    throw std::logic_error("node not found in any segment");
}

std::vector<int> Grid::interval_counts() const {
    std::vector<int> counts;
    counts.reserve(segments_.size());
    for (const Segment& s : segments_) counts.push_back(s.n_intervals);
    return counts;
}

GraphFunction sample_radial(const std::shared_ptr<const Grid>& grid, int center_vertex,
                            const std::function<double(double)>& profile) {
    GraphFunction u(grid);
    for (const Grid::Segment& s : grid->segments()) {
        const bool loop = !s.halfline && s.vertex_a == s.vertex_b;
        if (s.vertex_a == center_vertex) {
            for (int k = 1; k <= s.n_intervals; ++k) {
                if (!s.halfline && !loop && k == s.n_intervals) continue;  // far vertex
                const double r = loop ? std::min(k * s.dx, s.length - k * s.dx) : k * s.dx;
                u[grid->node_at(s, k)] = profile(r);
            }
        } else if (!s.halfline && s.vertex_b == center_vertex) {
            for (int k = 1; k < s.n_intervals; ++k) {
                u[grid->node_at(s, k)] = profile((s.n_intervals - k) * s.dx);
            }
        }
    }
    u[center_vertex] = profile(0.0);
    return u;
}

}  // namespace graphnls
