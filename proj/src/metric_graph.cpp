#include "graphnls/metric_graph.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <unordered_set>

namespace graphnls {

MetricGraph::MetricGraph(std::vector<std::string> vertex_ids, std::vector<BoundedEdge> edges,
                         std::vector<int> halfline_anchors)
    : vertex_ids_(std::move(vertex_ids)),
      edges_(std::move(edges)),
      halfline_anchors_(std::move(halfline_anchors)) {
    const int n = num_vertices();
    if (n == 0) throw std::invalid_argument("graph needs at least one vertex");
    {
        std::set<std::string> uniq(vertex_ids_.begin(), vertex_ids_.end());
        if (static_cast<int>(uniq.size()) != n)
            throw std::invalid_argument("duplicate vertex ids");
    }
    degree_.assign(n, 0);
    for (const BoundedEdge& e : edges_) {
        if (e.a < 0 || e.a >= n || e.b < 0 || e.b >= n)
            throw std::invalid_argument("edge endpoint out of range");
        if (!(e.length > 0.0)) throw std::invalid_argument("edge length must be > 0");
        degree_[e.a] += 1;
        degree_[e.b] += 1;  // self-loop counts 2
        core_length_ += e.length;
    }
    for (int a : halfline_anchors_) {
        if (a < 0 || a >= n) throw std::invalid_argument("half-line anchor out of range");
        degree_[a] += 1;
    }
    for (int v = 0; v < n; ++v) {
        if (degree_[v] < 1) throw std::invalid_argument("every vertex needs degree >= 1");
    }
    // connectivity over bounded edges (half-lines are pendant rays and do not
    // join vertices)
    std::vector<int> comp(n, -1);
    std::vector<int> stack{0};
    comp[0] = 0;
    while (!stack.empty()) {
        const int v = stack.back();
        stack.pop_back();
        for (const BoundedEdge& e : edges_) {
            for (int w : {e.a == v ? e.b : -1, e.b == v ? e.a : -1}) {
                if (w >= 0 && comp[w] < 0) {
                    comp[w] = 0;
                    stack.push_back(w);
                }
            }
        }
    }
    for (int v = 0; v < n; ++v) {
        if (comp[v] < 0) throw std::invalid_argument("graph must be connected");
    }
    std::set<int> vp(halfline_anchors_.begin(), halfline_anchors_.end());
    vplus_.assign(vp.begin(), vp.end());
}

int MetricGraph::min_degree() const {
    int m = degree_[0];
    for (int d : degree_) m = std::min(m, d);
    return m;
}

int MetricGraph::vertex_index(const std::string& id) const {
    for (int v = 0; v < num_vertices(); ++v) {
        if (vertex_ids_[v] == id) return v;
    }
    return -1;
}

namespace {

// Edge-simple walk search: is there a walk start -> target whose used-edge set
// contains `required`? States (vertex, used mask) are memoized; a 64-edge cap
// keeps the mask in one word.
struct TrailSearch {
    const MetricGraph& g;
    explicit TrailSearch(const MetricGraph& gg) : g(gg) {
        if (g.num_edges() > 64)
            throw std::invalid_argument("trail search supports at most 64 bounded edges");
    }

    bool found(int start, int target, int required_edge) {
        seen_.clear();
        return dfs(start, 0u, target, required_edge);
    }

  private:
    std::unordered_set<std::uint64_t> seen_;

    bool dfs(int v, std::uint64_t used, int target, int required) {
        if (v == target && (required < 0 || (used >> required) & 1u)) return true;
        const std::uint64_t key =
            used * static_cast<std::uint64_t>(g.num_vertices()) + static_cast<std::uint64_t>(v);
        if (!seen_.insert(key).second) return false;
        for (int ei = 0; ei < g.num_edges(); ++ei) {
            if ((used >> ei) & 1u) continue;
            const BoundedEdge& e = g.edges()[ei];
            if (e.a == v) {
                if (dfs(e.b, used | (1ull << ei), target, required)) return true;
            }
            if (e.b == v && e.a != e.b) {
                if (dfs(e.a, used | (1ull << ei), target, required)) return true;
            }
        }
        return false;
    }
};

}  // namespace

bool check_assumption_H(const MetricGraph& g) {
    const int N = g.num_halflines();
    if (N < 2) return false;  // a trail through two half-lines needs two half-lines
    TrailSearch search(g);
    const auto& anchors = g.halfline_anchors();

    // Each half-line must lie on a trail with a second one: there must be an
    // edge-simple walk between its anchor and some other anchor.
    for (int i = 0; i < N; ++i) {
        bool ok = false;
        for (int j = 0; j < N && !ok; ++j) {
            if (j == i) continue;
            ok = search.found(anchors[i], anchors[j], -1);
        }
        if (!ok) return false;
    }
    // Every bounded edge must appear on some anchor-to-anchor edge-simple walk.
    for (int ei = 0; ei < g.num_edges(); ++ei) {
        bool ok = false;
        for (int i = 0; i < N && !ok; ++i) {
            for (int j = 0; j < N && !ok; ++j) {
                if (i == j) continue;
                ok = search.found(anchors[i], anchors[j], ei);
            }
        }
        if (!ok) return false;
    }
    return true;
}

namespace {

bool detect_line(const MetricGraph& g) {
    if (g.num_halflines() != 2) return false;
    for (int v = 0; v < g.num_vertices(); ++v) {
        if (g.degree(v) != 2) return false;
    }
    // All degrees 2 with two half-lines forces #edges = n-1; together with
    // connectivity that is a path.
    return g.num_edges() == g.num_vertices() - 1;
}

// Heuristic bubble-tower detector: a chain of vertices joined by bundles of
// >= 2 parallel edges (self-loops allowed at chain vertices), one half-lineatop
// each end of the chain. The source description lives outside this project;
// this is our reading of it and is documented as such.
bool detect_tower_of_bubbles(const MetricGraph& g) {
    if (g.num_halflines() != 2) return false;
    if (g.num_edges() == 0) return false;
    const int a0 = g.halfline_anchors()[0];
    const int a1 = g.halfline_anchors()[1];

    std::map<std::pair<int, int>, int> bundles;  // (min,max) -> multiplicity, loops excluded
    for (const BoundedEdge& e : g.edges()) {
        if (e.a == e.b) continue;
        bundles[{std::min(e.a, e.b), std::max(e.a, e.b)}] += 1;
    }
    for (const auto& [pair, count] : bundles) {
        if (count < 2) return false;
    }
    // Bundle graph must be a simple path from a0 to a1 covering every vertex.
    const int n = g.num_vertices();
    std::vector<std::vector<int>> nbr(n);
    for (const auto& [pair, count] : bundles) {
        nbr[pair.first].push_back(pair.second);
        nbr[pair.second].push_back(pair.first);
    }
    if (a0 == a1) {
        // single-vertex tower: everything must be a loop at that vertex
        return n == 1;
    }
    if (nbr[a0].size() != 1 || nbr[a1].size() != 1) return false;
    int prev = -1, cur = a0, visited = 1;
    while (cur != a1) {
        if (cur != a0 && nbr[cur].size() != 2) return false;
        int next = -1;
        for (int w : nbr[cur]) {
            if (w != prev) next = w;
        }
        if (next < 0) return false;
        prev = cur;
        cur = next;
        ++visited;
        if (visited > n) return false;
    }
    return visited == n;
}

}  // namespace

TopologyReport classify(const MetricGraph& g) {
    TopologyReport r;
    r.num_halflines = g.num_halflines();
    r.min_degree = g.min_degree();
    for (int v = 0; v < g.num_vertices(); ++v) {
        if (g.degree(v) == 2) r.has_degree2_vertex = true;
    }
    r.is_line = detect_line(g);
    r.is_tower_of_bubbles = detect_tower_of_bubbles(g);
    r.satisfies_H = check_assumption_H(g);

    const bool h_strict = r.satisfies_H && !r.is_line && !r.is_tower_of_bubbles;
    if (h_strict && r.num_halflines >= 3 && r.min_degree >= 3)
        r.regime_tags.push_back("Thm-1.1");
    if (r.has_degree2_vertex && r.num_halflines >= 1) r.regime_tags.push_back("Thm-1.2");
    if (r.num_halflines == 2) r.regime_tags.push_back("Thm-1.3");
    if (h_strict && r.num_halflines >= 3 && r.has_degree2_vertex)
        r.regime_tags.push_back("Cor-1.4");
    if (h_strict && r.num_halflines == 2 && !r.has_degree2_vertex)
        r.regime_tags.push_back("Cor-1.5");
    if (r.num_halflines == 2 && r.has_degree2_vertex) r.regime_tags.push_back("Cor-1.6");
    return r;
}

MetricGraph make_star(int num_halflines) {
    if (num_halflines < 1) throw std::invalid_argument("make_star: need at least 1 half-line");
    return MetricGraph({"o"}, {}, std::vector<int>(num_halflines, 0));
}

MetricGraph make_fig6_Gl(double l) {
    if (!(l > 0.0)) throw std::invalid_argument("make_fig6_Gl: l must be > 0");
    return MetricGraph({"v", "v1", "v2"}, {{0, 1, l}, {0, 2, l}}, {1, 1, 2, 2});
}

MetricGraph make_fig7_Gk(int k) {
    if (k < 2) throw std::invalid_argument("make_fig7_Gk: k must be >= 2");
    std::vector<BoundedEdge> edges;
    for (int i = 0; i < 3; ++i) edges.push_back({0, 1, 1.0});
    for (int i = 0; i < k; ++i) edges.push_back({1, 2, 1.0});
    return MetricGraph({"v1", "v2", "v3"}, std::move(edges), {2, 2});
}

MetricGraph make_fig8_Gl(int k, double l) {
    if (k < 2) throw std::invalid_argument("make_fig8_Gl: k must be >= 2");
    if (!(l > 0.0)) throw std::invalid_argument("make_fig8_Gl: l must be > 0");
    std::vector<BoundedEdge> edges;
    for (int i = 0; i < 3; ++i) edges.push_back({0, 1, 1.0});
    for (int i = 0; i < k; ++i) edges.push_back({1, 2, 1.0});
    edges.push_back({2, 3, l});
    edges.push_back({3, 4, l});
    return MetricGraph({"v1", "v2", "v3", "w", "z"}, std::move(edges), {4, 4});
}

MetricGraph make_fig1() {
    // a = b (parallel pair), b - c, c - d (parallel pair), loop at c;
    // half-lines at a, b and d.
    std::vector<BoundedEdge> edges{{0, 1, 1.0}, {0, 1, 1.5}, {1, 2, 1.0},
                                   {2, 3, 1.0}, {2, 3, 2.0}, {2, 2, 1.0}};
    return MetricGraph({"a", "b", "c", "d"}, std::move(edges), {0, 1, 3});
}

}  // namespace graphnls
