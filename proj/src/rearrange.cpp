#include "graphnls/rearrange.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "graphnls/metric_graph.hpp"

namespace graphnls {

std::vector<double> decreasing_rearrangement(std::span<const double> samples) {
    if (samples.empty()) throw std::invalid_argument("decreasing_rearrangement: empty input");
    std::vector<double> out(samples.begin(), samples.end());
    std::sort(out.begin(), out.end(), std::greater<double>());
    return out;
}

SymmetricRearrangement symmetric_rearrangement(std::span<const double> samples) {
    if (samples.empty()) throw std::invalid_argument("symmetric_rearrangement: empty input");
    std::vector<double> asc(samples.begin(), samples.end());
    std::sort(asc.begin(), asc.end());

    SymmetricRearrangement r;
    const size_t n = asc.size();
    r.values.assign(n, 0.0);
    size_t lo = 0, hi = n - 1;
    // place ascending values alternately at the two free ends; the largest
    // lands in the middle
    for (size_t i = 0; i < n; ++i) {
        if (i % 2 == 0) {
            r.values[lo++] = asc[i];
        } else {
            r.values[hi--] = asc[i];
        }
    }
    r.twice_attained = true;
    for (size_t i = 0; i < n;) {
        size_t j = i;
        while (j < n && asc[j] == asc[i]) ++j;
        const bool is_max = (j == n);
        if (!is_max && j - i < 2) r.twice_attained = false;
        i = j;
    }
    return r;
}

double uniform_dx(const GraphFunction& u) {
    const auto& segments = u.grid->segments();
    if (segments.empty()) throw std::invalid_argument("function has no edges");
    const double dx = segments.front().dx;
    for (const auto& s : segments) {
        if (std::abs(s.dx - dx) > 1e-12 * dx)
            throw std::invalid_argument(
                "rearrangement requires a uniform grid step; resample first");
    }
    return dx;
}

double sample_mass(const GraphFunction& u) {
    const double dx = uniform_dx(u);
    double acc = 0.0;
    for (int i = 0; i < u.grid->node_count(); ++i) acc += u[i] * u[i];
    return dx * acc;
}

double sample_lp_pow(const GraphFunction& u, double r) {
    const double dx = uniform_dx(u);
    double acc = 0.0;
    for (int i = 0; i < u.grid->node_count(); ++i) acc += std::pow(std::abs(u[i]), r);
    return dx * acc;
}

double sample_energy(const GraphFunction& u, double p) {
    const double dx = uniform_dx(u);
    const Grid& grid = *u.grid;
    double kin = 0.0, blk = 0.0;
    for (const Grid::Segment& s : grid.segments()) {
        for (int k = 0; k < s.n_intervals; ++k) {
            const double d = u[grid.node_at(s, k + 1)] - u[grid.node_at(s, k)];
            kin += d * d;
        }
    }
    for (int i = 0; i < grid.node_count(); ++i) blk += std::pow(std::abs(u[i]), p);
    return kin / (2.0 * dx) - dx * blk / p;
}

namespace {

// half-line samples are the nodes k >= 1; the anchor (a vertex sample)
// belongs to the compact-core side of the bookkeeping
template <class F>
void for_each_halfline_sample(const GraphFunction& u, F&& f) {
    const Grid& grid = *u.grid;
    for (const Grid::Segment& s : grid.segments()) {
        if (!s.halfline) continue;
        for (int k = 1; k <= s.n_intervals; ++k) f(u[grid.node_at(s, k)]);
    }
}

}  // namespace

double sample_mass_halflines(const GraphFunction& u) {
    const double dx = uniform_dx(u);
    double acc = 0.0;
    for_each_halfline_sample(u, [&](double v) { acc += v * v; });
    return dx * acc;
}

double sample_energy_halflines(const GraphFunction& u, double p) {
    const double dx = uniform_dx(u);
    const Grid& grid = *u.grid;
    double kin = 0.0, blk = 0.0;
    for (const Grid::Segment& s : grid.segments()) {
        if (!s.halfline) continue;
        for (int k = 0; k < s.n_intervals; ++k) {
            const double d = u[grid.node_at(s, k + 1)] - u[grid.node_at(s, k)];
            kin += d * d;
        }
    }
    for_each_halfline_sample(u, [&](double v) { blk += std::pow(std::abs(v), p); });
    return kin / (2.0 * dx) - dx * blk / p;
}

namespace {

double min_vplus_value(const GraphFunction& u) {
    const auto& vp = u.grid->graph().vplus();
    if (vp.empty()) throw std::invalid_argument("graph has no half-line anchors");
    double m = u[vp.front()];
    for (int v : vp) m = std::min(m, u[v]);
    return m;
}

}  // namespace

Star3Rearranged rearrange_to_star3(const GraphFunction& u) {
    const Grid& grid = *u.grid;
    const MetricGraph& g = grid.graph();
    if (g.num_halflines() < 3)
        throw std::invalid_argument("rearrange_to_star3: need at least 3 half-lines");
    if (!check_assumption_H(g))
        throw std::invalid_argument("rearrange_to_star3: graph violates the trail condition");
    const double dx = uniform_dx(u);
    for (int i = 0; i < grid.node_count(); ++i) {
        if (u[i] < 0.0) throw std::invalid_argument("rearrange_to_star3: function not >= 0");
    }
    const double m = min_vplus_value(u);
    if (!(m > 0.0))
        throw std::invalid_argument("rearrange_to_star3: vertex values on V+ must be positive");

    std::vector<double> above, below;
    for (int i = 0; i < grid.node_count(); ++i) {
        (u[i] > m ? above : below).push_back(u[i]);
    }
    // the vertex realizing m is itself a sample, so below is nonempty and its
    // maximum is exactly m
    std::sort(below.begin(), below.end(), std::greater<double>());
    std::vector<double> bump;
    if (!above.empty()) bump = symmetric_rearrangement(above).values;

    std::vector<double> chain[3];
    for (size_t i = 1; i < below.size(); ++i) chain[(i - 1) % 3].push_back(below[i]);

    const size_t n1 = bump.size() + chain[0].size();
    size_t need = std::max({n1, chain[1].size(), chain[2].size()}) + 3;
    need = std::max<size_t>(need, 12);

    GridSpec spec;
    spec.h = dx;
    spec.halfline_length = static_cast<double>(need) * dx;
    auto out_grid = std::make_shared<const Grid>(
        make_star(3), spec, std::vector<int>(3, static_cast<int>(need)));

    Star3Rearranged out;
    out.fn = GraphFunction(out_grid);
    out.vertex_value = m;
    out.fn[0] = m;
    const auto& segs = out_grid->segments();
    // h1: grafted bump, then its share of the sorted rest
    {
        int k = 1;
        for (double v : bump) out.fn[out_grid->node_at(segs[0], k++)] = v;
        for (double v : chain[0]) out.fn[out_grid->node_at(segs[0], k++)] = v;
    }
    for (int hl = 1; hl < 3; ++hl) {
        int k = 1;
        for (double v : chain[hl]) out.fn[out_grid->node_at(segs[hl], k++)] = v;
    }
    return out;
}

double HalfLineProfile::mass() const {
    double acc = 0.0;
    for (size_t j = 1; j < v.size(); ++j) acc += v[j] * v[j];
    return dx * acc;
}

double HalfLineProfile::lp_pow(double r) const {
    double acc = 0.0;
    for (size_t j = 1; j < v.size(); ++j) acc += std::pow(std::abs(v[j]), r);
    return dx * acc;
}

double HalfLineProfile::kinetic() const {
    double acc = 0.0;
    for (size_t j = 0; j + 1 < v.size(); ++j) {
        const double d = v[j + 1] - v[j];
        acc += d * d;
    }
    return acc / (2.0 * dx);
}

bool HalfLineProfile::nonincreasing(double tol) const {
    for (size_t j = 0; j + 1 < v.size(); ++j) {
        if (v[j + 1] > v[j] + tol) return false;
    }
    return true;
}

bool HalfLineProfile::unimodal(double tol) const {
    size_t j = 0;
    while (j + 1 < v.size() && v[j + 1] >= v[j] - tol) ++j;
    for (; j + 1 < v.size(); ++j) {
        if (v[j + 1] > v[j] + tol) return false;
    }
    return true;
}

SplitHalflineResult split_halfline_rearrangement(const GraphFunction& u) {
    const Grid& grid = *u.grid;
    const MetricGraph& g = grid.graph();
    if (g.num_halflines() < 3)
        throw std::invalid_argument("split_halfline_rearrangement: need >= 3 half-lines");
    const double dx = uniform_dx(u);
    for (int i = 0; i < grid.node_count(); ++i) {
        if (u[i] < 0.0)
            throw std::invalid_argument("split_halfline_rearrangement: function not >= 0");
    }
    const double m = min_vplus_value(u);

    // core sup: all bounded-edge samples; vertices touch the core whenever it
    // is nonempty
    double M = 0.0;
    bool has_core = false;
    for (const Grid::Segment& s : grid.segments()) {
        if (s.halfline) continue;
        has_core = true;
        for (int k = 0; k <= s.n_intervals; ++k) M = std::max(M, u[grid.node_at(s, k)]);
    }
    if (!has_core) M = 0.0;

    std::vector<double> hl;
    for_each_halfline_sample(u, [&](double v) { hl.push_back(v); });
    if (hl.empty()) throw std::invalid_argument("split_halfline_rearrangement: no samples");
    const double sup_hl = *std::max_element(hl.begin(), hl.end());
    if (!(M < sup_hl))
        throw std::invalid_argument(
            "split_halfline_rearrangement: requires |u|_inf(K) < |u|_inf on the half-lines");

    SplitHalflineResult out;
    if (!has_core) {
        // degenerate core (M = 0): the stratum above M absorbs every sample,
        // so u2 is its symmetric rearrangement (boundary value 0 = M) and u1
        // degenerates to its boundary value alone
        const auto sym = symmetric_rearrangement(hl);
        out.u1.dx = dx;
        out.u1.v.assign(1, m);
        out.u2.dx = dx;
        out.u2.v.push_back(0.0);
        out.u2.v.insert(out.u2.v.end(), sym.values.begin(), sym.values.end());
        return out;
    }

    std::vector<double> above_M, mid, below_m;
    for (double v : hl) {
        if (v > M) {
            above_M.push_back(v);
        } else if (v > m) {
            mid.push_back(v);
        } else {
            below_m.push_back(v);
        }
    }
    std::sort(mid.begin(), mid.end(), std::greater<double>());
    std::sort(below_m.begin(), below_m.end(), std::greater<double>());
    std::vector<double> chain[3];
    for (size_t i = 0; i < below_m.size(); ++i) chain[i % 3].push_back(below_m[i]);

    out.u1.dx = 0.5 * dx;
    out.u1.v.push_back(m);
    {
        // merge of two of the three chains, still sorted
        std::vector<double> merged;
        merged.reserve(chain[0].size() + chain[1].size());
        std::merge(chain[0].begin(), chain[0].end(), chain[1].begin(), chain[1].end(),
                   std::back_inserter(merged), std::greater<double>());
        out.u1.v.insert(out.u1.v.end(), merged.begin(), merged.end());
    }

    out.u2.dx = dx;
    out.u2.v.push_back(M);
    if (!above_M.empty()) {
        const auto sym = symmetric_rearrangement(above_M);
        out.u2.v.insert(out.u2.v.end(), sym.values.begin(), sym.values.end());
    }
    out.u2.v.insert(out.u2.v.end(), mid.begin(), mid.end());
    out.u2.v.insert(out.u2.v.end(), chain[2].begin(), chain[2].end());
    return out;
}

}  // namespace graphnls
