#include "graphnls/energy.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace graphnls {

namespace {

double pow_abs(double v, double r) {
    const double a = std::abs(v);
    if (r == 4.0) {
        const double s = a * a;
        return s * s;
    }
    if (r == 2.0) return a * a;
    if (r == 3.0) return a * a * a;
    if (r == 2.5) return a * a * std::sqrt(a);
    if (r == 3.5) return a * a * a * std::sqrt(a);
    return std::pow(a, r);
}

}  // namespace

EnergyBreakdown evaluate(const GraphFunction& u, const NonlinearityParams& params) {
    const Grid& grid = *u.grid;
    EnergyBreakdown out;
    for (const Grid::Segment& s : grid.segments()) {
        double kin = 0.0, blk = 0.0, ms = 0.0;
        double prev = u[grid.node_at(s, 0)];
        blk += 0.5 * pow_abs(prev, params.p);
        ms += 0.5 * prev * prev;
        for (int k = 1; k <= s.n_intervals; ++k) {
            const double cur = u[grid.node_at(s, k)];
            const double d = cur - prev;
            kin += d * d;
            const double w = (k == s.n_intervals) ? 0.5 : 1.0;
            blk += w * pow_abs(cur, params.p);
            ms += w * cur * cur;
            prev = cur;
        }
        out.kinetic += kin / (2.0 * s.dx);
        out.bulk += blk * s.dx / params.p;
        out.mass += ms * s.dx;
    }
    for (int v = 0; v < grid.graph().num_vertices(); ++v) {
        out.vertex += pow_abs(u[v], params.q);
    }
    out.vertex *= params.tau / params.q;
    out.E = out.kinetic - out.bulk;
    out.F = out.E - out.vertex;
    return out;
}

double mass(const GraphFunction& u) {
    const Grid& grid = *u.grid;
    double total = 0.0;
    for (int node = 0; node < grid.node_count(); ++node) {
        total += grid.lumped_weight(node) * u[node] * u[node];
    }
    return total;
}

double core_mass(const GraphFunction& u) {
    const Grid& grid = *u.grid;
    double total = 0.0;
    for (const Grid::Segment& s : grid.segments()) {
        if (s.halfline) continue;
        double ms = 0.0;
        for (int k = 0; k <= s.n_intervals; ++k) {
            const double w = (k == 0 || k == s.n_intervals) ? 0.5 : 1.0;
            const double v = u[grid.node_at(s, k)];
            ms += w * v * v;
        }
        total += ms * s.dx;
    }
    return total;
}

double sup_norm(const GraphFunction& u) {
    return u.values.size() ? u.values.cwiseAbs().maxCoeff() : 0.0;
}

double lp_norm_pow(const GraphFunction& u, double r) {
    const Grid& grid = *u.grid;
    double total = 0.0;
    for (const Grid::Segment& s : grid.segments()) {
        double acc = 0.0;
        for (int k = 0; k <= s.n_intervals; ++k) {
            const double w = (k == 0 || k == s.n_intervals) ? 0.5 : 1.0;
            acc += w * pow_abs(u[grid.node_at(s, k)], r);
        }
        total += acc * s.dx;
    }
    return total;
}

GraphFunction project_mass(const GraphFunction& u, double mu) {
    if (!(mu > 0.0)) throw std::invalid_argument("project_mass: mu must be > 0");
    const double m = mass(u);
    if (!(m > 0.0)) throw std::invalid_argument("project_mass: zero function");
    GraphFunction out = u;
    out.values *= std::sqrt(mu / m);
    return out;
}

GnRatios gn_ratios(const GraphFunction& u, double p) {
    GnRatios r;
    const double m2 = mass(u);
    if (!(m2 > 0.0)) throw std::invalid_argument("gn_ratios: zero function");
    NonlinearityParams params;
    params.p = p;
    params.mu = m2;
    const EnergyBreakdown b = evaluate(u, params);
    const double du = std::sqrt(2.0 * b.kinetic);
    if (du == 0.0) {
        r.derivative_zero = true;
        r.r_p = r.r_inf = std::numeric_limits<double>::infinity();
        return r;
    }
    const double l2 = std::sqrt(m2);
    const double sup = sup_norm(u);
    r.r_p = (b.bulk * p) / (std::pow(l2, 0.5 * p + 1.0) * std::pow(du, 0.5 * p - 1.0));
    r.r_inf = sup * sup / (l2 * du);
    return r;
}

void write_csv(const GraphFunction& u, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << "edge_id,arclength,value\n";
    const Grid& grid = *u.grid;
    int bounded = 0, half = 0;
    out.precision(17);
    for (const Grid::Segment& s : grid.segments()) {
        const std::string id =
            s.halfline ? "h" + std::to_string(half++) : "e" + std::to_string(bounded++);
        for (int k = 0; k <= s.n_intervals; ++k) {
            out << id << ',' << k * s.dx << ',' << u[grid.node_at(s, k)] << '\n';
        }
    }
}

}  // namespace graphnls
