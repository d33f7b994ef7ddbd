#include "graphnls/competitors.hpp"

#include <cmath>
#include <stdexcept>

#include "graphnls/numerics.hpp"

namespace graphnls {

namespace {

CompetitorResult finish(GraphFunction fn, const NonlinearityParams& params) {
    CompetitorResult r;
    r.fn = project_mass(fn, params.mu);
    r.breakdown = evaluate(r.fn, params);
    const LineConstants& c = LineConstants::for_p(params.p);
    r.soliton_level = -c.theta_p * std::pow(params.mu, 2.0 * c.beta + 1.0);
    r.beats_soliton_level = r.breakdown.F < r.soliton_level;
    return r;
}

// radius at which phi_nu first drops to `value` (phi is strictly decreasing
// in |x|), located by bisection on an expanding bracket
double profile_inverse(double p, double nu, double value) {
    const double peak = soliton_eval(p, nu, 0.0);
    if (!(value < peak)) return 0.0;
    double hi = 1.0;
    while (soliton_eval(p, nu, hi) > value) {
        hi *= 2.0;
        if (hi > 1e9) throw std::runtime_error("profile_inverse: no support radius found");
    }
    const auto f = [&](double r) { return soliton_eval(p, nu, r) - value; };
    return bisect(f, 0.0, hi, 1e-12, 200);
}

// Clipped-soliton support machinery shared by the truncated constructions:
// finds delta so that the support radius of (phi_nu - delta)_+ equals
// `target_radius` (within 1e-10), then computes the mass rescale kappa for
// `rays` identical rays carrying the clipped profile.
struct ClippedProfile {
    double delta = 0.0;
    double kappa = 0.0;
    double nu = 0.0;
    double p = 0.0;
    double radius = 0.0;

    double operator()(double r) const {
        if (r >= radius) return 0.0;
        const double v = soliton_eval(p, nu, r) - delta;
        return v > 0.0 ? kappa * v : 0.0;
    }
};

ClippedProfile make_clipped(double p, double nu, double target_radius, double total_mass,
                            int rays) {
    ClippedProfile c;
    c.p = p;
    c.nu = nu;
    c.radius = target_radius;
    const double peak = soliton_eval(p, nu, 0.0);
    // outer bisection on delta targeting the support radius
    const auto radius_of = [&](double delta) { return profile_inverse(p, nu, delta); };
    double dlo = 0.0, dhi = peak * (1.0 - 1e-15);
    if (radius_of(dhi) > target_radius)
        throw std::runtime_error("clipped soliton: support cannot shrink to the target radius");
    c.delta = bisect([&](double d) { return radius_of(d) - target_radius; }, dlo, dhi, 1e-14, 200);
    while (profile_inverse(p, nu, c.delta) > target_radius) c.delta *= 1.0 + 1e-12;
    // inner closed-form mass rescale
    const auto clipped2 = [&](double r) {
        const double v = soliton_eval(p, nu, r) - c.delta;
        return v > 0.0 ? v * v : 0.0;
    };
    const double ray_mass = integrate(clipped2, 0.0, target_radius,
                                      1e-13 * peak * peak * target_radius);
    if (!(ray_mass > 0.0)) throw std::runtime_error("clipped soliton: degenerate support");
    c.kappa = std::sqrt(total_mass / (rays * ray_mass));
    return c;
}

}  // namespace

CompetitorResult plateau_soliton(const std::shared_ptr<const Grid>& grid,
                                 const NonlinearityParams& params) {
    params.validate();
    const MetricGraph& g = grid->graph();
    const int N = g.num_halflines();
    if (N < 1) throw std::invalid_argument("plateau_soliton: graph has no half-line");
    const LineConstants& c = LineConstants::for_p(params.p);
    const double ell = g.core_length();
    const double mu = params.mu;

    // mu(m) = N/2 m + ell |phi_1(0)|^2 m^{2 alpha}, strictly increasing
    const auto mass_of = [&](double m) {
        return 0.5 * N * m + ell * c.phi1_at_0 * c.phi1_at_0 * std::pow(m, 2.0 * c.alpha) - mu;
    };
    const double m_hi = (2.0 * mu / N) * (1.0 + 1e-9);
    const double m = bisect(mass_of, mu * 1e-6 * std::min(1.0, 2.0 / N), m_hi, 1e-14, 200);

    GraphFunction u(grid);
    const double plateau = soliton_eval(params.p, m, 0.0);
    for (const Grid::Segment& s : grid->segments()) {
        if (s.halfline) {
            for (int k = 0; k <= s.n_intervals; ++k) {
                u[grid->node_at(s, k)] = soliton_eval(params.p, m, k * s.dx);
            }
        } else {
            for (int k = 0; k <= s.n_intervals; ++k) u[grid->node_at(s, k)] = plateau;
        }
    }
    // plateau equals the tail peak value, so vertices are consistent however
    // they were written above
    for (int v = 0; v < g.num_vertices(); ++v) u[v] = plateau;

    CompetitorResult r = finish(std::move(u), params);
    r.m = m;
    return r;
}

namespace {

// available radius along each edge-end at `vertex`; self-loops contribute two
// rays of half the loop length
std::vector<std::pair<const Grid::Segment*, double>> rays_at(const Grid& grid, int vertex) {
    std::vector<std::pair<const Grid::Segment*, double>> rays;
    for (const Grid::Segment& s : grid.segments()) {
        if (s.halfline) {
            if (s.vertex_a == vertex) rays.push_back({&s, s.length});
        } else if (s.vertex_a == vertex && s.vertex_b == vertex) {
            rays.push_back({&s, 0.5 * s.length});
            rays.push_back({&s, 0.5 * s.length});
        } else if (s.vertex_a == vertex || s.vertex_b == vertex) {
            rays.push_back({&s, s.length});
        }
    }
    return rays;
}

GraphFunction sample_clipped_at_vertex(const std::shared_ptr<const Grid>& grid, int vertex,
                                       const ClippedProfile& w) {
    return sample_radial(grid, vertex, [&](double r) { return w(r); });
}

}  // namespace

CompetitorResult truncated_star_soliton(const std::shared_ptr<const Grid>& grid, int vertex,
                                        const NonlinearityParams& params) {
    params.validate();
    const MetricGraph& g = grid->graph();
    if (vertex < 0 || vertex >= g.num_vertices())
        throw std::invalid_argument("truncated_star_soliton: bad vertex");
    const int deg = g.degree(vertex);
    if (deg < 3) throw std::invalid_argument("truncated_star_soliton: vertex degree < 3");

    const auto rays = rays_at(*grid, vertex);
    double L = rays.front().second;
    for (const auto& [seg, len] : rays) L = std::min(L, len);
    const double dx_min = rays.front().first->dx;
    if (L < 4.0 * dx_min)
        throw std::runtime_error(
            "truncated_star_soliton: shortest edge at the vertex is below grid resolution");

    const double nu = 2.0 * params.mu / deg;
    // keep the clip radius no larger than where the profile has decayed to
    // ~1e-9 of its peak, so delta never underflows
    const double r_decay = profile_inverse(params.p, nu, soliton_eval(params.p, nu, 0.0) * 1e-9);
    const double radius = std::min(L, r_decay);
    ClippedProfile w = make_clipped(params.p, nu, radius, params.mu, deg);

    CompetitorResult r = finish(sample_clipped_at_vertex(grid, vertex, w), params);
    r.m = nu;
    r.delta = w.delta;
    r.kappa = w.kappa;
    return r;
}

CompetitorResult truncated_line_soliton_at_deg2(const std::shared_ptr<const Grid>& grid,
                                                int vertex, const NonlinearityParams& params) {
    params.validate();
    const MetricGraph& g = grid->graph();
    if (vertex < 0 || vertex >= g.num_vertices())
        throw std::invalid_argument("truncated_line_soliton_at_deg2: bad vertex");
    if (g.degree(vertex) != 2)
        throw std::invalid_argument("truncated_line_soliton_at_deg2: vertex degree != 2");

    const auto rays = rays_at(*grid, vertex);
    double L = rays.front().second;
    for (const auto& [seg, len] : rays) L = std::min(L, len);
    const double dx_min = rays.front().first->dx;
    if (L < 4.0 * dx_min)
        throw std::runtime_error(
            "truncated_line_soliton_at_deg2: incident edges are below grid resolution");

    const double r_decay =
        profile_inverse(params.p, params.mu, soliton_eval(params.p, params.mu, 0.0) * 1e-9);
    const double radius = std::min(L, r_decay);
    ClippedProfile w = make_clipped(params.p, params.mu, radius, params.mu, 2);

    CompetitorResult r = finish(sample_clipped_at_vertex(grid, vertex, w), params);
    r.m = params.mu;
    r.delta = w.delta;
    r.kappa = w.kappa;
    return r;
}

CompetitorResult eta_plateau(const std::shared_ptr<const Grid>& grid,
                             const NonlinearityParams& params, const LineDeltaProfile& eta) {
    params.validate();
    if (!eta.eval || !eta.peak) throw std::invalid_argument("eta_plateau: missing eta profile");
    const MetricGraph& g = grid->graph();
    if (g.num_halflines() != 2)
        throw std::invalid_argument("eta_plateau: graph must have exactly 2 half-lines");
    const double ell = g.core_length();
    const double mu = params.mu;

    double m = mu;
    if (ell > 0.0) {
        // mass budget m + ell eta_m(0)^2 = mu, strictly increasing in m
        const auto budget = [&](double mm) { return mm + ell * std::pow(eta.peak(mm), 2) - mu; };
        m = bisect(budget, mu * 1e-6, mu, 1e-12, 200);
    }

    const double plateau = eta.peak(m);
    GraphFunction u(grid);
    for (const Grid::Segment& s : grid->segments()) {
        if (s.halfline) {
            for (int k = 0; k <= s.n_intervals; ++k) {
                u[grid->node_at(s, k)] = eta.eval(m, k * s.dx);
            }
        } else {
            for (int k = 0; k <= s.n_intervals; ++k) u[grid->node_at(s, k)] = plateau;
        }
    }
    for (int v = 0; v < g.num_vertices(); ++v) u[v] = plateau;

    CompetitorResult r = finish(std::move(u), params);
    r.m = m;
    return r;
}

CompetitorResult compact_support_line_function(const NonlinearityParams& params, double grid_h) {
    params.validate();
    const LineConstants& c = LineConstants::for_p(params.p);
    // resolve the soliton width; the grid step must also divide 1 exactly so
    // the support boundary lands on nodes
    const double width = std::pow(params.mu, -c.beta);
    double h = grid_h > 0.0 ? grid_h : std::min(0.01, width / 50.0);
    h = 1.0 / std::ceil(1.0 / h);

    MetricGraph host = make_star(2);
    GridSpec spec;
    spec.h = h;
    spec.halfline_length = 2.0;
    auto grid = std::make_shared<const Grid>(std::move(host), spec);

    ClippedProfile w = make_clipped(params.p, params.mu, 1.0, params.mu, 2);
    CompetitorResult r = finish(sample_clipped_at_vertex(grid, 0, w), params);
    r.m = params.mu;
    r.delta = w.delta;
    r.kappa = w.kappa;
    return r;
}

GraphFunction scale(const GraphFunction& u, double p, double t) {
    if (!(t > 0.0)) throw std::invalid_argument("scale: t must be > 0");
    const LineConstants& c = LineConstants::for_p(p);
    const double len_factor = std::pow(t, -c.beta);
    const double val_factor = std::pow(t, c.alpha);

    const MetricGraph& g = u.grid->graph();
    std::vector<BoundedEdge> edges = g.edges();
    for (BoundedEdge& e : edges) e.length *= len_factor;
    MetricGraph scaled(g.vertex_ids(), std::move(edges), g.halfline_anchors());

    GridSpec spec = u.grid->spec();
    spec.h *= len_factor;
    spec.halfline_length *= len_factor;

    auto grid = std::make_shared<const Grid>(std::move(scaled), spec, u.grid->interval_counts());
    GraphFunction out(grid);
    out.values = u.values * val_factor;  // node layouts match exactly
    return out;
}

}  // namespace graphnls
