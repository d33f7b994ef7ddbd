#include <doctest.h>

#include <cmath>
#include <random>

#include "graphnls/competitors.hpp"
#include "graphnls/energy.hpp"
#include "graphnls/line_soliton.hpp"
#include "graphnls/metric_graph.hpp"
#include "graphnls/solver.hpp"

using namespace graphnls;

namespace {

NonlinearityParams make_params(double p, double q, double mu, double tau = 1.0) {
    NonlinearityParams out;
    out.p = p;
    out.q = q;
    out.tau = tau;
    out.mu = mu;
    return out;
}

std::shared_ptr<const Grid> grid_for(const MetricGraph& g, const NonlinearityParams& params) {
    GridSpec spec = default_grid_spec(params);
    return std::make_shared<const Grid>(g, spec);
}

}  // namespace

TEST_CASE("plateau: on a star the mass budget gives m = 2 mu / N exactly") {
    const auto params = make_params(4.0, 2.5, 0.3);
    auto grid = grid_for(make_star(3), params);
    const CompetitorResult r = plateau_soliton(grid, params);
    CHECK(r.m == doctest::Approx(0.2).epsilon(1e-10));
    CHECK(r.breakdown.F < 0.0);
    CHECK(std::abs(r.breakdown.mass - 0.3) < 1e-10 * 0.3);
}

TEST_CASE("plateau beats the soliton level at small mass below the diagonal") {
    const auto params = make_params(4.0, 2.5, 0.05);
    CHECK(plateau_soliton(grid_for(make_star(3), params), params).beats_soliton_level);
    // with a nonempty compact core the plateau part joins in
    CHECK(plateau_soliton(grid_for(make_fig1(), params), params).beats_soliton_level);
}

TEST_CASE("plateau on a star matches (N/2) E(phi_{2mu/N}) minus the vertex term") {
    const auto params = make_params(4.0, 2.5, 0.3);
    auto grid = grid_for(make_star(3), params);
    const CompetitorResult r = plateau_soliton(grid, params);
    const double m = 2.0 * 0.3 / 3.0;
    const double expected_E = 1.5 * line_energy_quadrature(4.0, m);
    CHECK(r.breakdown.E == doctest::Approx(expected_E).epsilon(1e-4));
    const double peak = soliton_eval(4.0, m, 0.0);
    CHECK(r.breakdown.vertex == doctest::Approx(std::pow(peak, 2.5) / 2.5).epsilon(1e-4));
}

TEST_CASE("star clip: support containment and mass") {
    const auto params = make_params(4.0, 3.5, 50.0);
    const MetricGraph g = make_fig7_Gk(5);
    auto grid = grid_for(g, params);
    const CompetitorResult r = truncated_star_soliton(grid, 0, params);  // v1 has degree 3
    CHECK(std::abs(r.breakdown.mass - 50.0) < 1e-10 * 50.0);
    CHECK(r.beats_soliton_level);  // large-mass regime above the diagonal
    // support radius is capped by the shortest incident edge (length 1)
    const Grid& gr = *r.fn.grid;
    for (const Grid::Segment& s : gr.segments()) {
        if (!s.halfline) continue;
        for (int k = 0; k <= s.n_intervals; ++k) {
            if (k * s.dx >= 1.0) CHECK(r.fn[gr.node_at(s, k)] == 0.0);
        }
    }
}

TEST_CASE("star clip approaches the radial star level as mu grows") {
    const auto params = make_params(4.0, 3.5, 100.0);
    // truncation long enough that the clip radius is set by the profile decay
    auto grid = std::make_shared<const Grid>(make_star(3), GridSpec{2e-4, 1.5});
    const CompetitorResult r = truncated_star_soliton(grid, 0, params);
    const double nu = 2.0 * 100.0 / 3.0;
    const double expected = 1.5 * (-theta(4.0) * std::pow(nu, 3.0));
    CHECK(r.breakdown.E == doctest::Approx(expected).epsilon(1e-2));
    CHECK(r.delta < 1e-6 * soliton_eval(4.0, nu, 0.0));
    CHECK(r.kappa == doctest::Approx(1.0).epsilon(1e-2));
}

TEST_CASE("star clip rejects low-degree vertices") {
    const auto params = make_params(4.0, 3.5, 10.0);
    const MetricGraph g = make_fig6_Gl(2.0);
    auto grid = grid_for(g, params);
    CHECK_THROWS_AS(truncated_star_soliton(grid, 0, params), std::invalid_argument);
}

TEST_CASE("deg2 clip: symmetry and the large-mass certificate") {
    const auto params = make_params(4.0, 2.5, 50.0);
    const MetricGraph g = make_fig6_Gl(2.0);
    auto grid = grid_for(g, params);
    const CompetitorResult r = truncated_line_soliton_at_deg2(grid, 0, params);
    CHECK(r.beats_soliton_level);
    CHECK(std::abs(r.breakdown.mass - 50.0) < 1e-10 * 50.0);
    // equal values equidistant from the degree-2 vertex on its two edges
    const Grid& gr = *r.fn.grid;
    const auto& s0 = gr.segments()[0];
    const auto& s1 = gr.segments()[1];
    for (int k = 0; k <= std::min(s0.n_intervals, s1.n_intervals); ++k) {
        CHECK(r.fn[gr.node_at(s0, k)] ==
              doctest::Approx(r.fn[gr.node_at(s1, k)]).epsilon(1e-12));
    }
    CHECK_THROWS_AS(truncated_line_soliton_at_deg2(grid, 1, params), std::invalid_argument);
}

TEST_CASE("deg2 clip with a short edge still holds its mass (no level claim)") {
    const auto params = make_params(4.0, 2.5, 0.4);
    const MetricGraph g = make_fig6_Gl(0.4);
    GridSpec spec = default_grid_spec(params);
    spec.h = 0.004;  // resolve the short edges
    auto grid = std::make_shared<const Grid>(g, spec);
    const CompetitorResult r = truncated_line_soliton_at_deg2(grid, 0, params);
    CHECK(std::abs(r.breakdown.mass - 0.4) < 1e-10);
}

TEST_CASE("eta plateau: mass budget and the small-mass certificate") {
    const auto params = make_params(4.0, 3.5, 0.02);
    const MetricGraph g = make_fig7_Gk(3);
    auto grid = grid_for(g, params);
    const LineDeltaProfile eta = line_delta_profile(params);
    const CompetitorResult r = eta_plateau(grid, params, eta);
    CHECK(r.beats_soliton_level);
    CHECK(std::abs(r.breakdown.mass - 0.02) < 1e-10 * 0.02);
    // budget: m + ell eta_m(0)^2 = mu
    const double budget = r.m + g.core_length() * std::pow(eta.peak(r.m), 2.0);
    CHECK(std::abs(budget - 0.02) < 1e-8);
}

TEST_CASE("eta plateau on a coreless host degenerates to eta itself") {
    const auto params = make_params(4.0, 3.0, 0.5);
    auto grid = grid_for(make_star(2), params);
    const LineDeltaProfile eta = line_delta_profile(params);
    const CompetitorResult r = eta_plateau(grid, params, eta);
    CHECK(r.m == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(r.fn[0] == doctest::Approx(eta.peak(0.5)).epsilon(1e-6));
}

TEST_CASE("compact support profile on [-1,1]") {
    const auto params = make_params(4.0, 2.5, 100.0);
    const CompetitorResult r = compact_support_line_function(params);
    const Grid& gr = *r.fn.grid;
    for (const Grid::Segment& s : gr.segments()) {
        for (int k = 0; k <= s.n_intervals; ++k) {
            const double x = k * s.dx;
            if (x >= 1.0) {
                CHECK(r.fn[gr.node_at(s, k)] == 0.0);
            } else if (x < 1.0 - s.dx) {
                CHECK(r.fn[gr.node_at(s, k)] > 0.0);
            }
        }
    }
    CHECK(std::abs(r.breakdown.mass - 100.0) < 1e-10 * 100.0);
    // the large-mass certificate: F < -theta_4 mu^3
    CHECK(r.beats_soliton_level);
}

TEST_CASE("scaling transform") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> uni(0.1, 1.0);
    auto grid = std::make_shared<const Grid>(make_fig1(), GridSpec{0.05, 8.0});
    GraphFunction u(grid);
    for (int i = 0; i < grid->node_count(); ++i) {
        if (!grid->is_dirichlet(i)) u[i] = uni(rng);
    }
    u = project_mass(u, 2.0);

    SUBCASE("t = 1 is the identity") {
        const GraphFunction v = scale(u, 4.0, 1.0);
        CHECK((v.values - u.values).cwiseAbs().maxCoeff() < 1e-14);
    }
    SUBCASE("mass scales by t for any p") {
        for (double p : {2.7, 4.0, 5.1}) {
            const GraphFunction v = scale(u, p, 3.0);
            CHECK(std::abs(mass(v) - 6.0) < 1e-10 * 6.0);
        }
    }
    SUBCASE("normalized E is invariant") {
        const auto params = make_params(4.0, 3.0, 2.0, 0.0);
        const double bpow = 3.0;  // 2 beta + 1 at p = 4
        const double ref = evaluate(u, params).E / std::pow(2.0, bpow);
        for (double t : {0.5, 2.0}) {
            const GraphFunction v = scale(u, 4.0, t);
            const double got = evaluate(v, params).E / std::pow(mass(v), bpow);
            CHECK(got == doctest::Approx(ref).epsilon(1e-8));
        }
    }
    SUBCASE("scale then unscale returns the original energy") {
        const auto params = make_params(3.4, 3.0, 2.0, 0.0);
        const double e0 = evaluate(u, params).E;
        const GraphFunction v = scale(scale(u, 3.4, 2.5), 3.4, 1.0 / 2.5);
        CHECK(std::abs(evaluate(v, params).E - e0) < 1e-10 * std::abs(e0));
    }
}
