// Explicit trial functions whose energy certifies existence of ground
// states: soliton tails with a core plateau, clipped solitons supported
// near a vertex, the line-with-delta plateau construction, a compactly
// supported line profile, and the scaling transform.
#pragma once

#include <optional>

#include "graphnls/energy.hpp"
#include "graphnls/grid.hpp"

namespace graphnls {

struct CompetitorResult {
    GraphFunction fn;
    double m = 0.0;      // internal mass parameter of the construction
    double delta = 0.0;  // clip level, when applicable
    double kappa = 0.0;  // mass rescale factor, when applicable
    EnergyBreakdown breakdown;
    double soliton_level = 0.0;       // -theta_p mu^{2 beta + 1}
    bool beats_soliton_level = false;  // F < soliton_level
};

// Soliton tail phi_m on every half-line (peak at the anchor) and the constant
// plateau |phi_m|_inf on the whole compact core; m solves
//   mu = N/2 m + ell |phi_1(0)|^2 m^{2 alpha}
// by bisection (the map is strictly increasing in m).
CompetitorResult plateau_soliton(const std::shared_ptr<const Grid>& grid,
                                 const NonlinearityParams& params);

// w(x) = kappa (Phi_mu(x) - delta)_+ radially at a vertex of degree >= 3,
// where Phi_mu restricts to phi_{2 mu / deg} on each emanating edge. delta is
// tuned by nested bisections so the support radius matches the largest
// admissible ball around the vertex; kappa restores the mass.
CompetitorResult truncated_star_soliton(const std::shared_ptr<const Grid>& grid, int vertex,
                                        const NonlinearityParams& params);

// Same clipping construction for a degree-2 vertex with the full-line soliton
// phi_mu, supported on the two incident edges.
CompetitorResult truncated_line_soliton_at_deg2(const std::shared_ptr<const Grid>& grid,
                                                int vertex, const NonlinearityParams& params);

// For graphs with exactly two half-lines: eta_m halves on the half-lines and
// the constant eta_m(0) on the compact core, with m adjusted so that
// m + ell eta_m(0)^2 = mu. The line ground state eta is supplied by the
// caller as (eta_of_m, eta_peak_of_m): profile value at radius r and peak.
struct LineDeltaProfile {
    // value of eta_m at distance r from the origin
    std::function<double(double m, double r)> eval;
    // eta_m(0)
    std::function<double(double m)> peak;
};
CompetitorResult eta_plateau(const std::shared_ptr<const Grid>& grid,
                             const NonlinearityParams& params, const LineDeltaProfile& eta);

// f_mu = kappa (phi_mu - delta)_+ with support exactly [-1,1], realized on a
// 2-star host graph centered at the vertex.
CompetitorResult compact_support_line_function(const NonlinearityParams& params,
                                               double grid_h = -1.0);

// The invariance transform: edge lengths and truncations scale by t^{-beta},
// samples by u_t = t^alpha u(t^beta .) on the matching grid, so node values
// transfer exactly and the new mass is t times the old one.
GraphFunction scale(const GraphFunction& u, double p, double t);

}  // namespace graphnls
