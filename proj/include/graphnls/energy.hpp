// Evaluation of mass, the standard energy E and the doubly nonlinear energy
// F on discretized graph functions, plus the mass projection and the
// Gagliardo-Nirenberg diagnostic ratios.
//
// Quadrature: trapezoidal rule edge-by-edge; derivatives are forward
// differences per interval, so the kinetic term is exactly the Dirichlet
// energy of the piecewise-linear interpolant and the Kirchhoff vertex
// coupling falls out of differentiating the discrete energy.
#pragma once

#include <string>

#include "graphnls/grid.hpp"
#include "graphnls/line_soliton.hpp"

namespace graphnls {

struct EnergyBreakdown {
    double kinetic = 0.0;  // 1/2 int |u'|^2
    double bulk = 0.0;     // 1/p int |u|^p
    double vertex = 0.0;   // tau/q sum_v |u(v)|^q, over ALL graph vertices
    double E = 0.0;        // kinetic - bulk
    double F = 0.0;        // E - vertex
    double mass = 0.0;     // int |u|^2
};

EnergyBreakdown evaluate(const GraphFunction& u, const NonlinearityParams& params);

double mass(const GraphFunction& u);
double sup_norm(const GraphFunction& u);
double lp_norm_pow(const GraphFunction& u, double r);  // int |u|^r, trapezoid
// Mass restricted to the bounded edges (0 on a star graph).
double core_mass(const GraphFunction& u);

// Rescales u to the prescribed mass. Throws on the zero function.
GraphFunction project_mass(const GraphFunction& u, double mu);

struct GnRatios {
    double r_p = 0.0;    // |u|_p^p / (|u|_2^{p/2+1} |u'|_2^{p/2-1})
    double r_inf = 0.0;  // |u|_inf^2 / (|u|_2 |u'|_2)
    bool derivative_zero = false;  // ratios reported as +inf
};

GnRatios gn_ratios(const GraphFunction& u, double p);

// Snapshot export, one row per sample: edge_id,arclength,value.
// Bounded edges are e0,e1,... in input order, half-lines h0,h1,...;
// arclength runs from the `from` endpoint (anchor for half-lines), and
// vertex samples are repeated on every incident edge.
void write_csv(const GraphFunction& u, const std::string& path);

}  // namespace graphnls
