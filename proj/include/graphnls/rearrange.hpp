// Rearrangement constructions on discretized graph functions.
//
// Everything here works on uniform common grids (all segments must share one
// grid step dx; resample first otherwise), so a rearrangement is a weighted
// sort with equal weights and equimeasurability is exact at the sample
// level. The module therefore states its quantitative contracts in the
// sample convention:
//   sample mass / L^r:  dx * sum over samples (vertex samples counted once),
//   kinetic:            sum over consecutive samples of (dv)^2 / (2 dx),
// which differs from the trapezoidal quadrature of energy.hpp only in the
// half-weights at segment ends.
//
// Half-line profiles returned by split_halfline_rearrangement carry their
// boundary value in v[0] with ZERO measure weight (samples j >= 1 own the
// cell ((j-1) dx, j dx]); this is what makes the boundary-value and mass
// bookkeeping contracts hold exactly at the same time.
#pragma once

#include <span>
#include <vector>

#include "graphnls/grid.hpp"

namespace graphnls {

// Non-increasing sort of the samples; equimeasurable by construction and the
// discrete kinetic energy never increases (the monotone arrangement minimizes
// sums of squared consecutive differences over all orderings).
std::vector<double> decreasing_rearrangement(std::span<const double> samples);

struct SymmetricRearrangement {
    std::vector<double> values;  // unimodal, smallest values at both ends
    // discrete analogue of the "every value attained at least twice except
    // possibly the max" hypothesis; kinetic non-increase is only guaranteed
    // when this holds
    bool twice_attained = false;
};
SymmetricRearrangement symmetric_rearrangement(std::span<const double> samples);

// Sample-convention quantities for graph functions (uniform dx required).
double uniform_dx(const GraphFunction& u);  // throws if segments disagree
double sample_mass(const GraphFunction& u);
double sample_lp_pow(const GraphFunction& u, double r);
double sample_energy(const GraphFunction& u, double p);  // kinetic - bulk/p
// Same quantities restricted to the half-lines (anchor samples excluded from
// the measure, but anchor values enter the kinetic differences).
double sample_mass_halflines(const GraphFunction& u);
double sample_energy_halflines(const GraphFunction& u, double p);

struct Star3Rearranged {
    GraphFunction fn;           // on a 3-star grid with the same dx
    double vertex_value = 0.0;  // = min over V+ of the input vertex values
};

// Rearranges a positive function on a graph satisfying the trail condition
// with N >= 3 half-lines onto the 3-star: the part above the smallest
// V+ vertex value is symmetrically rearranged into a bump grafted onto one
// half-line, the rest is sorted onto the three half-lines. Mass and L^r
// sample norms are preserved exactly; the energy comparison
// sample_energy(out) <= sample_energy(in) + slack is the tested contract.
Star3Rearranged rearrange_to_star3(const GraphFunction& u);

struct HalfLineProfile {
    double dx = 0.0;
    std::vector<double> v;  // v[0] = boundary value at x = 0, zero weight

    double mass() const;
    double lp_pow(double r) const;
    double kinetic() const;
    double energy(double p) const { return kinetic() - lp_pow(p) / p; }
    bool nonincreasing(double tol = 0.0) const;
    bool unimodal(double tol = 0.0) const;  // non-decreasing then non-increasing
};

struct SplitHalflineResult {
    HalfLineProfile u1;  // starts at min over V+ of u(v), non-increasing
    HalfLineProfile u2;  // starts at |u|_{L^inf(K)}, rises to a max, then falls
};

// Discrete version of the two-profile half-line rearrangement:
//   2 mass(u1) + mass(u2) = sample mass of u on the half-lines (exact),
//   2 E(u1) + E(u2) <= sample E of u on the half-lines (up to slack),
// requires |u|_{L^inf(K)} < |u|_{L^inf over half-line samples}. For a graph
// with an empty core the stratum above M = 0 absorbs every sample: u2 is its
// symmetric rearrangement, starting and ending at 0, and u1 degenerates to
// its boundary value.
SplitHalflineResult split_halfline_rearrangement(const GraphFunction& u);

}  // namespace graphnls
