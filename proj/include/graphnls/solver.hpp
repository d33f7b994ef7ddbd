// Mass-constrained minimization of the doubly nonlinear energy on a
// discretized graph, existence verdicts against the line soliton level,
// threshold bisection, and the line-with-delta ground state.
//
// The iteration is a projected gradient flow in the L^2 metric with the
// kinetic part treated implicitly (backward Euler), so the step size is not
// tied to the grid resolution: each step solves (M + dt K) u* = M (u + dt g)
// for the lumped mass matrix M and graph stiffness K, takes |u*|, restores
// the Dirichlet values at the truncated half-line ends and projects back to
// the mass sphere. Steps are halved until the energy decreases, so the
// per-iteration energy sequence is non-increasing by construction.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "graphnls/competitors.hpp"
#include "graphnls/energy.hpp"
#include "graphnls/grid.hpp"

namespace graphnls {

enum class Verdict { ExistenceCertified, LikelyNonexistent, Inconclusive };

std::string to_string(Verdict v);

struct SolveConfig {
    GridSpec grid{-1.0, -1.0};  // negative entries: derive from (graph, params)
    int max_iters = 20000;
    double step0 = -1.0;      // initial flow step; negative: derive from params
    double tol = 1e-9;        // relative energy flatline over `window` iterations
    int window = 40;
    int num_random_starts = 2;
    bool include_vertex_starts = true;
    bool include_parked_starts = true;
    bool include_competitor_starts = true;
    bool escape_probes = true;  // restart heuristics for starts stuck above the level
    std::uint64_t seed = 1234;
    double verdict_margin_frac = 0.005;   // eps_v as a fraction of |soliton level|
    double core_escape_fraction = 0.01;   // mass fraction on the core counting as escaped
    int threads = 0;                      // 0: GRAPHNLS_THREADS or hardware
};

struct StartOutcome {
    std::string kind;
    double final_F = 0.0;
    double gap = 0.0;
    int iters = 0;
    bool converged = false;
    bool escape_probe_improved = false;
    std::vector<double> trajectory;  // accepted energy values, non-increasing
};

struct SolveDiagnostics {
    double core_mass_fraction = 0.0;
    double sup_distance_to_vertex = 0.0;  // arclength from the peak node to a vertex
    int monotonicity_violations = 0;
    std::vector<StartOutcome> starts;
};

struct SolveReport {
    GraphFunction best;
    EnergyBreakdown breakdown;
    double soliton_level = 0.0;
    double gap = 0.0;
    Verdict verdict = Verdict::Inconclusive;
    SolveDiagnostics diagnostics;
    NonlinearityParams params;
    GridSpec grid_used;
};

// Grid heuristics: step and truncation follow the soliton width mu^{-beta},
// h = 0.02 mu^{-beta}, L = 60 mu^{-beta}.
GridSpec default_grid_spec(const NonlinearityParams& params);

SolveReport minimize(const MetricGraph& g, const NonlinearityParams& params,
                     const SolveConfig& cfg = {});

// Ground state of the line-with-delta problem, hosted on a 2-star graph.
SolveReport line_delta_ground_state(const NonlinearityParams& params,
                                    const SolveConfig& cfg = {});

// eta profile backed by cached line_delta_ground_state solves at each
// requested mass; usable with eta_plateau.
LineDeltaProfile line_delta_profile(const NonlinearityParams& base, const SolveConfig& cfg = {});

struct BisectionResult {
    double mu_lo = 0.0, mu_hi = 0.0;
    double mu_star = 0.0;  // geometric midpoint of the final bracket
    Verdict verdict_lo = Verdict::Inconclusive, verdict_hi = Verdict::Inconclusive;
    int solves = 0;
};

// Bisects the mass (geometric midpoints) until the bracket relative width
// drops below `rel_width`. The verdicts at mu_lo and mu_hi must differ and
// must not be Inconclusive. Monotonicity of the verdict in mu holds on star
// graphs and is a heuristic elsewhere.
BisectionResult threshold_bisection(const MetricGraph& g, const NonlinearityParams& params,
                                    const SolveConfig& cfg, double mu_lo, double mu_hi,
                                    double rel_width = 0.05);

struct MonotonicityViolation {
    int segment = 0;  // index into grid.segments()
    int k = 0;        // sample index along the half-line
    double amount = 0.0;
    const char* kind = "";  // "increase" or "asymmetry"
};

// Checks that the minimizer is equal across the half-lines at every vertex
// carrying >= 2 of them and non-increasing outward on each.
std::vector<MonotonicityViolation> radial_monotonicity_check(const SolveReport& report,
                                                             double tol_rel = 1e-4);

}  // namespace graphnls
