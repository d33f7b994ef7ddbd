// Closed-form solitons of the standard NLS energy on the real line, the
// exponents alpha/beta attached to the subcritical power p, and the derived
// constants (omega_1, theta_p). These are the analytic oracles the rest of
// the library is checked against.
#pragma once

#include <stdexcept>

namespace graphnls {

enum class MassRegime { Below, Critical, Above };  // q vs p/2 + 1

// Parameter bundle for the doubly nonlinear energy
//   F(u) = 1/2 |u'|_2^2 - 1/p |u|_p^p - tau/q sum_v |u(v)|^q
// under the mass constraint |u|_2^2 = mu.
struct NonlinearityParams {
    double p = 4.0;    // bulk exponent, 2 < p < 6
    double q = 3.0;    // vertex exponent, 2 < q < 4
    double tau = 1.0;  // vertex-term weight, tau >= 0 (0 recovers the standard energy)
    double mu = 1.0;   // prescribed mass

    void validate() const {
        if (!(p > 2.0 && p < 6.0)) throw std::invalid_argument("p must lie in (2,6)");
        if (!(q > 2.0 && q < 4.0)) throw std::invalid_argument("q must lie in (2,4)");
        if (!(tau >= 0.0)) throw std::invalid_argument("tau must be >= 0");
        if (!(mu > 0.0)) throw std::invalid_argument("mu must be > 0");
    }

    MassRegime regime() const {
        const double crit = 0.5 * p + 1.0;
        if (q < crit) return MassRegime::Below;
        if (q > crit) return MassRegime::Above;
        return MassRegime::Critical;
    }
};

// alpha = 2/(6-p), beta = (p-2)/(6-p)
double soliton_alpha(double p);
double soliton_beta(double p);

struct LineConstants {
    double p = 0.0;
    double alpha = 0.0;
    double beta = 0.0;
    double omega1 = 0.0;     // frequency of the mass-1 soliton
    double phi1_at_0 = 0.0;  // peak value of the mass-1 soliton
    double theta_p = 0.0;    // -E(phi_1, R) > 0

    // Computes (and memoizes) the constants for a given p. omega1 is found by
    // root-finding on the quadrature mass map M(omega), which is strictly
    // increasing, so the root is unique.
    static const LineConstants& for_p(double p);
};

// Mass-1 profile at frequency omega:
//   phi(x) = [ p/2 * omega * sech^2( (p-2)/2 * sqrt(omega) * x ) ]^{1/(p-2)}
double soliton_profile(double p, double omega, double x);

// Quadrature mass integral M(omega) of the profile above (tail-truncated so
// the neglected part is < 1e-14 relative; doubling the window is covered by
// tests).
double soliton_mass_quadrature(double p, double omega);

// omega_1 such that the mass-1 profile really has unit mass.
double soliton_frequency(double p);

// theta_p = omega_1 (6-p) / (2 (p+2)); cross-checked against quadrature of
// -E(phi_1, R) in the test suite.
double theta(double p);

// phi_mu(x) = mu^alpha phi_1(mu^beta x)
double soliton_eval(double p, double mu, double x);

// E(phi_mu, R) evaluated by adaptive quadrature (independent of theta()).
double line_energy_quadrature(double p, double mu);

// |theta_p (2 beta + 1) - phi_1(0)^{p-2} / p|
double verify_identity_appendixA(double p);

}  // namespace graphnls
