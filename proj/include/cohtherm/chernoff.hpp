#pragma once

#include "cohtherm/photon.hpp"
#include "cohtherm/stats.hpp"

namespace cohtherm {

// Result of minimizing Q_s over s in [0, 1]: the minimizer, the minimum
// value, and the error exponent xi = -ln(q_min) in nats per copy.
// Disjoint supports are flagged with q_min = 0, xi = +infinity.
struct ChernoffResult {
    double s_min = 0.5;
    double q_min = 1.0;
    double xi = 0.0;
};

// Q_s = (1-p)^s q^(1-s) + p^s (1-q)^(1-s) for a two-outcome measurement with
// conditional error probabilities p and q.  Boundary values of p, q, s use
// the 0^0 = 1 convention.
double q_s_binary(double p, double q, double s);

// Closed-form minimizer of Q_s for 0 < p, q < 1 with p + q < 1.
// When p + q = 1, Q_s is constant and 1/2 is returned by convention.
double s_min_closed_form(double p, double q);

// Minimum of Q_s over s for a two-outcome measurement, evaluated with the
// continuous (common-support) convention so boundary minima give the correct
// exponent, e.g. p = 0 yields xi = -ln(q).
ChernoffResult binary_chernoff_exponent(double p, double q);

// Chernoff exponent of a count-resolving measurement:
// Q_s = sum_n pmf1[n]^s pmf2[n]^(1-s) over the common support, minimized
// over s in [0, 1].
ChernoffResult chernoff_exponent_pmf(const PhotonPMF& pmf1, const PhotonPMF& pmf2);

// Quantum Chernoff exponent for coherent vs thermal states of equal mean
// photon number: nbar/(nbar+1) + ln(nbar+1) = -ln F(rho_coh, rho_th).
double qcb_coh_thermal(double nbar_r);

// Curvature coefficient of the bias expansion
//   Q_smin(b) = 2 sqrt(P(1-P)) - G(P) b^2 + O(b^4)
// for conditional errors p = (1+b)P, q = (1-b)P.  Strictly positive on
// (0, 1/2), with G -> 0 at both endpoints' limits.
double g_function(double perr);

// Upper bound on the multi-copy exponent of any copy-by-copy two-outcome
// measurement with bias b, truncated at order b^2:
//   -ln(F)/2 + G([1 - sqrt(1-F)]/2) / sqrt(F) * b^2.
double exponent_upper_bound(double fidelity_val, double bias);

// Fidelity-based lower bound -ln[sqrt(F)(2 - sqrt(F))]/2 on the exponent of
// the minimum-error single-copy measurement.
double helstrom_exponent_lower_bound(double fidelity_val);

// Lowest-order photon-starved exponents for each strategy.
struct Table1Asymptotics {
    double qcb_kennedy = 0.0;    // 2 nbar
    double helstrom_upper = 0.0; // nbar
    double helstrom = 0.0;       // nbar / 2
    double gk_upper = 0.0;       // 2 [1 + (1 - sqrt(e))^2] nbar / e
    double dd = 0.0;             // (1 - log2[ln(2^e)]) nbar^2 / 2
};

Table1Asymptotics table1_asymptotics(double nbar_r);

// Exponent and single-copy stats of the minimum-error measurement on the
// `dim`-level truncations of the two states.  dim = 2 is the qubit
// approximation valid in the photon-starved regime.  Stats are reported in
// the thermal-first orientation, so the photon-starved bias is
// +sqrt(nbar) + O(nbar).
struct HelstromPoint {
    SingleCopyStats stats;
    ChernoffResult chernoff;
};

HelstromPoint helstrom_point(double nbar_r, int dim);
ChernoffResult helstrom_exponent_exact(double nbar_r, int dim);

}  // namespace cohtherm
