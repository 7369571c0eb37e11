#pragma once

#include <cstdint>
#include <utility>

namespace cohtherm {

// Multi-copy detection of a constant signal in white Gaussian noise,
// reduced to its per-copy matched-filter statistic: mean sqrt(energy) under
// H1, zero under H2, variance noise_psd.  Single-copy minimum error
// probability is Q(sqrt(E/4 sigma^2)).
struct AwgnProblem {
    double energy = 1.0;     // E, per-copy signal energy
    double noise_psd = 1.0;  // sigma^2

    double snr() const { return energy / noise_psd; }
};

// Upper-tail standard normal probability, Q(x) = P(N(0,1) > x).
double gaussian_q(double x);

// Soft-decision (sufficient statistic retained) exponent: E / 8 sigma^2.
double soft_exponent(const AwgnProblem& prob);

// Hard-decision (per-copy sign decisions, binomial MLDR) exponent:
// -ln[2 sqrt(Pe (1-Pe))] with Pe = Q(sqrt(E/4 sigma^2)).  Unbiased: the two
// conditional errors are equal.  Approaches E/(4 pi sigma^2) as snr -> 0,
// so soft/hard -> pi/2.
double hard_exponent(const AwgnProblem& prob);

// Monte Carlo error estimates for M copies: soft rule thresholds the summed
// statistic, hard rule majority-votes per-copy decisions.  Returns
// (soft perr, hard perr); deterministic per seed.
std::pair<double, double> simulate_awgn(const AwgnProblem& prob, int m, int trials,
                                        std::uint64_t seed);

}  // namespace cohtherm
