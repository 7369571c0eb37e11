#include "cohtherm/awgn.hpp"

#include <cmath>
#include <stdexcept>

#include "cohtherm/rng.hpp"

namespace cohtherm {

double gaussian_q(double x) {
    if (!std::isfinite(x)) throw std::invalid_argument("gaussian_q: x must be finite");
    return 0.5 * std::erfc(x / std::sqrt(2.0));
}

double soft_exponent(const AwgnProblem& prob) {
    if (!(prob.energy >= 0.0 && prob.noise_psd > 0.0))
        throw std::invalid_argument("invalid AWGN problem");
    return prob.energy / (8.0 * prob.noise_psd);
}

double hard_exponent(const AwgnProblem& prob) {
    if (!(prob.snr() > 0.0)) throw std::invalid_argument("hard_exponent: snr must be positive");
    const double pe = gaussian_q(std::sqrt(prob.energy / (4.0 * prob.noise_psd)));
    return -std::log(2.0 * std::sqrt(pe * (1.0 - pe)));
}

std::pair<double, double> simulate_awgn(const AwgnProblem& prob, int m, int trials,
                                        std::uint64_t seed) {
    if (m < 1 || trials < 1) throw std::invalid_argument("m and trials must be positive");
    const double shift = std::sqrt(prob.energy);
    const double sigma = std::sqrt(prob.noise_psd);
    const double half = 0.5 * shift;  // per-copy midpoint threshold

    long soft_errors = 0;
    long hard_errors = 0;
    for (int trial = 0; trial < trials; ++trial) {
        rng::Stream stream(rng::derive_seed(seed, {static_cast<std::uint64_t>(trial)}));
        // Hypothesis H1 (signal present).
        double sum = 0.0;
        int votes = 0;
        for (int i = 0; i < m; ++i) {
            const double x = shift + sigma * stream.normal();
            sum += x;
            votes += x > half ? 1 : 0;
        }
        if (sum <= m * half) ++soft_errors;
        if (votes <= m / 2.0) ++hard_errors;  // tie votes resolve to H2
        // Hypothesis H2 (noise only).
        sum = 0.0;
        votes = 0;
        for (int i = 0; i < m; ++i) {
            const double x = sigma * stream.normal();
            sum += x;
            votes += x > half ? 1 : 0;
        }
        if (sum > m * half) ++soft_errors;
        if (votes > m / 2.0) ++hard_errors;
    }
    const double denom = 2.0 * static_cast<double>(trials);
    return {static_cast<double>(soft_errors) / denom, static_cast<double>(hard_errors) / denom};
}

}  // namespace cohtherm
