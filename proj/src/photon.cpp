#include "cohtherm/photon.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cohtherm {

namespace {

constexpr double kAdaptiveTail = 1e-13;
constexpr int kHardMax = 1 << 16;

void require(bool ok, const char* msg) {
    if (!ok) throw std::invalid_argument(msg);
}

PhotonPMF finalize(std::vector<double> probs) {
    PhotonPMF pmf;
    pmf.probs = std::move(probs);
    double sum = 0.0;
    for (double& v : pmf.probs) {
        if (v < 0.0) v = 0.0;  // recurrence roundoff deep in the tail
        sum += v;
    }
    pmf.tail_mass = std::max(0.0, 1.0 - sum);
    return pmf;
}

PhotonPMF poisson_pmf(double mean, int cutoff) {
    std::vector<double> probs;
    double term = std::exp(-mean);
    double cum = term;
    probs.push_back(term);
    const auto done = [&](int n) {
        if (cutoff >= 0) return n >= cutoff;
        return (cum >= 1.0 - kAdaptiveTail && n >= mean) || n >= kHardMax;
    };
    int n = 0;
    while (!done(n)) {
        ++n;
        term *= mean / n;
        cum += term;
        probs.push_back(term);
    }
    return finalize(std::move(probs));
}

}  // namespace

PhotonPMF displaced_coherent_pmf(double nbar, double beta, int cutoff) {
    require(nbar >= 0.0 && std::isfinite(nbar), "nbar must be finite and non-negative");
    require(beta >= 0.0 && std::isfinite(beta), "beta must be finite and non-negative");
    const double root = std::sqrt(nbar) - beta;
    return poisson_pmf(root * root, cutoff);
}

PhotonPMF displaced_thermal_pmf(double nbar, double beta, int cutoff) {
    require(nbar >= 0.0 && std::isfinite(nbar), "nbar must be finite and non-negative");
    require(beta >= 0.0 && std::isfinite(beta), "beta must be finite and non-negative");
    if (nbar == 0.0) return poisson_pmf(beta * beta, cutoff);  // displaced vacuum

    // Laguerre (noncentral Bose-Einstein) distribution,
    //   P(n) = r^n/(1+nbar) exp(-beta^2/(1+nbar)) L_n(x),
    //   r = nbar/(1+nbar),  x = -beta^2/(nbar (1+nbar)).
    // The three-term Laguerre recurrence is carried directly on P(n), where
    // every factor stays bounded, instead of on L_n(x) which overflows for
    // photon-starved nbar.
    const double r = nbar / (nbar + 1.0);
    const double c = beta * beta / ((nbar + 1.0) * (nbar + 1.0));  // = -x r
    std::vector<double> probs;
    double p_prev = 0.0;
    double p_cur = std::exp(-beta * beta / (nbar + 1.0)) / (nbar + 1.0);
    probs.push_back(p_cur);
    double cum = p_cur;
    const double mean = nbar + beta * beta;
    const auto done = [&](int n) {
        if (cutoff >= 0) return n >= cutoff;
        return (cum >= 1.0 - kAdaptiveTail && n >= mean) || n >= kHardMax;
    };
    int n = 0;
    while (!done(n)) {
        // (n+1) L_{n+1} = (2n+1-x) L_n - n L_{n-1}, rescaled by r^{n+1}:
        double p_next = ((r * (2 * n + 1) + c) * p_cur - n * r * r * p_prev) / (n + 1);
        if (p_next < 0.0) p_next = 0.0;
        p_prev = p_cur;
        p_cur = p_next;
        probs.push_back(p_cur);
        cum += p_cur;
        ++n;
    }
    return finalize(std::move(probs));
}

PhotonPMF apply_detector(const PhotonPMF& pmf, const DetectorModel& det) {
    require(det.efficiency > 0.0 && det.efficiency <= 1.0, "efficiency must be in (0,1]");
    require(det.dark_mean >= 0.0, "dark_mean must be non-negative");
    require(det.saturation >= 1, "saturation must be >= 1");

    const int n_in = static_cast<int>(pmf.probs.size());

    // Binomial thinning at the detector efficiency.
    std::vector<double> thinned;
    if (det.efficiency == 1.0) {
        thinned = pmf.probs;
    } else {
        thinned.assign(pmf.probs.size(), 0.0);
        const double eta = det.efficiency;
        for (int n = 0; n < n_in; ++n) {
            const double mass = pmf.probs[static_cast<std::size_t>(n)];
            if (mass == 0.0) continue;
            double term = mass * std::pow(1.0 - eta, n);  // k = 0
            thinned[0] += term;
            for (int k = 1; k <= n; ++k) {
                term *= static_cast<double>(n - k + 1) / k * eta / (1.0 - eta);
                thinned[static_cast<std::size_t>(k)] += term;
            }
        }
    }

    // Convolution with Poisson dark counts.
    std::vector<double> out;
    if (det.dark_mean == 0.0) {
        out = std::move(thinned);
    } else {
        std::vector<double> dark;
        double term = std::exp(-det.dark_mean);
        double cum = term;
        dark.push_back(term);
        int k = 0;
        while (1.0 - cum > 1e-16 && k < kHardMax) {
            ++k;
            term *= det.dark_mean / k;
            cum += term;
            dark.push_back(term);
        }
        out.assign(thinned.size() + dark.size() - 1, 0.0);
        for (std::size_t i = 0; i < thinned.size(); ++i) {
            if (thinned[i] == 0.0) continue;
            for (std::size_t j = 0; j < dark.size(); ++j) out[i + j] += thinned[i] * dark[j];
        }
    }

    // Fold everything above the saturation cap into the cap bin.
    if (static_cast<int>(out.size()) - 1 > det.saturation) {
        double overflow = 0.0;
        for (std::size_t n = static_cast<std::size_t>(det.saturation) + 1; n < out.size(); ++n)
            overflow += out[n];
        out.resize(static_cast<std::size_t>(det.saturation) + 1);
        out.back() += overflow;
    }

    double sum = 0.0;
    for (double v : out) sum += v;
    for (double& v : out) v /= sum;
    PhotonPMF result;
    result.probs = std::move(out);
    result.tail_mass = 0.0;
    return result;
}

std::vector<int> sample_counts(const PhotonPMF& pmf, rng::Stream& stream, std::size_t n_samples) {
    require(!pmf.probs.empty(), "empty pmf");
    std::vector<double> cdf(pmf.probs.size());
    double cum = 0.0;
    for (std::size_t n = 0; n < pmf.probs.size(); ++n) {
        cum += pmf.probs[n];
        cdf[n] = cum;
    }
    std::vector<int> counts(n_samples);
    for (std::size_t i = 0; i < n_samples; ++i) {
        const double u = stream.uniform();
        const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        // u beyond the accumulated mass (tail) lands in the cutoff bin.
        counts[i] = static_cast<int>(it == cdf.end() ? cdf.size() - 1 : it - cdf.begin());
    }
    return counts;
}

}  // namespace cohtherm
