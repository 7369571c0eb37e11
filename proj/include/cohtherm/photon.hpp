#pragma once

#include <cstdint>
#include <vector>

#include "cohtherm/rng.hpp"

namespace cohtherm {

// Finite photon-count distribution.  probs[n] for n = 0..cutoff plus the
// explicit mass beyond the cutoff; sum(probs) + tail_mass = 1.
struct PhotonPMF {
    std::vector<double> probs;
    double tail_mass = 0.0;

    int cutoff() const { return static_cast<int>(probs.size()) - 1; }
    double at(int n) const {
        return (n >= 0 && n < static_cast<int>(probs.size())) ? probs[static_cast<std::size_t>(n)] : 0.0;
    }
};

// Photodetector imperfections applied to ideal count statistics:
// binomial thinning at `efficiency`, Poisson extraneous counts with mean
// `dark_mean` per window, and a hard count cap `saturation` standing in for
// dead-time-limited quasi-PNR operation.
struct DetectorModel {
    double efficiency = 1.0;
    double dark_mean = 4e-4;
    int saturation = 20;

    static DetectorModel ideal() { return DetectorModel{1.0, 0.0, 1 << 30}; }
    // Parameters of the measured hardware: 45% end-to-end efficiency and
    // 4e-4 extraneous counts per microsecond window.
    static DetectorModel measured() { return DetectorModel{0.45, 4e-4, 20}; }
};

// Counting statistics of a displaced coherent state: Poisson with mean
// (sqrt(nbar) - beta)^2.  cutoff < 0 selects an adaptive cutoff with tail
// below ~1e-13.
PhotonPMF displaced_coherent_pmf(double nbar, double beta, int cutoff = -1);

// Counting statistics of a displaced thermal state (Laguerre / noncentral
// Bose-Einstein distribution).  Reduces to Bose-Einstein at beta = 0 and to
// Poisson(beta^2) at nbar = 0; probs[0] = exp(-beta^2/(1+nbar))/(1+nbar).
PhotonPMF displaced_thermal_pmf(double nbar, double beta, int cutoff = -1);

// Thinning + dark-count convolution + saturation fold; output is normalized
// with zero tail.
PhotonPMF apply_detector(const PhotonPMF& pmf, const DetectorModel& det);

// i.i.d. inverse-CDF samples; tail mass lands in the cutoff bin.
std::vector<int> sample_counts(const PhotonPMF& pmf, rng::Stream& stream, std::size_t n_samples);

}  // namespace cohtherm
