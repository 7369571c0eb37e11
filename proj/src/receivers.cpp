#include "cohtherm/receivers.hpp"

#include <cmath>
#include <stdexcept>

#include "cohtherm/optimize.hpp"

namespace cohtherm {

std::string receiver_name(ReceiverKind kind) {
    switch (kind) {
        case ReceiverKind::Kennedy: return "kennedy";
        case ReceiverKind::GeneralizedKennedy: return "gk";
        case ReceiverKind::DirectDetection: return "dd";
    }
    return "unknown";
}

ReceiverSpec ReceiverSpec::kennedy(double nbar_r) {
    if (nbar_r < 0.0) throw std::invalid_argument("nbar_r must be non-negative");
    return ReceiverSpec{ReceiverKind::Kennedy, std::sqrt(nbar_r)};
}

ReceiverSpec ReceiverSpec::generalized_kennedy(double beta) {
    if (beta < 0.0) throw std::invalid_argument("beta must be non-negative");
    return ReceiverSpec{ReceiverKind::GeneralizedKennedy, beta};
}

ReceiverSpec ReceiverSpec::direct_detection() {
    return ReceiverSpec{ReceiverKind::DirectDetection, 0.0};
}

std::pair<PhotonPMF, PhotonPMF> likelihoods(const ReceiverSpec& spec, double nbar_r,
                                            const DetectorModel& det) {
    // Build both branches on the larger of the two adaptive cutoffs so the
    // pair lines up bin by bin.
    PhotonPMF coh = displaced_coherent_pmf(nbar_r, spec.beta);
    PhotonPMF th = displaced_thermal_pmf(nbar_r, spec.beta);
    const int cutoff = std::max(coh.cutoff(), th.cutoff());
    if (coh.cutoff() < cutoff) coh.probs.resize(static_cast<std::size_t>(cutoff) + 1, 0.0);
    if (th.cutoff() < cutoff) th.probs.resize(static_cast<std::size_t>(cutoff) + 1, 0.0);
    return {apply_detector(coh, det), apply_detector(th, det)};
}

SingleCopyStats gk_hard_stats(double nbar_r, double beta) {
    const double root = std::sqrt(nbar_r) - beta;
    const double p = 1.0 - std::exp(-root * root);
    const double q = std::exp(-beta * beta / (1.0 + nbar_r)) / (1.0 + nbar_r);
    return make_single_copy_stats(p, q);
}

double optimize_gk_beta(double nbar_r) {
    if (!(nbar_r > 0.0)) throw std::invalid_argument("nbar_r must be positive");
    const double hi = std::sqrt(nbar_r) + 3.0;
    // The error can have local basins near beta = 0 and beta ~ 1/sqrt(2);
    // scan before refining.
    const double beta = grid_then_golden_min(
        [nbar_r](double b) { return gk_hard_stats(nbar_r, b).perr; }, 0.0, hi, 400, 1e-9);
    if (!std::isfinite(beta)) throw std::runtime_error("GK displacement search failed to bracket");
    return beta;
}

SingleCopyStats single_copy_stats(const ReceiverSpec& spec, double nbar_r, const DetectorModel& det,
                                  const std::function<bool(int)>& decide_coh) {
    const auto [pmf_coh, pmf_th] = likelihoods(spec, nbar_r, det);
    double coh_mass_in_coh_region = 0.0;
    double th_mass_in_coh_region = 0.0;
    for (int n = 0; n <= pmf_coh.cutoff(); ++n) {
        if (decide_coh(n)) {
            coh_mass_in_coh_region += pmf_coh.at(n);
            th_mass_in_coh_region += pmf_th.at(n);
        }
    }
    // Tail mass behaves as a thermal decision.
    const double p = 1.0 - coh_mass_in_coh_region;
    const double q = th_mass_in_coh_region;
    return make_single_copy_stats(p, q);
}

}  // namespace cohtherm
