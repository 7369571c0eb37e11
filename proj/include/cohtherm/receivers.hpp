#pragma once

#include <functional>
#include <string>
#include <utility>

#include "cohtherm/photon.hpp"
#include "cohtherm/stats.hpp"

namespace cohtherm {

enum class ReceiverKind { Kennedy, GeneralizedKennedy, DirectDetection };

std::string receiver_name(ReceiverKind kind);

// A photon-counting receiver: displace the incoming mode by -beta, then
// count.  Kennedy nulls the coherent hypothesis (beta = sqrt(nbar_r)),
// direct detection uses beta = 0, generalized Kennedy carries a tuned beta.
struct ReceiverSpec {
    ReceiverKind kind = ReceiverKind::DirectDetection;
    double beta = 0.0;

    static ReceiverSpec kennedy(double nbar_r);
    static ReceiverSpec generalized_kennedy(double beta);
    static ReceiverSpec direct_detection();
};

// Single-copy count likelihoods under the two hypotheses (coherent first),
// built on a common cutoff and passed through the detector model.
std::pair<PhotonPMF, PhotonPMF> likelihoods(const ReceiverSpec& spec, double nbar_r,
                                            const DetectorModel& det);

// Conditional error probabilities of the vacuum-or-not hard decision after
// displacing by -beta:
//   p(beta) = 1 - exp(-(sqrt(nbar_r) - beta)^2)
//   q(beta) = exp(-beta^2/(1+nbar_r)) / (1+nbar_r)
SingleCopyStats gk_hard_stats(double nbar_r, double beta);

// Displacement minimizing the vacuum-or-not single-copy error probability
// over beta in [0, sqrt(nbar_r) + 3].  Approaches 1/sqrt(2) as nbar_r -> 0.
double optimize_gk_beta(double nbar_r);

// Exact conditional error probabilities of an arbitrary count -> hypothesis
// rule: sums the branch likelihoods over the rule's decision regions.  The
// rule returns true where the count decides "coherent"; tail mass counts as
// a thermal decision.
SingleCopyStats single_copy_stats(const ReceiverSpec& spec, double nbar_r, const DetectorModel& det,
                                  const std::function<bool(int)>& decide_coh);

}  // namespace cohtherm
