#pragma once

#include <span>
#include <vector>

#include "cohtherm/photon.hpp"

namespace cohtherm {

enum class Hypothesis { Coherent, Thermal };

enum class RuleSource { Theoretical, EmpiricalHistogram };

// Per-copy maximum-likelihood decision map over photon counts.
// Counts above the stored range inherit the top bin's decision (the nearest
// observed neighbor; for displaced receivers that is always "thermal").
struct SingleCopyRule {
    std::vector<bool> coh_region;  // coh_region[n]: count n decides coherent
    RuleSource source = RuleSource::Theoretical;

    bool decides_coh(int count) const {
        if (coh_region.empty()) return true;
        const auto idx = static_cast<std::size_t>(count);
        return idx < coh_region.size() ? coh_region[idx] : coh_region.back();
    }
};

// Binomial-MLDR plan for M hard decisions: decide coherent iff the number of
// per-copy coherent decisions exceeds `threshold`.  p_coh >= q_coh is
// required (coherent decisions are evidence for the coherent hypothesis).
struct MultiCopyPlan {
    int m = 1;
    double p_coh = 1.0;  // P(decide coherent | coherent true), single copy
    double q_coh = 0.0;  // P(decide coherent | thermal true), single copy
    double threshold = 0.0;
};

// Count n decides coherent iff pmf_coh[n] >= pmf_th[n] (ties to coherent).
SingleCopyRule mldr_from_likelihoods(const PhotonPMF& pmf_coh, const PhotonPMF& pmf_th,
                                     RuleSource source = RuleSource::Theoretical);

// Likelihood-ratio threshold n* = m ln[(1-q)/(1-p)] / ln[p(1-q)/(q(1-p))]
// for a binomial test with success probabilities p (coherent) and q
// (thermal).  Requires 0 < q < p < 1; degenerate inputs throw and are
// handled by make_multicopy_plan's special cases.
double binomial_threshold(double p_coh, double q_coh, int m);

// Builds the plan, covering the degenerate cases:
//   p = q  -> always decide coherent (tie convention),
//   p = 1  -> decide coherent iff all m copies do,
//   q = 0  -> decide coherent iff any copy does.
MultiCopyPlan make_multicopy_plan(double p_coh, double q_coh, int m);
MultiCopyPlan make_multicopy_plan(const SingleCopyRule& rule, const PhotonPMF& pmf_coh,
                                  const PhotonPMF& pmf_th, int m);

// Hard multi-copy decision: count per-copy coherent decisions, compare with
// the plan threshold (strict inequality).
Hypothesis decide_multicopy_hard(std::span<const int> counts, const SingleCopyRule& rule,
                                 const MultiCopyPlan& plan);

// Soft multi-copy decision: decide coherent iff the summed per-copy
// log-likelihood ratio is >= 0.  A count with zero probability under one
// hypothesis rejects that hypothesis; if both hypotheses are rejected by
// different counts, the one rejected fewer times loses (tie -> coherent).
// A count with zero probability under both hypotheses is malformed input.
Hypothesis decide_multicopy_soft(std::span<const int> counts, const PhotonPMF& pmf_coh,
                                 const PhotonPMF& pmf_th);

}  // namespace cohtherm
