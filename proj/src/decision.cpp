#include "cohtherm/decision.hpp"

#include <cmath>
#include <stdexcept>

namespace cohtherm {

SingleCopyRule mldr_from_likelihoods(const PhotonPMF& pmf_coh, const PhotonPMF& pmf_th,
                                     RuleSource source) {
    if (pmf_coh.cutoff() != pmf_th.cutoff())
        throw std::invalid_argument("likelihood cutoffs differ");
    SingleCopyRule rule;
    rule.source = source;
    rule.coh_region.resize(pmf_coh.probs.size());
    for (std::size_t n = 0; n < pmf_coh.probs.size(); ++n)
        rule.coh_region[n] = pmf_coh.probs[n] >= pmf_th.probs[n];
    return rule;
}

double binomial_threshold(double p_coh, double q_coh, int m) {
    if (!(q_coh > 0.0 && q_coh < 1.0 && p_coh > 0.0 && p_coh < 1.0))
        throw std::domain_error("binomial_threshold: p and q must lie strictly inside (0,1)");
    if (!(p_coh > q_coh)) throw std::domain_error("binomial_threshold: requires p_coh > q_coh");
    return m * std::log((1.0 - q_coh) / (1.0 - p_coh)) /
           std::log(p_coh * (1.0 - q_coh) / (q_coh * (1.0 - p_coh)));
}

MultiCopyPlan make_multicopy_plan(double p_coh, double q_coh, int m) {
    if (m < 1) throw std::invalid_argument("m must be positive");
    if (p_coh < q_coh)
        throw std::invalid_argument("plan requires p_coh >= q_coh; flip the rule orientation");
    MultiCopyPlan plan;
    plan.m = m;
    plan.p_coh = p_coh;
    plan.q_coh = q_coh;
    if (p_coh == q_coh) {
        plan.threshold = -0.5;  // likelihoods equal for every tally; ties go coherent
    } else if (p_coh >= 1.0) {
        plan.threshold = m - 0.5;  // decide coherent only on a unanimous tally
    } else if (q_coh <= 0.0) {
        plan.threshold = 0.5;  // any coherent decision is conclusive
    } else {
        plan.threshold = binomial_threshold(p_coh, q_coh, m);
    }
    return plan;
}

MultiCopyPlan make_multicopy_plan(const SingleCopyRule& rule, const PhotonPMF& pmf_coh,
                                  const PhotonPMF& pmf_th, int m) {
    double p_coh = 0.0;
    double q_coh = 0.0;
    for (int n = 0; n <= pmf_coh.cutoff(); ++n) {
        if (rule.decides_coh(n)) {
            p_coh += pmf_coh.at(n);
            q_coh += pmf_th.at(n);
        }
    }
    return make_multicopy_plan(p_coh, q_coh, m);
}

Hypothesis decide_multicopy_hard(std::span<const int> counts, const SingleCopyRule& rule,
                                 const MultiCopyPlan& plan) {
    if (static_cast<int>(counts.size()) != plan.m)
        throw std::invalid_argument("counts length must equal plan.m");
    int n_coh = 0;
    for (int c : counts) n_coh += rule.decides_coh(c) ? 1 : 0;
    return n_coh > plan.threshold ? Hypothesis::Coherent : Hypothesis::Thermal;
}

Hypothesis decide_multicopy_soft(std::span<const int> counts, const PhotonPMF& pmf_coh,
                                 const PhotonPMF& pmf_th) {
    double log_ratio = 0.0;
    int coh_vetoes = 0;  // counts impossible under the coherent hypothesis
    int th_vetoes = 0;   // counts impossible under the thermal hypothesis
    for (int c : counts) {
        const double pc = pmf_coh.at(c);
        const double pt = pmf_th.at(c);
        if (pc == 0.0 && pt == 0.0)
            throw std::invalid_argument("count has zero probability under both hypotheses");
        if (pc == 0.0) {
            ++coh_vetoes;
        } else if (pt == 0.0) {
            ++th_vetoes;
        } else {
            log_ratio += std::log(pc) - std::log(pt);
        }
    }
    // A veto zeroes that hypothesis's joint likelihood.  With vetoes on both
    // sides both likelihoods vanish; fall back to veto counts, then the
    // finite log-ratio, ties to coherent.
    if (coh_vetoes != th_vetoes) return coh_vetoes < th_vetoes ? Hypothesis::Coherent : Hypothesis::Thermal;
    return log_ratio >= 0.0 ? Hypothesis::Coherent : Hypothesis::Thermal;
}

}  // namespace cohtherm
