#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "cohtherm/decision.hpp"
#include "cohtherm/photon.hpp"
#include "cohtherm/receivers.hpp"

namespace cohtherm {

// One Monte Carlo run: generate finite datasets under both hypotheses,
// derive empirical decision rules from their histograms, resample M-copy
// trials, and fit the error decay P = a exp(-M xi) / 2.
struct ExperimentConfig {
    double nbar_r = 0.2;
    ReceiverSpec receiver = ReceiverSpec::direct_detection();
    DetectorModel detector = DetectorModel::ideal();
    int copies_per_dataset = 1000;
    std::vector<int> m_grid = {2, 4, 6, 8, 10, 12, 14, 16};
    int trials_per_m = 100;
    int replications = 5;
    std::uint64_t seed = 1;
    bool resample_with_replacement = true;
    int threads = 1;
};

struct Datasets {
    std::vector<int> coh;
    std::vector<int> th;
};

struct ErrorPoint {
    int m = 0;
    int n_trials = 0;
    double perr_hat = 0.0;           // mean of the two conditional estimates
    double err_coh_given_th = 0.0;   // P(decide coherent | thermal true)
    double err_th_given_coh = 0.0;   // P(decide thermal | coherent true)
};

struct ErrorCurve {
    std::vector<ErrorPoint> points;
};

// Least-squares fit of ln(2 perr) = ln(a) - m xi over points with
// perr_hat > 0.  stderr_xi is populated at the sweep level from
// replication spread.
struct ExpFit {
    double a = 1.0;
    double xi = 0.0;
    double stderr_xi = 0.0;
    double residual_rms = 0.0;
    int n_points_used = 0;
};

// i.i.d. counts from the receiver's two likelihoods; deterministic in
// (config.seed, rep_index).
Datasets generate_datasets(const ExperimentConfig& config, std::uint64_t rep_index = 0);

// Histogram-normalized empirical likelihoods (coherent first).  Throws on an
// empty dataset.
std::pair<PhotonPMF, PhotonPMF> empirical_likelihoods(const Datasets& datasets);

// Single-copy MLDR from the empirical histograms.  Bins observed in neither
// dataset decide thermal for displaced receivers (any count is evidence of
// thermal light) and follow the nearest observed bin for direct detection.
SingleCopyRule empirical_rule(const Datasets& datasets, ReceiverKind kind);

// Resampled error-probability curve for one replication.  Hard binomial-MLDR
// decisions for Kennedy / generalized Kennedy, soft log-likelihood decisions
// for direct detection.  Trials are split across config.threads with
// per-trial derived streams, so results do not depend on the thread count.
ErrorCurve estimate_error_curve(const ExperimentConfig& config, std::uint64_t rep_index = 0);

// Fit of one curve (throws if fewer than 2 usable points).
ExpFit fit_exponential(const ErrorCurve& curve);

struct SweepRow {
    double nbar_r = 0.0;
    std::string receiver;
    ExpFit fit;
    double xi_theory = 0.0;
    ErrorCurve pooled_curve;  // conditional errors pooled over replications
};

// Theoretical exponent the simulation is expected to approach: the binary
// hard-decision exponent for Kennedy / generalized Kennedy (Kennedy's equals
// the quantum Chernoff exponent for an ideal detector) and the full
// count-resolving exponent for direct detection.
double theory_exponent(const ReceiverSpec& receiver, double nbar_r, const DetectorModel& det);

// Builds a receiver of the given kind for a grid point (Kennedy's null and
// the generalized-Kennedy displacement depend on nbar_r).
ReceiverSpec receiver_for(ReceiverKind kind, double nbar_r);

// Full pipeline per (nbar, receiver): `replications` independent runs,
// fitted exponent averaged over replications with its standard deviation.
std::vector<SweepRow> sweep_exponents(const std::vector<double>& nbar_grid,
                                      const std::vector<ReceiverKind>& receivers,
                                      const ExperimentConfig& base_config);

// CSV emitters (fixed schemas):
//   curve:   nbar_r,receiver,M,trials,perr_hat,err_coh_given_th,err_th_given_coh
//   summary: nbar_r,receiver,xi_fit,xi_stderr,a_fit,xi_theory
void write_curve_csv(std::ostream& out, const std::vector<SweepRow>& rows);
void write_summary_csv(std::ostream& out, const std::vector<SweepRow>& rows);

}  // namespace cohtherm
