#include "cohtherm/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "cohtherm/chernoff.hpp"
#include "cohtherm/csv.hpp"

namespace cohtherm {

namespace {

// Stream-path tags keep dataset generation and every (m, trial) cell on
// independent substreams of the run seed.
constexpr std::uint64_t kTagDataset = 0xD5;
constexpr std::uint64_t kTagTrial = 0x7A;

PhotonPMF histogram_pmf(const std::vector<int>& counts, int cutoff) {
    PhotonPMF pmf;
    pmf.probs.assign(static_cast<std::size_t>(cutoff) + 1, 0.0);
    const double w = 1.0 / static_cast<double>(counts.size());
    for (int c : counts) pmf.probs[static_cast<std::size_t>(c)] += w;
    pmf.tail_mass = 0.0;
    return pmf;
}

// Precomputed per-count soft-decision table; mirrors decide_multicopy_soft.
struct SoftTable {
    std::vector<double> llr;
    std::vector<std::int8_t> veto;  // +1: impossible under coherent, -1: under thermal

    static SoftTable build(const PhotonPMF& pmf_coh, const PhotonPMF& pmf_th) {
        SoftTable t;
        const std::size_t n = pmf_coh.probs.size();
        t.llr.assign(n, 0.0);
        t.veto.assign(n, 0);
        for (std::size_t i = 0; i < n; ++i) {
            const double pc = pmf_coh.probs[i];
            const double pt = pmf_th.probs[i];
            if (pc > 0.0 && pt > 0.0) {
                t.llr[i] = std::log(pc) - std::log(pt);
            } else if (pc > 0.0) {
                t.veto[i] = -1;
            } else if (pt > 0.0) {
                t.veto[i] = +1;
            }
        }
        return t;
    }

    Hypothesis decide(std::span<const int> counts) const {
        double sum = 0.0;
        int coh_vetoes = 0;
        int th_vetoes = 0;
        for (int c : counts) {
            const auto i = static_cast<std::size_t>(c);
            if (veto[i] > 0) {
                ++coh_vetoes;
            } else if (veto[i] < 0) {
                ++th_vetoes;
            } else {
                sum += llr[i];
            }
        }
        if (coh_vetoes != th_vetoes)
            return coh_vetoes < th_vetoes ? Hypothesis::Coherent : Hypothesis::Thermal;
        return sum >= 0.0 ? Hypothesis::Coherent : Hypothesis::Thermal;
    }
};

void resample(const std::vector<int>& data, rng::Stream& stream, bool with_replacement,
              std::span<int> out) {
    const auto n = static_cast<std::uint64_t>(data.size());
    if (with_replacement) {
        for (int& c : out) c = data[static_cast<std::size_t>(stream.below(n))];
        return;
    }
    // Floyd's sampling without replacement; out.size() is small.
    std::vector<std::uint64_t> chosen;
    chosen.reserve(out.size());
    for (std::uint64_t j = n - out.size(); j < n; ++j) {
        std::uint64_t t = stream.below(j + 1);
        if (std::find(chosen.begin(), chosen.end(), t) != chosen.end()) t = j;
        chosen.push_back(t);
    }
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = data[static_cast<std::size_t>(chosen[i])];
}

struct Tally {
    long err_coh_given_th = 0;
    long err_th_given_coh = 0;
};

}  // namespace

Datasets generate_datasets(const ExperimentConfig& config, std::uint64_t rep_index) {
    if (config.copies_per_dataset < 1) throw std::invalid_argument("copies_per_dataset must be >= 1");
    const auto [pmf_coh, pmf_th] = likelihoods(config.receiver, config.nbar_r, config.detector);
    Datasets ds;
    rng::Stream coh_stream(rng::derive_seed(config.seed, {rep_index, kTagDataset, 0}));
    rng::Stream th_stream(rng::derive_seed(config.seed, {rep_index, kTagDataset, 1}));
    ds.coh = sample_counts(pmf_coh, coh_stream, static_cast<std::size_t>(config.copies_per_dataset));
    ds.th = sample_counts(pmf_th, th_stream, static_cast<std::size_t>(config.copies_per_dataset));
    return ds;
}

std::pair<PhotonPMF, PhotonPMF> empirical_likelihoods(const Datasets& datasets) {
    if (datasets.coh.empty() || datasets.th.empty())
        throw std::invalid_argument("empirical likelihoods need non-empty datasets");
    const int cutoff = std::max(*std::max_element(datasets.coh.begin(), datasets.coh.end()),
                                *std::max_element(datasets.th.begin(), datasets.th.end()));
    return {histogram_pmf(datasets.coh, cutoff), histogram_pmf(datasets.th, cutoff)};
}

SingleCopyRule empirical_rule(const Datasets& datasets, ReceiverKind kind) {
    const auto [hist_coh, hist_th] = empirical_likelihoods(datasets);
    SingleCopyRule rule = mldr_from_likelihoods(hist_coh, hist_th, RuleSource::EmpiricalHistogram);
    // Bins observed in neither dataset: counts are evidence of thermal light
    // for the displaced receivers; direct detection follows the nearest
    // observed bin's likelihood ratio (ties to the larger count).
    const std::size_t n = rule.coh_region.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (hist_coh.probs[i] > 0.0 || hist_th.probs[i] > 0.0) continue;
        if (kind != ReceiverKind::DirectDetection) {
            rule.coh_region[i] = false;
            continue;
        }
        for (std::size_t d = 1; d < n; ++d) {
            const std::size_t up = i + d;
            if (up < n && (hist_coh.probs[up] > 0.0 || hist_th.probs[up] > 0.0)) {
                rule.coh_region[i] = hist_coh.probs[up] >= hist_th.probs[up];
                break;
            }
            if (d <= i && (hist_coh.probs[i - d] > 0.0 || hist_th.probs[i - d] > 0.0)) {
                rule.coh_region[i] = hist_coh.probs[i - d] >= hist_th.probs[i - d];
                break;
            }
        }
    }
    return rule;
}

ErrorCurve estimate_error_curve(const ExperimentConfig& config, std::uint64_t rep_index) {
    if (config.trials_per_m < 0) throw std::invalid_argument("trials_per_m must be >= 0");
    for (int m : config.m_grid) {
        if (m < 1 || m > config.copies_per_dataset)
            throw std::invalid_argument("m_grid entries must lie in [1, copies_per_dataset]");
    }

    const Datasets ds = generate_datasets(config, rep_index);
    const auto [hist_coh, hist_th] = empirical_likelihoods(ds);
    const bool soft = config.receiver.kind == ReceiverKind::DirectDetection;
    const SingleCopyRule rule = empirical_rule(ds, config.receiver.kind);
    const SoftTable soft_table = soft ? SoftTable::build(hist_coh, hist_th) : SoftTable{};

    ErrorCurve curve;
    const int n_threads = std::max(1, config.threads);
    for (std::size_t mi = 0; mi < config.m_grid.size(); ++mi) {
        const int m = config.m_grid[mi];
        if (config.trials_per_m == 0) continue;  // point omitted, not NaN
        const MultiCopyPlan plan =
            soft ? MultiCopyPlan{} : make_multicopy_plan(rule, hist_coh, hist_th, m);

        std::vector<Tally> tallies(static_cast<std::size_t>(n_threads));
        const auto run_range = [&](int t_begin, int t_end, Tally& tally) {
            std::vector<int> counts(static_cast<std::size_t>(m));
            for (int trial = t_begin; trial < t_end; ++trial) {
                rng::Stream stream(rng::derive_seed(
                    config.seed, {rep_index, kTagTrial, mi, static_cast<std::uint64_t>(trial)}));
                resample(ds.coh, stream, config.resample_with_replacement, counts);
                const Hypothesis under_coh = soft ? soft_table.decide(counts)
                                                  : decide_multicopy_hard(counts, rule, plan);
                if (under_coh == Hypothesis::Thermal) ++tally.err_th_given_coh;
                resample(ds.th, stream, config.resample_with_replacement, counts);
                const Hypothesis under_th = soft ? soft_table.decide(counts)
                                                 : decide_multicopy_hard(counts, rule, plan);
                if (under_th == Hypothesis::Coherent) ++tally.err_coh_given_th;
            }
        };

        if (n_threads == 1) {
            run_range(0, config.trials_per_m, tallies[0]);
        } else {
            std::vector<std::thread> workers;
            const int chunk = (config.trials_per_m + n_threads - 1) / n_threads;
            for (int t = 0; t < n_threads; ++t) {
                const int lo = t * chunk;
                const int hi = std::min(config.trials_per_m, lo + chunk);
                if (lo >= hi) break;
                workers.emplace_back(run_range, lo, hi, std::ref(tallies[static_cast<std::size_t>(t)]));
            }
            for (auto& w : workers) w.join();
        }

        Tally total;
        for (const Tally& t : tallies) {
            total.err_coh_given_th += t.err_coh_given_th;
            total.err_th_given_coh += t.err_th_given_coh;
        }
        ErrorPoint point;
        point.m = m;
        point.n_trials = config.trials_per_m;
        point.err_coh_given_th = static_cast<double>(total.err_coh_given_th) / config.trials_per_m;
        point.err_th_given_coh = static_cast<double>(total.err_th_given_coh) / config.trials_per_m;
        point.perr_hat = 0.5 * (point.err_coh_given_th + point.err_th_given_coh);
        curve.points.push_back(point);
    }
    return curve;
}

ExpFit fit_exponential(const ErrorCurve& curve) {
    std::vector<std::pair<double, double>> xy;  // (m, ln(2 perr))
    for (const ErrorPoint& p : curve.points) {
        if (p.n_trials > 0 && p.perr_hat > 0.0)
            xy.emplace_back(static_cast<double>(p.m), std::log(2.0 * p.perr_hat));
    }
    if (xy.size() < 2) throw std::runtime_error("fit_exponential: fewer than 2 usable points");
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (const auto& [x, y] : xy) {
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double n = static_cast<double>(xy.size());
    const double det = n * sxx - sx * sx;
    if (det == 0.0) throw std::runtime_error("fit_exponential: all points share one M value");
    const double slope = (n * sxy - sx * sy) / det;
    const double intercept = (sy - slope * sx) / n;
    ExpFit fit;
    fit.xi = -slope;
    fit.a = std::exp(intercept);
    fit.n_points_used = static_cast<int>(xy.size());
    double rss = 0.0;
    for (const auto& [x, y] : xy) {
        const double r = y - (intercept + slope * x);
        rss += r * r;
    }
    fit.residual_rms = std::sqrt(rss / n);
    return fit;
}

std::vector<int> default_m_grid(double xi_theory, int copies) {
    // {2,4,...,16} resolves decay rates down to ~1/16 nats per copy.  Slower
    // decay needs larger M: the multi-copy error carries a subexponential
    // prefactor (-ln 2P ~ M xi + ln(M)/2), which biases short-M fits upward
    // unless M xi spans a few nats.
    if (!(xi_theory > 0.0) || xi_theory * 16.0 >= 1.0) return {2, 4, 6, 8, 10, 12, 14, 16};
    const int m_max = static_cast<int>(
        std::min<long>(copies, std::max<long>(16, std::lround(std::ceil(3.5 / xi_theory)))));
    const int m_min = std::max(2, m_max / 2);
    std::vector<int> grid;
    for (int i = 0; i < 8; ++i) {
        const int m = m_min + static_cast<int>(std::lround((m_max - m_min) * (i / 7.0)));
        if (grid.empty() || grid.back() != m) grid.push_back(m);
    }
    return grid;
}

ReceiverSpec receiver_for(ReceiverKind kind, double nbar_r) {
    switch (kind) {
        case ReceiverKind::Kennedy: return ReceiverSpec::kennedy(nbar_r);
        case ReceiverKind::GeneralizedKennedy:
            return ReceiverSpec::generalized_kennedy(optimize_gk_beta(nbar_r));
        case ReceiverKind::DirectDetection: return ReceiverSpec::direct_detection();
    }
    throw std::invalid_argument("unknown receiver kind");
}

double theory_exponent(const ReceiverSpec& receiver, double nbar_r, const DetectorModel& det) {
    const auto [pmf_coh, pmf_th] = likelihoods(receiver, nbar_r, det);
    if (receiver.kind == ReceiverKind::DirectDetection)
        return chernoff_exponent_pmf(pmf_coh, pmf_th).xi;
    // Hard-decision receivers: exponent of the per-copy MLDR's two-outcome
    // statistics.  For an ideal-detector Kennedy receiver this equals the
    // quantum Chernoff exponent.
    const SingleCopyRule rule = mldr_from_likelihoods(pmf_coh, pmf_th);
    double p_coh = 0.0, q_coh = 0.0;
    for (int n = 0; n <= pmf_coh.cutoff(); ++n) {
        if (rule.decides_coh(n)) {
            p_coh += pmf_coh.at(n);
            q_coh += pmf_th.at(n);
        }
    }
    return binary_chernoff_exponent(1.0 - p_coh, q_coh).xi;
}

std::vector<SweepRow> sweep_exponents(const std::vector<double>& nbar_grid,
                                      const std::vector<ReceiverKind>& receivers,
                                      const ExperimentConfig& base_config) {
    std::vector<SweepRow> rows;
    for (std::size_t gi = 0; gi < nbar_grid.size(); ++gi) {
        const double nbar = nbar_grid[gi];
        for (std::size_t ri = 0; ri < receivers.size(); ++ri) {
            ExperimentConfig config = base_config;
            config.nbar_r = nbar;
            config.receiver = receiver_for(receivers[ri], nbar);
            config.seed = rng::derive_seed(base_config.seed, {gi, ri});

            SweepRow row;
            row.nbar_r = nbar;
            row.receiver = receiver_name(receivers[ri]);
            row.xi_theory = theory_exponent(config.receiver, nbar, config.detector);
            if (config.m_grid.empty())
                config.m_grid = default_m_grid(row.xi_theory, config.copies_per_dataset);

            std::vector<double> xis, as;
            std::vector<long> pooled_cth, pooled_thc;
            std::vector<int> pooled_trials;
            int min_points = 0;
            for (int rep = 0; rep < config.replications; ++rep) {
                const ErrorCurve curve = estimate_error_curve(config, static_cast<std::uint64_t>(rep));
                const ExpFit fit = fit_exponential(curve);
                xis.push_back(fit.xi);
                as.push_back(fit.a);
                min_points = rep == 0 ? fit.n_points_used : std::min(min_points, fit.n_points_used);
                if (pooled_cth.empty()) {
                    pooled_cth.assign(curve.points.size(), 0);
                    pooled_thc.assign(curve.points.size(), 0);
                    pooled_trials.assign(curve.points.size(), 0);
                    for (const ErrorPoint& p : curve.points) row.pooled_curve.points.push_back(p);
                }
                for (std::size_t i = 0; i < curve.points.size(); ++i) {
                    pooled_cth[i] += std::lround(curve.points[i].err_coh_given_th *
                                                 curve.points[i].n_trials);
                    pooled_thc[i] += std::lround(curve.points[i].err_th_given_coh *
                                                 curve.points[i].n_trials);
                    pooled_trials[i] += curve.points[i].n_trials;
                }
            }
            for (std::size_t i = 0; i < row.pooled_curve.points.size(); ++i) {
                ErrorPoint& p = row.pooled_curve.points[i];
                p.n_trials = pooled_trials[i];
                p.err_coh_given_th = static_cast<double>(pooled_cth[i]) / pooled_trials[i];
                p.err_th_given_coh = static_cast<double>(pooled_thc[i]) / pooled_trials[i];
                p.perr_hat = 0.5 * (p.err_coh_given_th + p.err_th_given_coh);
            }

            double mean_xi = 0.0, mean_a = 0.0;
            for (double x : xis) mean_xi += x;
            for (double a : as) mean_a += a;
            mean_xi /= static_cast<double>(xis.size());
            mean_a /= static_cast<double>(as.size());
            double var = 0.0;
            for (double x : xis) var += (x - mean_xi) * (x - mean_xi);
            row.fit.xi = mean_xi;
            row.fit.a = mean_a;
            row.fit.stderr_xi = xis.size() > 1 ? std::sqrt(var / (xis.size() - 1.0)) : 0.0;
            row.fit.n_points_used = min_points;
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

void write_curve_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
    out << "nbar_r,receiver,M,trials,perr_hat,err_coh_given_th,err_th_given_coh\n";
    for (const SweepRow& row : rows) {
        for (const ErrorPoint& p : row.pooled_curve.points) {
            out << format_g12(row.nbar_r) << ',' << row.receiver << ',' << p.m << ',' << p.n_trials
                << ',' << format_g12(p.perr_hat) << ',' << format_g12(p.err_coh_given_th) << ','
                << format_g12(p.err_th_given_coh) << '\n';
        }
    }
}

void write_summary_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
    out << "nbar_r,receiver,xi_fit,xi_stderr,a_fit,xi_theory\n";
    for (const SweepRow& row : rows) {
        out << format_g12(row.nbar_r) << ',' << row.receiver << ',' << format_g12(row.fit.xi) << ','
            << format_g12(row.fit.stderr_xi) << ',' << format_g12(row.fit.a) << ','
            << format_g12(row.xi_theory) << '\n';
    }
}

}  // namespace cohtherm
