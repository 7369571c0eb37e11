// Acceptance suite: prints one PASS/FAIL line per criterion and exits with
// the number of failures.  Every tolerance is pinned in code.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sys/wait.h>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cohtherm/awgn.hpp"
#include "cohtherm/chernoff.hpp"
#include "cohtherm/experiment.hpp"
#include "cohtherm/fock.hpp"
#include "cohtherm/receivers.hpp"

namespace fs = std::filesystem;
using namespace cohtherm;

namespace {

int failures = 0;

void report(int number, const std::string& name, bool pass, const std::string& detail) {
    std::printf("%s criterion %d: %s (%s)\n", pass ? "PASS" : "FAIL", number, name.c_str(),
                detail.c_str());
    std::fflush(stdout);
    if (!pass) ++failures;
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(COHTHERM_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    return WEXITSTATUS(std::system(cmd.c_str()));
}

std::string slurp(const fs::path& path) {
    std::ifstream f(path, std::ios::binary);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

// 1. Kennedy hard decisions attain the quantum Chernoff exponent, which in
//    turn equals -ln(fidelity), across the photon-number grid.
void criterion_1() {
    double worst_pmf = 0.0;
    double worst_fid = 0.0;
    const DetectorModel ideal = DetectorModel::ideal();
    for (int i = 1; i <= 20; ++i) {
        const double nbar = 0.05 * i;
        const auto [coh, th] = likelihoods(ReceiverSpec::kennedy(nbar), nbar, ideal);
        const double xi = chernoff_exponent_pmf(coh, th).xi;
        const double qcb = qcb_coh_thermal(nbar);
        worst_pmf = std::max(worst_pmf, std::abs(xi - qcb));
        const int dim = adequate_cutoff(nbar);
        const double f = fidelity(coherent_density(nbar, dim), thermal_density(nbar, dim));
        worst_fid = std::max(worst_fid, std::abs(qcb + std::log(f)));
    }
    report(1, "Kennedy exponent equals the quantum Chernoff exponent",
           worst_pmf < 1e-8 && worst_fid < 1e-10,
           "max |xi - qcb| = " + fmt(worst_pmf) + ", max |qcb + ln F| = " + fmt(worst_fid));
}

// 2. Qubit-truncated minimum-error measurement sits a factor of four below
//    the quantum exponent in the photon-starved limit.
void criterion_2() {
    const double ratio = helstrom_exponent_exact(1e-3, 2).xi / qcb_coh_thermal(1e-3);
    report(2, "minimum-error receiver shows the factor-four gap", ratio >= 0.22 && ratio <= 0.28,
           "xi/qcb = " + fmt(ratio));
}

// 3. Generalized-Kennedy photon-starved limits: displacement, bias, and the
//    bias-corrected bound ratio.
void criterion_3() {
    const double nbar = 1e-4;
    const double beta = optimize_gk_beta(nbar);
    const SingleCopyStats stats = gk_hard_stats(nbar, beta);
    const int dim = adequate_cutoff(nbar);
    const double f = fidelity(coherent_density(nbar, dim), thermal_density(nbar, dim));
    const double ratio = exponent_upper_bound(f, stats.bias) / qcb_coh_thermal(nbar);
    const double target = 1.0 / 1.9132;
    const bool pass = std::abs(beta - 0.7071) < 0.01 && std::abs(stats.bias - (-0.2131)) < 0.01 &&
                      std::abs(ratio - target) < 0.01 * target;
    report(3, "generalized-Kennedy displacement, bias, and bound ratio", pass,
           "beta = " + fmt(beta) + ", bias = " + fmt(stats.bias) + ", bound/qcb = " + fmt(ratio));
}

// 4. Direct-detection photon-starved exponent and minimizer location.
void criterion_4() {
    const double nbar = 1e-3;
    const auto [coh, th] = likelihoods(ReceiverSpec::direct_detection(), nbar, DetectorModel::ideal());
    const ChernoffResult r = chernoff_exponent_pmf(coh, th);
    const double coeff = r.xi / (nbar * nbar);
    const bool pass = std::abs(r.s_min - 0.4712) < 0.01 && std::abs(coeff - 0.0430) < 0.05 * 0.0430;
    report(4, "direct-detection s_min and quadratic exponent coefficient", pass,
           "s_min = " + fmt(r.s_min) + ", xi/nbar^2 = " + fmt(coeff));
}

// 5. Simulated pipeline reproduces the exponent hierarchy and the Kennedy
//    theory curve within statistical tolerance.
void criterion_5() {
    ExperimentConfig config;
    config.detector = DetectorModel::ideal();
    config.m_grid = {2, 4, 6, 8, 10, 12, 14, 16};
    config.trials_per_m = 10000;
    config.replications = 5;
    config.seed = 20240229;
    config.threads = 2;
    const std::vector<double> grid = {0.2, 0.4, 0.6};
    const auto rows = sweep_exponents(
        grid, {ReceiverKind::Kennedy, ReceiverKind::GeneralizedKennedy, ReceiverKind::DirectDetection},
        config);

    bool pass = true;
    std::string detail;
    for (std::size_t gi = 0; gi < grid.size(); ++gi) {
        const SweepRow& kennedy = rows[3 * gi];
        const SweepRow& gk = rows[3 * gi + 1];
        const SweepRow& dd = rows[3 * gi + 2];
        const double qcb = qcb_coh_thermal(grid[gi]);
        const double rel = std::abs(kennedy.fit.xi - qcb) / qcb;
        if (rel > 0.15) pass = false;
        if (!(dd.fit.xi < gk.fit.xi && gk.fit.xi < kennedy.fit.xi)) pass = false;
        detail += "nbar=" + fmt(grid[gi]) + ": ken " + fmt(kennedy.fit.xi) + " (qcb " + fmt(qcb) +
                  "), gk " + fmt(gk.fit.xi) + ", dd " + fmt(dd.fit.xi) + "; ";
    }
    const double theory_ratio =
        qcb_coh_thermal(0.6) /
        theory_exponent(ReceiverSpec::direct_detection(), 0.6, DetectorModel::ideal());
    if (!(theory_ratio >= 50.0 && theory_ratio <= 150.0)) pass = false;
    detail += "kennedy/dd theory ratio at 0.6 = " + fmt(theory_ratio);
    report(5, "Monte Carlo exponents track theory with the right hierarchy", pass, detail);
}

// 6. Bias-expansion curvature function against its finite-difference oracle,
//    plus positivity.
void criterion_6() {
    bool pass = true;
    double worst = 0.0;
    for (double perr : {0.2, 0.3, 0.4}) {
        const double b = 1e-3;
        const double q_plus = binary_chernoff_exponent((1.0 + b) * perr, (1.0 - b) * perr).q_min;
        const double q_minus = binary_chernoff_exponent((1.0 - b) * perr, (1.0 + b) * perr).q_min;
        const double q_zero = 2.0 * std::sqrt(perr * (1.0 - perr));
        const double oracle = -0.5 * (q_plus + q_minus - 2.0 * q_zero) / (b * b);
        const double rel = std::abs(g_function(perr) - oracle) / oracle;
        worst = std::max(worst, rel);
        if (rel > 1e-3) pass = false;
    }
    for (int i = 1; i <= 20; ++i) {
        if (!(g_function(0.5 * i / 21.0) > 0.0)) pass = false;
    }
    report(6, "curvature function matches the finite-difference oracle and is positive", pass,
           "max relative deviation = " + fmt(worst));
}

// 7. Pure-vs-pure minimum-error exponent is exactly half the quantum one.
void criterion_7() {
    double worst = 0.0;
    for (int i = 1; i <= 9; ++i) {
        const double f = 0.1 * i;
        const SingleCopyStats s = pure_pure_helstrom(f);
        const double xi = binary_chernoff_exponent(s.p, s.q).xi;
        worst = std::max(worst, std::abs(xi - (-0.5 * std::log(f))));
    }
    report(7, "pure-state factor-two identity", worst < 1e-10, "max |xi + ln(F)/2| = " + fmt(worst));
}

// 8. Fidelity / trace-distance sandwich on random low-dimensional pairs.
void criterion_8() {
    std::mt19937_64 eng(271828);
    std::normal_distribution<double> gauss;
    bool pass = true;
    for (int it = 0; it < 100; ++it) {
        const int dim = 2 + static_cast<int>(eng() % 5);
        const auto random_density = [&](int rank) {
            CMatrix g(dim, rank);
            for (int i = 0; i < dim; ++i)
                for (int j = 0; j < rank; ++j) g(i, j) = std::complex<double>(gauss(eng), gauss(eng));
            CMatrix rho = g * g.adjoint();
            rho /= rho.trace().real();
            return DensityMatrix{dim, rho, 0.0};
        };
        const DensityMatrix r1 = random_density(1 + static_cast<int>(eng() % dim));
        const DensityMatrix r2 = random_density(1 + static_cast<int>(eng() % dim));
        const double f = fidelity(r1, r2);
        const double dist = trace_distance(r1, r2);
        if (!(1.0 - std::sqrt(f) <= dist + 1e-9 && dist <= std::sqrt(1.0 - f) + 1e-9)) pass = false;
    }
    report(8, "fidelity sandwich on 100 random pairs", pass, "dims 2..6, tolerance 1e-9");
}

// 9. Classical soft/hard gap: pi/2 exponent ratio and Monte Carlo agreement
//    with the closed-form multi-copy error.
void criterion_9() {
    const AwgnProblem starved{8e-4, 1.0};  // E/8 sigma^2 = 1e-4
    const double ratio = soft_exponent(starved) / hard_exponent(starved);
    const double half_pi = 1.5707963267948966;
    bool pass = std::abs(ratio - half_pi) < 0.01 * half_pi;

    const AwgnProblem prob{0.4, 1.0};
    const int m = 40;
    const int trials = 100000;
    const auto [soft, hard] = simulate_awgn(prob, m, trials, 424242);
    const double expect = gaussian_q(std::sqrt(m * prob.energy / (4.0 * prob.noise_psd)));
    const double sigma = std::sqrt(expect * (1.0 - expect) / trials);
    if (std::abs(soft - expect) >= 3.0 * sigma) pass = false;
    report(9, "soft/hard exponent ratio and Monte Carlo agreement", pass,
           "ratio = " + fmt(ratio) + ", |soft - Q| = " + fmt(std::abs(soft - expect)) +
               " vs 3 sigma = " + fmt(3.0 * sigma) + " (hard = " + fmt(hard) + ")");
}

// 10. Efficiency sweep: the Kennedy curve at efficiency eta equals the
//     quantum exponent at eta * nbar_s, reproduced through the CSV pipeline.
void criterion_10() {
    const fs::path dir = fs::temp_directory_path() / "cohtherm_acceptance_eta";
    fs::remove_all(dir);
    bool pass = true;
    std::string detail;
    for (const double eta : {0.45, 0.9, 1.0}) {
        const fs::path sub = dir / fmt(eta);
        if (run_cli("--out " + sub.string() + " exponents --nbar 0.05:1.0:0.05 --receivers kennedy" +
                    " --efficiency " + fmt(eta)) != 0) {
            pass = false;
            break;
        }
        std::ifstream csv(sub / "exponents.csv");
        std::string line;
        std::getline(csv, line);  // header
        int n_rows = 0;
        double worst = 0.0;
        while (std::getline(csv, line)) {
            std::stringstream row(line);
            std::string nbar_s, nbar_r, name, xi;
            std::getline(row, nbar_s, ',');
            std::getline(row, nbar_r, ',');
            std::getline(row, name, ',');
            std::getline(row, xi, ',');
            const double expect = qcb_coh_thermal(eta * std::stod(nbar_s));
            worst = std::max(worst, std::abs(std::stod(xi) - expect));
            ++n_rows;
        }
        if (n_rows != 20 || worst > 1e-11) pass = false;
        detail += "eta=" + fmt(eta) + " max dev " + fmt(worst) + "; ";
    }
    fs::remove_all(dir);
    report(10, "efficiency sweep matches qcb(eta * nbar_s)", pass, detail);
}

// 11. Byte-identical simulate output across reruns and thread counts.
void criterion_11() {
    const fs::path dir = fs::temp_directory_path() / "cohtherm_acceptance_det";
    fs::remove_all(dir);
    const std::string flags =
        " simulate --receiver gk --nbar 0.3 --m-grid 2,6,10 --trials 400 --replications 2 --seed 99";
    bool pass = true;
    pass &= run_cli("--threads 1 --out " + (dir / "a").string() + flags) == 0;
    pass &= run_cli("--threads 1 --out " + (dir / "b").string() + flags) == 0;
    pass &= run_cli("--threads 8 --out " + (dir / "c").string() + flags) == 0;
    const std::string curve_a = slurp(dir / "a" / "simulate_curve.csv");
    pass &= !curve_a.empty();
    pass &= curve_a == slurp(dir / "b" / "simulate_curve.csv");
    pass &= curve_a == slurp(dir / "c" / "simulate_curve.csv");
    pass &= slurp(dir / "a" / "simulate_fit.csv") == slurp(dir / "b" / "simulate_fit.csv");
    pass &= slurp(dir / "a" / "simulate_fit.csv") == slurp(dir / "c" / "simulate_fit.csv");
    fs::remove_all(dir);
    report(11, "simulate output is byte-identical across runs and thread counts", pass,
           "threads 1 vs 8, fixed seed");
}

}  // namespace

int main() {
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    criterion_10();
    criterion_11();
    if (failures == 0) {
        std::printf("all acceptance criteria passed\n");
    } else {
        std::printf("%d acceptance criteria FAILED\n", failures);
    }
    return failures;
}
