#include "cohtherm/chernoff.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "cohtherm/fock.hpp"
#include "cohtherm/optimize.hpp"

namespace cohtherm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

ChernoffResult result_from(double s_min, double q_min) {
    ChernoffResult r;
    r.s_min = s_min;
    r.q_min = q_min;
    r.xi = q_min > 0.0 ? -std::log(q_min) : kInf;
    return r;
}

// One term a^s b^(1-s) of Q_s under the common-support convention: terms
// with a vanishing factor are dropped for every s, which makes Q_s
// continuous on [0,1] and lets boundary minima carry the correct exponent.
inline double support_term(double a, double b, double s) {
    if (a <= 0.0 || b <= 0.0) return 0.0;
    return std::exp(s * std::log(a) + (1.0 - s) * std::log(b));
}

ChernoffResult minimize_two_term(double a1, double b1, double a2, double b2) {
    const bool live1 = a1 > 0.0 && b1 > 0.0;
    const bool live2 = a2 > 0.0 && b2 > 0.0;
    if (!live1 && !live2) return result_from(0.5, 0.0);
    const auto q = [&](double s) { return support_term(a1, b1, s) + support_term(a2, b2, s); };
    if (!live1 || !live2) {
        // Single exponential: the minimum sits at an endpoint.
        const double q0 = q(0.0);
        const double q1 = q(1.0);
        return q0 <= q1 ? result_from(0.0, q0) : result_from(1.0, q1);
    }
    const double s = golden_section_min(q, 0.0, 1.0, 1e-10);
    return result_from(s, q(s));
}

}  // namespace

double q_s_binary(double p, double q, double s) {
    if (!(p >= 0.0 && p <= 1.0 && q >= 0.0 && q <= 1.0))
        throw std::invalid_argument("p and q must be in [0,1]");
    if (!(s >= 0.0 && s <= 1.0)) throw std::invalid_argument("s must be in [0,1]");
    // std::pow(0,0) = 1, which is the convention wanted at the boundaries.
    return std::pow(1.0 - p, s) * std::pow(q, 1.0 - s) + std::pow(p, s) * std::pow(1.0 - q, 1.0 - s);
}

double s_min_closed_form(double p, double q) {
    if (!(p > 0.0 && p < 1.0 && q > 0.0 && q < 1.0))
        throw std::domain_error("s_min_closed_form: p, q must lie in (0,1)");
    if (std::abs(p + q - 1.0) < 1e-12) return 0.5;  // Q_s is constant; symmetric convention
    if (p + q > 1.0) throw std::domain_error("s_min_closed_form: requires p + q < 1");
    const double num =
        std::log((1.0 - q) * std::log((1.0 - q) / p)) - std::log(q * std::log((1.0 - p) / q));
    const double den = std::log((1.0 - p) * (1.0 - q) / (p * q));
    return num / den;
}

ChernoffResult binary_chernoff_exponent(double p, double q) {
    if (!(p >= 0.0 && p <= 1.0 && q >= 0.0 && q <= 1.0))
        throw std::invalid_argument("p and q must be in [0,1]");
    // Outcome distributions (1-p, p) under hypothesis 1 and (q, 1-q) under
    // hypothesis 2.
    return minimize_two_term(1.0 - p, q, p, 1.0 - q);
}

ChernoffResult chernoff_exponent_pmf(const PhotonPMF& pmf1, const PhotonPMF& pmf2) {
    if (pmf1.cutoff() != pmf2.cutoff()) throw std::invalid_argument("pmf cutoffs differ");
    if (pmf1.tail_mass >= 1e-8 || pmf2.tail_mass >= 1e-8)
        throw std::invalid_argument("tail mass too large for exponent computation");

    bool any_common = false;
    for (std::size_t n = 0; n < pmf1.probs.size(); ++n) {
        if (pmf1.probs[n] > 0.0 && pmf2.probs[n] > 0.0) {
            any_common = true;
            break;
        }
    }
    if (!any_common) return result_from(0.5, 0.0);  // disjoint supports: xi = +inf

    const auto q = [&](double s) {
        double sum = 0.0;
        double comp = 0.0;  // Kahan compensation; Q - 1 can be ~1e-8
        for (std::size_t n = 0; n < pmf1.probs.size(); ++n) {
            const double term = support_term(pmf1.probs[n], pmf2.probs[n], s);
            const double y = term - comp;
            const double t = sum + y;
            comp = (t - sum) - y;
            sum = t;
        }
        return sum;
    };
    const double s = golden_section_min(q, 0.0, 1.0, 1e-10);
    // The minimum may sit on the boundary of [0,1]; golden section stops a
    // hair inside, so check the endpoints explicitly.
    double best_s = s;
    double best_q = q(s);
    for (double cand : {0.0, 1.0}) {
        const double qc = q(cand);
        if (qc < best_q) {
            best_q = qc;
            best_s = cand;
        }
    }
    return result_from(best_s, std::min(best_q, 1.0));
}

double qcb_coh_thermal(double nbar_r) {
    if (nbar_r < 0.0) throw std::invalid_argument("nbar_r must be non-negative");
    return nbar_r / (nbar_r + 1.0) + std::log1p(nbar_r);
}

double g_function(double perr) {
    if (!(perr > 0.0 && perr < 0.5)) throw std::domain_error("g_function: perr must be in (0, 1/2)");
    // Simplified algebraic form of the curvature coefficient,
    //   G(P) = P^2 [z^2 u^2 + (2z - u)^2] / (4 (P Pbar)^{3/2} u^2),
    // with z = 1 - 2P and u = ln(Pbar/P) = 2 atanh(z).  Both addends are
    // squares, which keeps G positive and avoids the cancellation the raw
    // expression suffers near P = 1/2.
    const double pbar = 1.0 - perr;
    const double z = 1.0 - 2.0 * perr;
    const double u = std::log(pbar / perr);
    const double w2 = perr * pbar;
    const double ratio = 2.0 * z / u - 1.0;  // -> -z^2/3 as P -> 1/2
    return perr * perr * (z * z + ratio * ratio) / (4.0 * w2 * std::sqrt(w2));
}

double exponent_upper_bound(double fidelity_val, double bias) {
    if (!(fidelity_val > 0.0 && fidelity_val <= 1.0))
        throw std::domain_error("fidelity must be in (0,1]");
    const double perr_min = 0.5 * (1.0 - std::sqrt(1.0 - fidelity_val));
    // G -> 0 as perr -> 1/2, i.e. as F -> 1.
    const double g = perr_min < 0.5 ? g_function(perr_min) : 0.0;
    return -0.5 * std::log(fidelity_val) + g / std::sqrt(fidelity_val) * bias * bias;
}

double helstrom_exponent_lower_bound(double fidelity_val) {
    if (!(fidelity_val > 0.0 && fidelity_val <= 1.0))
        throw std::domain_error("fidelity must be in (0,1]");
    const double root = std::sqrt(fidelity_val);
    return -0.5 * std::log(root * (2.0 - root));
}

Table1Asymptotics table1_asymptotics(double nbar_r) {
    if (nbar_r < 0.0) throw std::invalid_argument("nbar_r must be non-negative");
    const double sqrt_e = std::exp(0.5);
    Table1Asymptotics t;
    t.qcb_kennedy = 2.0 * nbar_r;
    t.helstrom_upper = nbar_r;
    t.helstrom = 0.5 * nbar_r;
    t.gk_upper = 2.0 * (1.0 + (1.0 - sqrt_e) * (1.0 - sqrt_e)) * nbar_r / std::exp(1.0);
    const double dd_coeff = 0.5 * (1.0 - std::log2(std::exp(1.0) * std::log(2.0)));
    t.dd = dd_coeff * nbar_r * nbar_r;
    return t;
}

HelstromPoint helstrom_point(double nbar_r, int dim) {
    if (dim < 2) throw std::invalid_argument("dim must be >= 2");
    // Thermal-first orientation: p = Tr[pi_2 rho_th], q = Tr[pi_1 rho_coh],
    // which makes the photon-starved bias +sqrt(nbar).
    const DensityMatrix rho_th = thermal_density(nbar_r, dim);
    const DensityMatrix rho_coh = coherent_density(nbar_r, dim);
    const HelstromMeasurement meas = helstrom_measurement(rho_th, rho_coh);
    HelstromPoint point;
    point.stats = make_single_copy_stats(meas.p, meas.q);
    point.chernoff = binary_chernoff_exponent(meas.p, meas.q);
    return point;
}

ChernoffResult helstrom_exponent_exact(double nbar_r, int dim) {
    return helstrom_point(nbar_r, dim).chernoff;
}

}  // namespace cohtherm
