#include "cohtherm/fock.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cohtherm {

namespace {

void require(bool ok, const char* msg) {
    if (!ok) throw std::invalid_argument(msg);
}

// Hermitian square root.  Eigenvalues below a relative floor are zeroed; on
// rank-deficient inputs sqrt would otherwise amplify O(eps) eigensolver noise
// on the null space to O(1e-8).
CMatrix psd_sqrt(const CMatrix& a) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(a);
    if (es.info() != Eigen::Success) throw std::runtime_error("eigendecomposition failed");
    const Eigen::VectorXd& vals = es.eigenvalues();
    const double floor_val = vals.cwiseAbs().maxCoeff() * static_cast<double>(a.rows()) * 1e-15;
    Eigen::VectorXd roots(vals.size());
    for (Eigen::Index i = 0; i < vals.size(); ++i)
        roots[i] = vals[i] > floor_val ? std::sqrt(vals[i]) : 0.0;
    return es.eigenvectors() * roots.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace

int adequate_cutoff(double nbar, double tail_target) {
    require(nbar >= 0.0, "nbar must be non-negative");
    require(tail_target > 0.0 && tail_target < 1.0, "tail_target must be in (0,1)");
    int dim = 8;
    if (nbar > 0.0) {
        // Thermal tail (nbar/(nbar+1))^dim dominates the Poisson tail.
        const double thermal_dim = std::log(tail_target) / std::log(nbar / (nbar + 1.0));
        dim = std::max(dim, static_cast<int>(std::ceil(thermal_dim)) + 2);
        // Poisson tail: walk the cumulative until it clears the target.
        double term = std::exp(-nbar);
        double cum = term;
        int n = 0;
        while (1.0 - cum > tail_target * 0.5 && n < 100000) {
            ++n;
            term *= nbar / n;
            cum += term;
        }
        dim = std::max(dim, n + 2);
    }
    return dim;
}

DensityMatrix coherent_density(double nbar, int dim) {
    require(nbar >= 0.0, "nbar must be non-negative");
    require(dim >= 2, "dim must be >= 2");
    const double alpha = std::sqrt(nbar);
    Eigen::VectorXd amp(dim);
    amp[0] = std::exp(-0.5 * nbar);
    for (int n = 1; n < dim; ++n) amp[n] = amp[n - 1] * alpha / std::sqrt(static_cast<double>(n));
    DensityMatrix rho;
    rho.dim = dim;
    rho.entries = (amp * amp.transpose()).cast<std::complex<double>>();
    rho.tail_mass = std::max(0.0, 1.0 - amp.squaredNorm());
    return rho;
}

DensityMatrix thermal_density(double nbar, int dim) {
    require(nbar >= 0.0, "nbar must be non-negative");
    require(dim >= 2, "dim must be >= 2");
    DensityMatrix rho;
    rho.dim = dim;
    rho.entries = CMatrix::Zero(dim, dim);
    const double ratio = nbar / (nbar + 1.0);
    double term = 1.0 / (nbar + 1.0);
    for (int n = 0; n < dim; ++n) {
        rho.entries(n, n) = term;
        term *= ratio;
    }
    rho.tail_mass = std::pow(ratio, dim);
    return rho;
}

CMatrix displacement_matrix(std::complex<double> beta, int dim) {
    require(dim >= 2, "dim must be >= 2");
    // Work at an enlarged cutoff so truncation-induced non-unitarity stays in
    // the discarded rows.  Columns follow from D(b)|n+1> =
    // (a^dag - conj(b)) D(b)|n> / sqrt(n+1), seeded by the coherent state
    // D(b)|0> = |b>.
    const double abs2 = std::norm(beta);
    const int pad = 20 + static_cast<int>(std::ceil(4.0 * std::sqrt(abs2) + 2.0 * abs2));
    const int big = dim + pad;
    CMatrix d = CMatrix::Zero(big, big);
    d(0, 0) = std::exp(-0.5 * abs2);
    for (int m = 1; m < big; ++m) d(m, 0) = d(m - 1, 0) * beta / std::sqrt(static_cast<double>(m));
    for (int n = 0; n + 1 < big; ++n) {
        const double inv = 1.0 / std::sqrt(static_cast<double>(n + 1));
        for (int m = 0; m < big; ++m) {
            std::complex<double> v = -std::conj(beta) * d(m, n);
            if (m > 0) v += std::sqrt(static_cast<double>(m)) * d(m - 1, n);
            d(m, n + 1) = v * inv;
        }
    }
    return d.topLeftCorner(dim, dim);
}

double fidelity(const DensityMatrix& rho1, const DensityMatrix& rho2) {
    require(rho1.dim == rho2.dim, "dimension mismatch");
    require(rho1.tail_mass < 1e-6 && rho2.tail_mass < 1e-6,
            "tail mass too large; increase the Fock cutoff");
    // F = ||sqrt(rho1) sqrt(rho2)||_1^2; the singular-value route keeps
    // null-space noise second order instead of the sqrt(eps) of the
    // Tr[sqrt(sqrt(rho1) rho2 sqrt(rho1))] form.
    const CMatrix product = psd_sqrt(rho1.entries) * psd_sqrt(rho2.entries);
    Eigen::BDCSVD<CMatrix> svd(product);
    const double root_sum = svd.singularValues().sum();
    return std::min(1.0, root_sum * root_sum);
}

double trace_norm(const CMatrix& hermitian) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian);
    if (es.info() != Eigen::Success) throw std::runtime_error("eigendecomposition failed");
    return es.eigenvalues().cwiseAbs().sum();
}

double trace_distance(const DensityMatrix& rho1, const DensityMatrix& rho2) {
    require(rho1.dim == rho2.dim, "dimension mismatch");
    return 0.5 * trace_norm(rho1.entries - rho2.entries);
}

HelstromMeasurement helstrom_measurement(const DensityMatrix& rho1, const DensityMatrix& rho2) {
    require(rho1.dim == rho2.dim, "dimension mismatch");
    const CMatrix lambda = rho1.entries - rho2.entries;
    if (!lambda.isApprox(lambda.adjoint(), 1e-10)) throw std::invalid_argument("inputs not Hermitian");
    Eigen::SelfAdjointEigenSolver<CMatrix> es(lambda);
    if (es.info() != Eigen::Success) throw std::runtime_error("eigendecomposition failed");

    const int dim = rho1.dim;
    HelstromMeasurement meas;
    meas.dim = dim;
    meas.pi_1 = CMatrix::Zero(dim, dim);
    for (int i = 0; i < dim; ++i) {
        if (es.eigenvalues()[i] >= 0.0) {
            // Zero eigenvalues land on the rho1 side.
            meas.pi_1 += es.eigenvectors().col(i) * es.eigenvectors().col(i).adjoint();
        }
    }
    meas.pi_2 = CMatrix::Identity(dim, dim) - meas.pi_1;
    meas.p = std::clamp((meas.pi_2 * rho1.entries).trace().real(), 0.0, 1.0);
    meas.q = std::clamp((meas.pi_1 * rho2.entries).trace().real(), 0.0, 1.0);
    return meas;
}

SingleCopyStats pure_pure_helstrom(double overlap_sq) {
    require(overlap_sq >= 0.0 && overlap_sq <= 1.0, "overlap_sq must be in [0,1]");
    const double p = 0.5 * (1.0 - std::sqrt(1.0 - overlap_sq));
    SingleCopyStats s = make_single_copy_stats(p, p);
    s.bias = 0.0;
    return s;
}

}  // namespace cohtherm
