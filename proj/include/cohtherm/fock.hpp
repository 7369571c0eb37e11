#pragma once

#include <Eigen/Dense>
#include <complex>

#include "cohtherm/stats.hpp"

namespace cohtherm {

using CMatrix = Eigen::MatrixXcd;

// Density operator truncated to the first `dim` Fock levels.  `tail_mass`
// is the trace of the untruncated state outside the kept levels, so
// trace(entries) + tail_mass = 1.
struct DensityMatrix {
    int dim = 0;
    CMatrix entries;
    double tail_mass = 0.0;
};

// Two-element projective measurement from the eigenspaces of
// lambda = rho1 - rho2.  pi_1 projects onto the non-negative eigenspace
// (zero eigenvalues included), pi_2 onto the negative one.
// p = Tr[pi_2 rho1] and q = Tr[pi_1 rho2] are the conditional error
// probabilities of deciding via pi_1 -> "rho1".
struct HelstromMeasurement {
    int dim = 0;
    CMatrix pi_1;
    CMatrix pi_2;
    double p = 0.0;
    double q = 0.0;

    double error_probability() const { return 0.5 * (p + q); }
};

// Smallest cutoff for which coherent and thermal states of mean photon
// number `nbar` both have tail mass below `tail_target`.
int adequate_cutoff(double nbar, double tail_target = 1e-10);

// |sqrt(nbar)><sqrt(nbar)| truncated to `dim` levels.  Requires nbar >= 0,
// dim >= 2.
DensityMatrix coherent_density(double nbar, int dim);

// Bose-Einstein diagonal state: entry[n][n] = nbar^n / (nbar+1)^{n+1}.
DensityMatrix thermal_density(double nbar, int dim);

// Fock-basis matrix elements <m|D(beta)|n> for m, n < dim.  Computed at an
// enlarged cutoff and truncated so the returned block is unitary up to
// tail-size defects.
CMatrix displacement_matrix(std::complex<double> beta, int dim);

// Uhlmann fidelity Tr[sqrt(sqrt(rho1) rho2 sqrt(rho1))]^2.
// Requires equal dims and tail masses below 1e-6.
double fidelity(const DensityMatrix& rho1, const DensityMatrix& rho2);

// Trace norm sum |eigenvalue| of a Hermitian matrix, and its half, the
// trace distance between two states.
double trace_norm(const CMatrix& hermitian);
double trace_distance(const DensityMatrix& rho1, const DensityMatrix& rho2);

// Minimum-error measurement for discriminating rho1 from rho2.
HelstromMeasurement helstrom_measurement(const DensityMatrix& rho1, const DensityMatrix& rho2);

// Minimum-error stats for two pure states with squared overlap
// |<psi1|psi2>|^2 = overlap_sq: p = q = [1 - sqrt(1 - overlap_sq)] / 2,
// always unbiased.
SingleCopyStats pure_pure_helstrom(double overlap_sq);

}  // namespace cohtherm
