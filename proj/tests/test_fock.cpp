#include <cmath>
#include <complex>
#include <random>

#include "cohtherm/fock.hpp"
#include "doctest.h"

using namespace cohtherm;

namespace {

DensityMatrix random_density(std::mt19937_64& eng, int dim, int rank) {
    std::normal_distribution<double> gauss;
    CMatrix g(dim, rank);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < rank; ++j) g(i, j) = std::complex<double>(gauss(eng), gauss(eng));
    CMatrix rho = g * g.adjoint();
    rho /= rho.trace().real();
    return DensityMatrix{dim, rho, 0.0};
}

}  // namespace

TEST_CASE("coherent_density basics") {
    SUBCASE("vacuum") {
        const DensityMatrix rho = coherent_density(0.0, 4);
        CHECK(rho.entries(0, 0).real() == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(std::abs(rho.entries(1, 1)) < 1e-15);
        CHECK(std::abs(rho.entries(0, 1)) < 1e-15);
        CHECK(rho.tail_mass == doctest::Approx(0.0).epsilon(1e-14));
    }
    SUBCASE("nbar = 0.2") {
        const DensityMatrix rho = coherent_density(0.2, 30);
        CHECK(rho.entries(0, 0).real() == doctest::Approx(std::exp(-0.2)).epsilon(1e-12));
        CHECK(rho.entries(0, 1).real() ==
              doctest::Approx(std::exp(-0.2) * std::sqrt(0.2)).epsilon(1e-12));
        CHECK(rho.entries(0, 0).real() == doctest::Approx(0.818731).epsilon(1e-6));
        CHECK(rho.entries(0, 1).real() == doctest::Approx(0.366147).epsilon(1e-5));
    }
    SUBCASE("invariants") {
        const DensityMatrix rho = coherent_density(0.7, 25);
        CHECK((rho.entries - rho.entries.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
        CHECK(rho.entries.trace().real() + rho.tail_mass == doctest::Approx(1.0).epsilon(1e-10));
    }
    CHECK_THROWS(coherent_density(-0.1, 10));
    CHECK_THROWS(coherent_density(0.1, 1));
}

TEST_CASE("thermal_density basics") {
    SUBCASE("zero temperature") {
        const DensityMatrix rho = thermal_density(0.0, 4);
        CHECK(rho.entries(0, 0).real() == doctest::Approx(1.0));
        CHECK(std::abs(rho.entries(1, 1)) == doctest::Approx(0.0));
    }
    SUBCASE("nbar = 0.2") {
        const DensityMatrix rho = thermal_density(0.2, 30);
        CHECK(rho.entries(0, 0).real() == doctest::Approx(1.0 / 1.2).epsilon(1e-12));
        CHECK(rho.entries(3, 3).real() ==
              doctest::Approx(std::pow(0.2, 3) / std::pow(1.2, 4)).epsilon(1e-12));
    }
    SUBCASE("geometric tail") {
        CHECK(thermal_density(1.0, 2).tail_mass == doctest::Approx(0.25).epsilon(1e-12));
    }
    CHECK_THROWS(thermal_density(-1e-9, 4));
}

TEST_CASE("adequate_cutoff keeps tails below target") {
    for (double nbar : {0.01, 0.2, 1.0}) {
        const int dim = adequate_cutoff(nbar);
        CHECK(thermal_density(nbar, dim).tail_mass < 1e-10);
        CHECK(coherent_density(nbar, dim).tail_mass < 1e-10);
    }
}

TEST_CASE("displacement_matrix") {
    SUBCASE("zero displacement is the identity") {
        const CMatrix d = displacement_matrix(0.0, 6);
        CHECK((d - CMatrix::Identity(6, 6)).cwiseAbs().maxCoeff() < 1e-14);
    }
    SUBCASE("column 0 is the coherent state") {
        const std::complex<double> beta(0.4, 0.3);
        const CMatrix d = displacement_matrix(beta, 20);
        const double abs2 = std::norm(beta);
        std::complex<double> amp = std::exp(-0.5 * abs2);
        for (int n = 0; n < 12; ++n) {
            CHECK(std::abs(d(n, 0) - amp) < 1e-12);
            amp *= beta / std::sqrt(static_cast<double>(n + 1));
        }
    }
    SUBCASE("inverse on the interior block") {
        const CMatrix d = displacement_matrix(0.5, 40);
        const CMatrix dm = displacement_matrix(-0.5, 40);
        const CMatrix prod = (d * dm).topLeftCorner(20, 20);
        CHECK((prod - CMatrix::Identity(20, 20)).cwiseAbs().maxCoeff() < 1e-8);
    }
}

TEST_CASE("fidelity") {
    const DensityMatrix coh = coherent_density(0.2, 40);
    const DensityMatrix th = thermal_density(0.2, 40);
    SUBCASE("identical states") {
        CHECK(fidelity(th, th) == doctest::Approx(1.0).epsilon(1e-10));
    }
    SUBCASE("coherent vs thermal closed form") {
        // Tr[rho_coh rho_th] = (1+nbar)^-1 exp(-nbar/(1+nbar))
        const double expected = std::exp(-0.2 / 1.2) / 1.2;
        CHECK(fidelity(coh, th) == doctest::Approx(expected).epsilon(1e-10));
        CHECK(fidelity(coh, th) == doctest::Approx(0.705401).epsilon(1e-5));
    }
    SUBCASE("vacuum vs thermal") {
        const DensityMatrix vac = coherent_density(0.0, 40);
        const DensityMatrix th1 = thermal_density(1.0, 40);
        CHECK(fidelity(vac, th1) == doctest::Approx(0.5).epsilon(1e-9));
    }
    SUBCASE("symmetry") {
        CHECK(fidelity(coh, th) == doctest::Approx(fidelity(th, coh)).epsilon(1e-9));
    }
    SUBCASE("rank-one shortcut") {
        std::mt19937_64 eng(11);
        const DensityMatrix mixed = random_density(eng, 12, 3);
        const DensityMatrix pure = coherent_density(0.3, 12);
        DensityMatrix pure_notail = pure;
        pure_notail.entries /= pure.entries.trace().real();
        pure_notail.tail_mass = 0.0;
        const double quad = (pure_notail.entries * mixed.entries).trace().real();
        CHECK(fidelity(pure_notail, mixed) == doctest::Approx(quad).epsilon(1e-9));
    }
    SUBCASE("errors") {
        CHECK_THROWS(fidelity(coherent_density(0.2, 10), thermal_density(0.2, 12)));
        // nbar = 3 at dim 4 leaves a large thermal tail
        CHECK_THROWS(fidelity(coherent_density(3.0, 4), thermal_density(3.0, 4)));
    }
}

TEST_CASE("helstrom_measurement") {
    SUBCASE("degenerate pair follows the zero-eigenvalue convention") {
        const DensityMatrix th = thermal_density(0.3, 12);
        const HelstromMeasurement meas = helstrom_measurement(th, th);
        CHECK((meas.pi_1 - CMatrix::Identity(12, 12)).cwiseAbs().maxCoeff() < 1e-12);
        CHECK(meas.p == doctest::Approx(0.0));
        CHECK(meas.q == doctest::Approx(thermal_density(0.3, 12).entries.trace().real()));
    }
    SUBCASE("qubit truncation at nbar = 0.01") {
        // Thermal-first ordering; p ~ 1/2, q ~ 1/2 - sqrt(nbar).
        const HelstromMeasurement meas =
            helstrom_measurement(thermal_density(0.01, 2), coherent_density(0.01, 2));
        CHECK(meas.p == doctest::Approx(0.5).epsilon(0.02));
        CHECK(meas.q == doctest::Approx(0.4).epsilon(0.025));
    }
    SUBCASE("orthogonal pure states") {
        CMatrix e0 = CMatrix::Zero(3, 3);
        e0(0, 0) = 1.0;
        CMatrix e1 = CMatrix::Zero(3, 3);
        e1(1, 1) = 1.0;
        const HelstromMeasurement meas =
            helstrom_measurement(DensityMatrix{3, e0, 0.0}, DensityMatrix{3, e1, 0.0});
        CHECK(meas.p == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(meas.q == doctest::Approx(0.0).epsilon(1e-12));
    }
    SUBCASE("projector identities and trace-norm consistency") {
        std::mt19937_64 eng(42);
        for (int it = 0; it < 20; ++it) {
            const int dim = 2 + static_cast<int>(eng() % 5);
            const DensityMatrix r1 = random_density(eng, dim, 1 + static_cast<int>(eng() % dim));
            const DensityMatrix r2 = random_density(eng, dim, 1 + static_cast<int>(eng() % dim));
            const HelstromMeasurement meas = helstrom_measurement(r1, r2);
            CHECK((meas.pi_1 + meas.pi_2 - CMatrix::Identity(dim, dim)).cwiseAbs().maxCoeff() <
                  1e-10);
            CHECK((meas.pi_1 * meas.pi_1 - meas.pi_1).cwiseAbs().maxCoeff() < 1e-9);
            CHECK((meas.pi_2 * meas.pi_2 - meas.pi_2).cwiseAbs().maxCoeff() < 1e-9);
            const double expected = 0.5 * (1.0 - 0.5 * trace_norm(r1.entries - r2.entries));
            CHECK(meas.error_probability() == doctest::Approx(expected).epsilon(1e-9));
        }
    }
    SUBCASE("beats random projective measurements") {
        std::mt19937_64 eng(7);
        std::normal_distribution<double> gauss;
        const DensityMatrix r1 = random_density(eng, 4, 2);
        const DensityMatrix r2 = random_density(eng, 4, 4);
        const double helstrom_err = helstrom_measurement(r1, r2).error_probability();
        for (int it = 0; it < 1000; ++it) {
            CMatrix g(4, 4);
            for (int i = 0; i < 4; ++i)
                for (int j = 0; j < 4; ++j) g(i, j) = std::complex<double>(gauss(eng), gauss(eng));
            const Eigen::HouseholderQR<CMatrix> qr(g);
            const CMatrix u = qr.householderQ();
            const int k = 1 + static_cast<int>(eng() % 3);
            const CMatrix pi1 = u.leftCols(k) * u.leftCols(k).adjoint();
            const CMatrix pi2 = CMatrix::Identity(4, 4) - pi1;
            const double err = 0.5 * ((pi2 * r1.entries).trace().real() +
                                      (pi1 * r2.entries).trace().real());
            CHECK(helstrom_err <= err + 1e-12);
        }
    }
}

TEST_CASE("pure_pure_helstrom") {
    CHECK(pure_pure_helstrom(0.0).p == doctest::Approx(0.0));
    CHECK(pure_pure_helstrom(1.0).p == doctest::Approx(0.5));
    CHECK(pure_pure_helstrom(0.75).p == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(pure_pure_helstrom(0.75).q == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(pure_pure_helstrom(0.4).bias == 0.0);
    CHECK_THROWS(pure_pure_helstrom(1.5));
}

TEST_CASE("Fuchs-van de Graaf sandwich on random pairs") {
    std::mt19937_64 eng(123);
    for (int it = 0; it < 100; ++it) {
        const int dim = 2 + static_cast<int>(eng() % 5);
        const DensityMatrix r1 = random_density(eng, dim, 1 + static_cast<int>(eng() % dim));
        const DensityMatrix r2 = random_density(eng, dim, 1 + static_cast<int>(eng() % dim));
        const double f = fidelity(r1, r2);
        const double dist = trace_distance(r1, r2);
        CHECK(1.0 - std::sqrt(f) <= dist + 1e-9);
        CHECK(dist <= std::sqrt(1.0 - f) + 1e-9);
    }
}
