#include <cmath>

#include "cohtherm/awgn.hpp"
#include "doctest.h"

using namespace cohtherm;

TEST_CASE("gaussian_q") {
    CHECK(gaussian_q(0.0) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(gaussian_q(1.0) == doctest::Approx(0.158655).epsilon(1e-5));
    CHECK(gaussian_q(-1.0) == doctest::Approx(1.0 - 0.158655253931457).epsilon(1e-12));
    SUBCASE("exponential upper bound") {
        for (double x = 0.0; x < 6.0; x += 0.25) {
            CHECK(gaussian_q(x) <= 0.5 * std::exp(-0.5 * x * x) + 1e-15);
        }
    }
}

TEST_CASE("soft_exponent") {
    CHECK(soft_exponent(AwgnProblem{8.0, 1.0}) == doctest::Approx(1.0));
    CHECK(soft_exponent(AwgnProblem{1.0, 1.0}) == doctest::Approx(0.125));
    CHECK(soft_exponent(AwgnProblem{0.0, 1.0}) == doctest::Approx(0.0));
}

TEST_CASE("hard_exponent") {
    SUBCASE("energy-starved asymptote") {
        const AwgnProblem prob{8e-4, 1.0};  // E / 8 sigma^2 = 1e-4
        const double asym = prob.energy / (4.0 * 3.14159265358979323846 * prob.noise_psd);
        const double ratio = hard_exponent(prob) / asym;
        CHECK(ratio >= 0.99);
        CHECK(ratio <= 1.01);
        const double soft_hard = soft_exponent(prob) / hard_exponent(prob);
        CHECK(std::abs(soft_hard - 1.5707963267948966) < 0.01 * 1.5707963267948966);
    }
    SUBCASE("monotone increasing in energy") {
        double prev = 0.0;
        for (double e : {0.5, 1.0, 2.0, 4.0, 8.0, 16.0}) {
            const double xi = hard_exponent(AwgnProblem{e, 1.0});
            CHECK(xi > prev);
            prev = xi;
        }
    }
    SUBCASE("soft dominates hard at every snr") {
        for (double e : {1e-3, 0.1, 1.0, 10.0}) {
            CHECK(soft_exponent(AwgnProblem{e, 1.0}) >= hard_exponent(AwgnProblem{e, 1.0}));
        }
    }
}

TEST_CASE("simulate_awgn") {
    SUBCASE("single copy: soft and hard rules coincide") {
        const auto [soft, hard] = simulate_awgn(AwgnProblem{1.0, 1.0}, 1, 20000, 5);
        CHECK(soft == hard);
    }
    SUBCASE("soft error matches the closed form") {
        const AwgnProblem prob{0.4, 1.0};
        const int m = 40;
        const auto [soft, hard] = simulate_awgn(prob, m, 100000, 17);
        const double expect = gaussian_q(std::sqrt(m * prob.energy / (4.0 * prob.noise_psd)));
        const double sigma = std::sqrt(expect * (1.0 - expect) / 100000.0);
        CHECK(std::abs(soft - expect) < 3.0 * sigma);
        CHECK(soft <= hard + 3.0 * sigma);
    }
    SUBCASE("deterministic per seed") {
        const auto a = simulate_awgn(AwgnProblem{0.5, 1.0}, 8, 5000, 123);
        const auto b = simulate_awgn(AwgnProblem{0.5, 1.0}, 8, 5000, 123);
        CHECK(a == b);
    }
}
