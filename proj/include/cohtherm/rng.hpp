#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <random>

namespace cohtherm::rng {

// splitmix64 finalizer; used both as a mixer and to expand seeds.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Derives an independent stream seed from a base seed and a path of indices
// (replication, grid index, trial index, ...).  Hashing the path rather than
// jumping a single generator keeps results independent of execution order
// and thread count.
constexpr std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> path) {
    std::uint64_t h = mix64(base);
    for (std::uint64_t component : path) {
        h = mix64(h ^ mix64(component + 0x632be59bd9b4e019ULL));
    }
    return h;
}

// Deterministic random stream.  Uniform and normal variates are produced from
// raw mt19937_64 words so that output does not depend on the standard
// library's distribution implementations.
class Stream {
  public:
    explicit Stream(std::uint64_t seed) : eng_(seed) {}

    // Uniform on [0, 1).
    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    // Uniform on (0, 1].
    double uniform_pos() { return static_cast<double>((eng_() >> 11) + 1) * 0x1.0p-53; }

    // Standard normal via Box-Muller (one variate per call).
    double normal() {
        const double u1 = uniform_pos();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
    }

    // Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n) {
        // Rejection-free modulo bias is negligible for n << 2^64 but we keep
        // the draw reproducible and unbiased via Lemire's method.
        std::uint64_t x = eng_();
        __uint128_t m = static_cast<__uint128_t>(x) * n;
        std::uint64_t l = static_cast<std::uint64_t>(m);
        if (l < n) {
            const std::uint64_t t = (0 - n) % n;
            while (l < t) {
                x = eng_();
                m = static_cast<__uint128_t>(x) * n;
                l = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

  private:
    std::mt19937_64 eng_;
};

}  // namespace cohtherm::rng
