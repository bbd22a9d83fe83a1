#ifndef DRIFTCAL_TEST_UTIL_HPP
#define DRIFTCAL_TEST_UTIL_HPP

#include <cstdint>
#include <random>
#include <vector>

#include "driftcal/gpr.hpp"
#include "driftcal/kernels.hpp"

namespace dctest {

inline std::mt19937_64 rng(std::uint64_t seed) { return std::mt19937_64(seed); }

inline double uniform(std::mt19937_64& g, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(g);
}

inline double gauss(std::mt19937_64& g) {
    return std::normal_distribution<double>(0.0, 1.0)(g);
}

inline driftcal::KernelFamily random_family(std::mt19937_64& g) {
    switch (std::uniform_int_distribution<int>(0, 2)(g)) {
        case 0: return driftcal::KernelFamily::kRbf;
        case 1: return driftcal::KernelFamily::kRationalQuadratic;
        default: return driftcal::KernelFamily::kMatern;
    }
}

inline driftcal::KernelSpec random_kernel(std::mt19937_64& g) {
    driftcal::KernelSpec k;
    k.family = random_family(g);
    k.variance = uniform(g, 0.2, 5.0);
    k.length_hours = uniform(g, 20.0, 300.0);
    k.alpha = uniform(g, 0.3, 3.0);
    switch (std::uniform_int_distribution<int>(0, 2)(g)) {
        case 0: k.nu = driftcal::MaternNu::kHalf; break;
        case 1: k.nu = driftcal::MaternNu::kThreeHalves; break;
        default: k.nu = driftcal::MaternNu::kFiveHalves; break;
    }
    return k;
}

/// Times with generous spacing relative to the length scale, so noise-free
/// interpolation stays well conditioned.
inline std::vector<double> spaced_times(std::mt19937_64& g, std::size_t n,
                                        double length, double min_gap_lengths = 1.5) {
    std::vector<double> ts(n);
    double t = uniform(g, 0.0, length);
    for (std::size_t i = 0; i < n; ++i) {
        ts[i] = t;
        t += length * (min_gap_lengths + uniform(g, 0.0, 1.5));
    }
    return ts;
}

}  // namespace dctest

#endif  // DRIFTCAL_TEST_UTIL_HPP
