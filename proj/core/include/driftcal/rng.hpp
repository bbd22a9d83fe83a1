#ifndef DRIFTCAL_RNG_HPP
#define DRIFTCAL_RNG_HPP

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string_view>

namespace driftcal {

/// Counter-based random stream. Every draw is a pure function of
/// (seed, stream, purpose, counter), so substreams never perturb each other
/// and adding sensors or reordering draws cannot change existing streams.
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t stream, std::string_view purpose)
        : key_(mix(mix(seed) ^ mix(stream ^ 0x9e3779b97f4a7c15ULL) ^ hash(purpose))) {}

    /// Uniform in [0, 1).
    double uniform(std::uint64_t counter) const {
        return to_unit(mix(key_ ^ mix(counter)));
    }

    /// Standard normal via Box-Muller on two derived uniforms.
    double normal(std::uint64_t counter) const {
        const double u1 = to_unit(mix(key_ ^ mix(2 * counter)));
        const double u2 = to_unit(mix(key_ ^ mix(2 * counter + 1)));
        // Guard log(0); to_unit never returns exactly 1.
        const double r = std::sqrt(-2.0 * std::log(1.0 - u1));
        return r * std::cos(2.0 * std::numbers::pi * u2);
    }

    static std::uint64_t mix(std::uint64_t x) {
        // splitmix64 finalizer
        x += 0x9e3779b97f4a7c15ULL;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return x ^ (x >> 31);
    }

private:
    static std::uint64_t hash(std::string_view s) {
        // FNV-1a
        std::uint64_t h = 0xcbf29ce484222325ULL;
        for (unsigned char c : s) {
            h ^= c;
            h *= 0x100000001b3ULL;
        }
        return h;
    }

    static double to_unit(std::uint64_t x) {
        return static_cast<double>(x >> 11) * 0x1.0p-53;
    }

    std::uint64_t key_;
};

}  // namespace driftcal

#endif  // DRIFTCAL_RNG_HPP
