#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <utility>

namespace groupsent {

/// Counter-based SplitMix64 generator.
///
/// Every draw is `mix(seed + n * 0x9e3779b97f4a7c15)` for the n-th call
/// (n starting at 1), so streams are reproducible in any language that has
/// 64-bit unsigned wraparound. All randomized operations in the library
/// (shuffles, splits, k-means seeding, box sampling) go through this type and
/// the helpers below; nothing uses <random> distributions, whose outputs are
/// implementation-defined.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

    std::uint64_t next() noexcept {
        state_ += 0x9e3779b97f4a7c15ULL;
        return mix(state_);
    }

    /// Uniform integer in [0, bound) by rejection; bound must be > 0.
    std::uint64_t bounded(std::uint64_t bound) noexcept {
        const std::uint64_t threshold = (0 - bound) % bound;
        for (;;) {
            const std::uint64_t r = next();
            if (r >= threshold) return r % bound;
        }
    }

    /// Uniform double in [0, 1) from the top 53 bits.
    double uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Standard normal via Box-Muller (one value per call; the pair's second half is dropped).
    double normal() noexcept {
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
    }

    static constexpr std::uint64_t mix(std::uint64_t z) noexcept {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

private:
    std::uint64_t state_;
};

/// Sub-seed for an independent stream, e.g. (run seed, image index) or (seed, K, restart).
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0) noexcept {
    return SplitMix64::mix(SplitMix64::mix(seed ^ 0x5851f42d4c957f2dULL) + a * 0x9e3779b97f4a7c15ULL +
                           b * 0xd1b54a32d192ed03ULL);
}

/// Fisher-Yates: for i = n-1 down to 1, swap(v[i], v[bounded(i+1)]).
template <typename T>
void shuffle(std::span<T> values, SplitMix64& rng) noexcept {
    for (std::size_t i = values.size(); i > 1; --i) {
        const auto j = static_cast<std::size_t>(rng.bounded(i));
        using std::swap;
        swap(values[i - 1], values[j]);
    }
}

}  // namespace groupsent
