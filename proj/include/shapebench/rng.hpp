#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace shapebench {

/// splitmix64 step (Steele, Lea, Flood 2014). Used for seed mixing and for
/// point-keyed noise; never as the main sampling engine.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// FNV-1a 64-bit hash of a string, for mapping algorithm ids onto seed material.
inline std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

/// Per-run stream seed derivation:
///   h = splitmix64(master_seed); h = splitmix64(h ^ fnv1a64(algo_id));
///   h = splitmix64(h ^ rep_index)
/// Echoed verbatim into metadata.json so every run is re-derivable.
inline std::uint64_t derive_stream_seed(std::uint64_t master_seed,
                                        std::string_view algo_id,
                                        std::uint64_t rep_index) {
    std::uint64_t h = splitmix64(master_seed);
    h = splitmix64(h ^ fnv1a64(algo_id));
    h = splitmix64(h ^ rep_index);
    return h;
}

/// Deterministic generator for all sampling in this project.
///
/// mt19937_64 provides the raw 64-bit stream (bit-stable everywhere by the
/// standard); the uniform double / bounded int mappings are implemented here
/// rather than with std::uniform_*_distribution, whose output sequences vary
/// between standard library versions.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform in [0, 1) with 53 random mantissa bits.
    double next_unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform in [lo, hi). The upper endpoint can be hit only through rounding.
    double uniform(double lo, double hi) { return lo + next_unit() * (hi - lo); }

    /// Uniform integer in [0, n), bias-free by rejection. n must be >= 1.
    std::uint64_t uniform_index(std::uint64_t n) {
        const std::uint64_t limit = n * ((~std::uint64_t{0}) / n);
        std::uint64_t r;
        do {
            r = engine_();
        } while (r >= limit);
        return r % n;
    }

    bool bernoulli(double p) { return next_unit() < p; }

    /// Fisher-Yates shuffle, consuming one uniform_index per swap.
    template <typename Seq>
    void shuffle(Seq& seq) {
        using std::swap;
        for (std::size_t i = seq.size(); i > 1; --i) {
            const std::size_t j = static_cast<std::size_t>(uniform_index(i));
            swap(seq[i - 1], seq[j]);
        }
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace shapebench
