#pragma once

#include <cstdint>
#include <random>

namespace permutonlab {

/// splitmix64 finalizer, used to derive independent stream seeds from a
/// user seed and a stream index. Mixing the index through splitmix64 keeps
/// per-chunk streams decorrelated even for adjacent indices.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Seeded generator. The mt19937_64 output sequence is pinned by the C++
/// standard, and all mappings to uniforms/integers are implemented here, so
/// identical seeds give identical results on any platform. std::*_distribution
/// is deliberately not used (its output is implementation-defined).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next_u64() { return eng_(); }

    /// Uniform double in [0, 1), 53 random bits.
    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, n), unbiased (rejection on the top range).
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t x;
        do {
            x = eng_();
        } while (x >= limit);
        return x % n;
    }

    /// true with probability p.
    bool bernoulli(double p) { return uniform() < p; }

private:
    std::mt19937_64 eng_;
};

} // namespace permutonlab
