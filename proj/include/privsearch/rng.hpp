#pragma once

#include <cstdint>
#include <random>

// Seeded randomness helpers. Everything downstream of a seed must be
// bit-reproducible across platforms and thread counts, so we only use
// std::mt19937_64 (whose output sequence the standard pins down) and do the
// uniform-variate derivation ourselves instead of going through the
// implementation-defined <random> distributions.

namespace privsearch {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Folds any number of 64-bit coordinates into a base seed. Used to give every
// (experiment, cell, run) its own independent random stream.
inline std::uint64_t derive_seed(std::uint64_t base) {
    return splitmix64(base);
}

template <class... Rest>
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t part, Rest... rest) {
    return derive_seed(splitmix64(base ^ (part + 0x9e3779b97f4a7c15ULL + (base << 6) + (base >> 2))),
                       rest...);
}

using Rng = std::mt19937_64;

inline Rng make_rng(std::uint64_t seed) {
    return Rng(seed);
}

// Uniform double in [0, 1), 53 random bits.
inline double uniform_double(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Uniform integer in [0, n). Rejection sampling keeps it exactly uniform.
inline std::uint64_t uniform_below(Rng& rng, std::uint64_t n) {
    if (n <= 1)
        return 0;
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
    std::uint64_t x;
    do {
        x = rng();
    } while (x >= limit);
    return x % n;
}

} // namespace privsearch
