#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace hazardgrid {

// mt19937_64 is fully specified by the standard; the std:: distributions are
// not, so the bounded draws below are written out to keep outputs identical
// across standard libraries.
using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Stable 64-bit hash of an ordered tuple of integers. Used to derive child
/// seeds: h0 = splitmix64(seed), h(i+1) = splitmix64(h(i) ^ field(i)).
inline std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> fields)
{
    std::uint64_t h = splitmix64(seed);
    for (std::uint64_t f : fields)
        h = splitmix64(h ^ f);
    return h;
}

/// Uniform double in [0, 1) from the top 53 bits of one engine draw.
inline double uniform01(Rng& rng)
{
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Uniform integer in [0, n) by rejection; n must be positive.
inline std::uint64_t uniform_index(Rng& rng, std::uint64_t n)
{
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t v;
    do {
        v = rng();
    } while (v >= limit);
    return v % n;
}

} // namespace hazardgrid
