#pragma once

// Counter-based Gaussian random number generation.
//
// Every draw is a pure function of (seed, a, b, c), so sampling is
// reproducible bit-for-bit regardless of evaluation order or thread count.
// The mixer is the SplitMix64 finalizer applied to a chained key; normals
// come from a hand-rolled Box-Muller so the byte stream does not depend on
// the standard library's distribution implementation.

#include <cmath>
#include <cstdint>

namespace vort {
namespace rng {

inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Chain several stream identifiers into one 64-bit key.
inline std::uint64_t key(std::uint64_t seed, std::uint64_t a, std::uint64_t b,
                         std::uint64_t c) {
    std::uint64_t k = mix64(seed);
    k = mix64(k ^ a);
    k = mix64(k ^ b);
    k = mix64(k ^ c);
    return k;
}

// Uniform in (0,1]; the shift keeps exactly 53 mantissa bits.
inline double uniform_closed_open(std::uint64_t bits) {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

// One standard normal per key (Box-Muller, cosine branch).
inline double standard_normal(std::uint64_t k) {
    const double u1 = 1.0 - uniform_closed_open(mix64(k ^ 0xd1b54a32d192ed03ULL));
    const double u2 = uniform_closed_open(mix64(k ^ 0x8cb92ba72f3d8dd7ULL));
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
}

inline double standard_normal(std::uint64_t seed, std::uint64_t a,
                              std::uint64_t b, std::uint64_t c) {
    return standard_normal(key(seed, a, b, c));
}

// Per-member seed for ensembles.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t member) {
    return mix64(master ^ mix64(member ^ 0xa0761d6478bd642fULL));
}

}  // namespace rng
}  // namespace vort
