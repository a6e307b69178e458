#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace hpomdp {

// All stochastic code in this library draws through these helpers so that a
// run is reproducible bit for bit from its master seed, across platforms and
// across thread counts.

using Rng = std::mt19937_64;

// One engine call per draw; uniform in [0,1).
inline double draw_unit(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

inline std::uint64_t hash_str(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ull;  // FNV-1a
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

// Stable seed fan-out: mix a master seed with a tag and up to three indices.
inline std::uint64_t derive_seed(std::uint64_t master, std::string_view tag,
                                 std::uint64_t a = 0, std::uint64_t b = 0,
                                 std::uint64_t c = 0) {
    std::uint64_t h = splitmix64(master ^ hash_str(tag));
    h = splitmix64(h ^ a);
    h = splitmix64(h ^ b);
    h = splitmix64(h ^ c);
    return h;
}

}  // namespace hpomdp
