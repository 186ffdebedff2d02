// rng.hpp — Deterministic random streams.
//
// std::mt19937_64 is bit-exact across implementations, but the standard
// distributions are not.  Everything that must reproduce byte-identical
// output (disorder draws, Monte Carlo walkers) therefore maps raw engine
// words to [0,1) by hand.

#pragma once

#include <cstdint>
#include <random>

namespace coopdyn {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

// Independent engine for stream `index` of a run seeded with `seed`.
// Streams are a pure function of (seed, index), so results do not depend
// on scheduling or worker count.
inline std::mt19937_64 stream_engine(std::uint64_t seed, std::uint64_t index) {
    return std::mt19937_64(splitmix64(splitmix64(seed) ^ index));
}

// Uniform on [0,1) with 53-bit resolution; portable unlike
// std::uniform_real_distribution.
inline double uniform01(std::mt19937_64& eng) {
    return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

// Uniform on [-w, w].
inline double uniform_symmetric(std::mt19937_64& eng, double w) {
    return w * (2.0 * uniform01(eng) - 1.0);
}

} // namespace coopdyn
