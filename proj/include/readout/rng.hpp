#ifndef READOUT_RNG_HPP
#define READOUT_RNG_HPP

#include <cmath>
#include <cstdint>
#include <utility>

// Counter-based random numbers: every draw is a pure function of
// (seed, stream, counter), so ensembles are reproducible bit-for-bit
// regardless of execution order or thread count.

namespace readout {
namespace rng {

// 64-bit avalanche finalizer (splitmix64).
inline uint64_t mix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

// Chained mixing of the three key words; sequential chaining keeps
// (seed, stream, counter) permutations from colliding.
inline uint64_t key_hash(uint64_t seed, uint64_t stream, uint64_t counter) {
    return mix64(mix64(mix64(seed) ^ stream) ^ counter);
}

inline double to_open_unit(uint64_t bits) {
    // 53-bit mantissa onto (0,1]; never returns 0 so log() is safe
    return (double(bits >> 11) + 1.0) * (1.0 / 9007199254740992.0);
}

/// Two independent standard-normal deviates for key (seed, stream, counter),
/// via Box-Muller on two counter-hashed uniforms.
inline std::pair<double, double> normal_pair(uint64_t seed, uint64_t stream, uint64_t counter) {
    const uint64_t h1 = key_hash(seed, stream, counter);
    const uint64_t h2 = mix64(h1 ^ 0xd1342543de82ef95ull);
    const double u1 = to_open_unit(h1);
    const double u2 = to_open_unit(h2);
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 6.283185307179586476925286766559 * u2;
    return {r * std::cos(theta), r * std::sin(theta)};
}

inline double normal(uint64_t seed, uint64_t stream, uint64_t counter) {
    return normal_pair(seed, stream, counter).first;
}

inline double uniform(uint64_t seed, uint64_t stream, uint64_t counter) {
    return to_open_unit(key_hash(seed, stream, counter));
}

}  // namespace rng
}  // namespace readout

#endif
