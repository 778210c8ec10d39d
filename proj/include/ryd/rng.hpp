#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace ryd {

// Mixes a 64-bit word through the splitmix64 finalizer. Used to derive
// statistically independent engine seeds from (task seed, shot index, purpose)
// tuples so that shots can be evaluated in any order, or in parallel, without
// changing the random stream any one of them sees.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t mix64(std::uint64_t a, std::uint64_t b) {
    return mix64(mix64(a) ^ b);
}

inline std::uint64_t mix64(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
    return mix64(mix64(a, b) ^ c);
}

// Stream purposes. Each (seed, shot, purpose) triple owns a disjoint engine.
enum class StreamTag : std::uint64_t {
    fill = 0x66696c6cULL,        // trap filling + pre-sequence detection
    measure = 0x6d656173ULL,     // projective bitstring sampling
    confusion = 0x636f6e66ULL,   // readout confusion flips
    shot_noise = 0x73686f74ULL,  // per-shot coherent parameter draws
    task_noise = 0x7461736bULL,  // per-task frozen inhomogeneity draws
    postproc = 0x706f7374ULL,    // greedy tie-break randomness
};

inline std::mt19937_64 substream(std::uint64_t seed, std::uint64_t shot, StreamTag tag) {
    return std::mt19937_64(mix64(seed, shot, static_cast<std::uint64_t>(tag)));
}

inline std::mt19937_64 task_stream(std::uint64_t seed, StreamTag tag) {
    return std::mt19937_64(mix64(seed, 0xffffffffffffffffULL, static_cast<std::uint64_t>(tag)));
}

// Uniform double in [0, 1) built from the top 53 bits of one engine draw.
// Unlike std::uniform_real_distribution this consumes exactly one draw and
// produces identical values on every standard library.
inline double canonical_double(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Standard normal via an explicit Box-Muller transform: exactly two engine
// draws per variate and no distribution-object state, so results are
// bit-reproducible across standard libraries (std::normal_distribution is
// not, and rejects a zero standard deviation).
inline double normal_double(std::mt19937_64& rng) {
    double u1 = canonical_double(rng);
    const double u2 = canonical_double(rng);
    if (u1 <= 0.0) u1 = 0x1.0p-53;  // log(0) guard
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * 3.141592653589793238462643383279502884 * u2);
}

}  // namespace ryd
