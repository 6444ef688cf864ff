#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace kisched {

// Seeded random stream. All randomness in the project flows through this
// wrapper so that draws are reproducible bit-for-bit: mt19937_64 has a
// standard-specified sequence and the uniform mappings below avoid the
// implementation-defined std::*_distribution classes.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform on [0, 1) with 53 random bits.
    double uniform01() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Uniform integer in [0, bound). bound must be > 0.
    std::uint64_t uniform_int(std::uint64_t bound) {
        // Multiply-shift reduction; the modulo bias is < 2^-53 of a draw,
        // irrelevant next to the graph sizes involved, and fully deterministic.
        return static_cast<std::uint64_t>(uniform01() * static_cast<double>(bound)) % bound;
    }

private:
    std::mt19937_64 engine_;
};

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

// Independent per-record stream: (master seed, purpose tag, index) -> seed.
inline std::uint64_t derive_seed(std::uint64_t master, std::string_view tag, std::uint64_t index) {
    return splitmix64(splitmix64(master ^ fnv1a64(tag)) ^ index);
}

} // namespace kisched
