#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace growthsde::rng {

// Philox4x32-10 counter-based generator (Salmon et al., SC 2011).
// Every draw is a pure function of (seed, stream, index), so ensembles are
// reproducible bit-for-bit no matter how work is split across threads.

namespace detail {

inline void mulhilo(uint32_t a, uint32_t b, uint32_t& hi, uint32_t& lo) {
    const uint64_t p = static_cast<uint64_t>(a) * b;
    hi = static_cast<uint32_t>(p >> 32);
    lo = static_cast<uint32_t>(p);
}

struct Block {
    uint32_t v[4];
};

inline Block philox4x32(uint64_t key, uint64_t ctr_lo, uint64_t ctr_hi) {
    uint32_t c0 = static_cast<uint32_t>(ctr_lo);
    uint32_t c1 = static_cast<uint32_t>(ctr_lo >> 32);
    uint32_t c2 = static_cast<uint32_t>(ctr_hi);
    uint32_t c3 = static_cast<uint32_t>(ctr_hi >> 32);
    uint32_t k0 = static_cast<uint32_t>(key);
    uint32_t k1 = static_cast<uint32_t>(key >> 32);
    for (int round = 0; round < 10; ++round) {
        uint32_t hi0, lo0, hi1, lo1;
        mulhilo(0xD2511F53u, c0, hi0, lo0);
        mulhilo(0xCD9E8D57u, c2, hi1, lo1);
        c0 = hi1 ^ c1 ^ k0;
        c1 = lo1;
        c2 = hi0 ^ c3 ^ k1;
        c3 = lo0;
        k0 += 0x9E3779B9u;
        k1 += 0xBB67AE85u;
    }
    return Block{{c0, c1, c2, c3}};
}

}  // namespace detail

// Uniform on (0,1] and [0,1) from one 128-bit block.
inline void uniform_pair(uint64_t seed, uint64_t stream, uint64_t index,
                         double& u_open, double& u_half) {
    const detail::Block b = detail::philox4x32(seed, index, stream);
    const uint64_t a = (static_cast<uint64_t>(b.v[0]) << 32) | b.v[1];
    const uint64_t c = (static_cast<uint64_t>(b.v[2]) << 32) | b.v[3];
    u_open = (static_cast<double>(a >> 11) + 1.0) * 0x1p-53;  // (0,1]
    u_half = static_cast<double>(c >> 11) * 0x1p-53;          // [0,1)
}

// Standard normal draw at a (seed, stream, index) coordinate (Box-Muller).
inline double normal(uint64_t seed, uint64_t stream, uint64_t index) {
    double u1, u2;
    uniform_pair(seed, stream, index, u1, u2);
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
}

// Pair of independent standard normals from one block.
inline void normal_pair(uint64_t seed, uint64_t stream, uint64_t index,
                        double& z1, double& z2) {
    double u1, u2;
    uniform_pair(seed, stream, index, u1, u2);
    const double r = std::sqrt(-2.0 * std::log(u1));
    z1 = r * std::cos(2.0 * std::numbers::pi * u2);
    z2 = r * std::sin(2.0 * std::numbers::pi * u2);
}

inline double uniform(uint64_t seed, uint64_t stream, uint64_t index) {
    double u1, u2;
    uniform_pair(seed, stream, index, u1, u2);
    return u2;
}

// splitmix-style mixer for deriving substream ids from arbitrary 64-bit tags
inline uint64_t mix(uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

inline uint64_t mix2(uint64_t a, uint64_t b) { return mix(mix(a) ^ b); }

}  // namespace growthsde::rng
