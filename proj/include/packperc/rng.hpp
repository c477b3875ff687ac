#pragma once

#include <cstdint>

namespace packperc {

// Philox 4x32-10 counter-based generator (Salmon et al., SC 2011).
// Stateless: every draw is a pure function of (key, counter), which is what
// makes Monte Carlo runs reproducible independently of thread scheduling.
namespace philox {

constexpr uint32_t kWeylA = 0x9E3779B9u;
constexpr uint32_t kWeylB = 0xBB67AE85u;
constexpr uint32_t kMultA = 0xD2511F53u;
constexpr uint32_t kMultB = 0xCD9E8D57u;

struct Block {
    uint32_t v[4];
};

inline void round_once(uint32_t ctr[4], const uint32_t key[2]) {
    const uint64_t p0 = static_cast<uint64_t>(kMultA) * ctr[0];
    const uint64_t p1 = static_cast<uint64_t>(kMultB) * ctr[2];
    const uint32_t hi0 = static_cast<uint32_t>(p0 >> 32), lo0 = static_cast<uint32_t>(p0);
    const uint32_t hi1 = static_cast<uint32_t>(p1 >> 32), lo1 = static_cast<uint32_t>(p1);
    const uint32_t out0 = hi1 ^ ctr[1] ^ key[0];
    const uint32_t out2 = hi0 ^ ctr[3] ^ key[1];
    ctr[0] = out0;
    ctr[1] = lo1;
    ctr[2] = out2;
    ctr[3] = lo0;
}

inline Block generate(uint64_t key64, uint64_t c01, uint64_t c23) {
    uint32_t ctr[4] = {static_cast<uint32_t>(c01), static_cast<uint32_t>(c01 >> 32),
                       static_cast<uint32_t>(c23), static_cast<uint32_t>(c23 >> 32)};
    uint32_t key[2] = {static_cast<uint32_t>(key64), static_cast<uint32_t>(key64 >> 32)};
    for (int r = 0; r < 10; ++r) {
        round_once(ctr, key);
        key[0] += kWeylA;
        key[1] += kWeylB;
    }
    return Block{{ctr[0], ctr[1], ctr[2], ctr[3]}};
}

}  // namespace philox

// Stream tags keep independent uses of the same (seed, trial) apart.
enum class RngStream : uint64_t {
    Site = 1,
    Bond = 2,
    Generator = 3,
    Probe = 4,
};

// Uniform double in [0,1) from (seed, stream, trial, index); 53 random bits.
inline double uniform01(uint64_t seed, RngStream stream, uint64_t trial, uint64_t index) {
    const uint64_t key = seed * 0x9E3779B97F4A7C15ull + static_cast<uint64_t>(stream);
    const philox::Block b = philox::generate(key, trial, index);
    const uint64_t bits = (static_cast<uint64_t>(b.v[0]) << 32) | b.v[1];
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

inline uint64_t uniform_bits(uint64_t seed, RngStream stream, uint64_t trial, uint64_t index) {
    const uint64_t key = seed * 0x9E3779B97F4A7C15ull + static_cast<uint64_t>(stream);
    const philox::Block b = philox::generate(key, trial, index);
    return (static_cast<uint64_t>(b.v[0]) << 32) | b.v[1];
}

}  // namespace packperc
