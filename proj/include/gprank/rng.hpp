#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "errors.hpp"

namespace gprank {

// One splitmix64 step (Vigna). Advances the state and returns the output.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// xoshiro256++ (Blackman/Vigna), seeded through a splitmix64 chain.
// Draws use integer operations and an explicit 53-bit double conversion,
// so a given seed yields the same sequence on every platform.
class Xoshiro256pp {
public:
    explicit Xoshiro256pp(std::uint64_t seed) {
        for (auto& word : s_) word = splitmix64(seed);
    }

    std::uint64_t next() {
        const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // Uniform double in [0,1) from the top 53 bits.
    double next_double() {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }

    bool bernoulli(double p) { return next_double() < p; }

    // Unbiased integer in [0,bound) via Lemire's multiply-and-reject method.
    std::uint64_t next_below(std::uint64_t bound) {
        if (bound == 0) throw config_error("next_below: bound must be positive");
        unsigned __int128 m = static_cast<unsigned __int128>(next()) * bound;
        auto low = static_cast<std::uint64_t>(m);
        if (low < bound) {
            const std::uint64_t threshold = (0 - bound) % bound;
            while (low < threshold) {
                m = static_cast<unsigned __int128>(next()) * bound;
                low = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::array<std::uint64_t, 4> s_{};
};

struct RngConfig {
    std::uint64_t master_seed = 0;
};

// Independent stream for one trial. The master seed is hashed before the
// trial offset is added, so nearby (seed, trial) pairs such as (s, t+1) and
// (s+1, t) do not share a stream.
inline Xoshiro256pp trial_stream(const RngConfig& cfg, std::uint64_t trial) {
    std::uint64_t hash_state = cfg.master_seed;
    std::uint64_t state = splitmix64(hash_state) + trial;
    return Xoshiro256pp(splitmix64(state));
}

// First `count` entries of a partial Fisher-Yates shuffle of `pool`.
// Draw order is preserved; callers sort if they need a canonical order.
template <typename T>
std::vector<T> sample_without_replacement(std::vector<T> pool, std::size_t count,
                                          Xoshiro256pp& rng) {
    if (count > pool.size())
        throw config_error("sample_without_replacement: count exceeds pool size");
    for (std::size_t i = 0; i < count; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(rng.next_below(pool.size() - i));
        std::swap(pool[i], pool[j]);
    }
    pool.resize(count);
    return pool;
}

} // namespace gprank
