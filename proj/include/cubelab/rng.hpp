#pragma once

#include <cstdint>
#include <random>

namespace cubelab {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Independent, reproducible stream for (seed, stream_id). Parallel callers
// hand each shard its own stream_id; results depend only on (seed, id).
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t stream_id = 0) {
        std::uint64_t s0 = splitmix64(seed ^ (0xa02bdbf7bb3c0a7ULL * (stream_id + 1)));
        std::uint64_t s1 = splitmix64(s0);
        std::seed_seq seq{static_cast<unsigned>(s0), static_cast<unsigned>(s0 >> 32),
                          static_cast<unsigned>(s1), static_cast<unsigned>(s1 >> 32)};
        eng_.seed(seq);
    }

    std::uint64_t next_u64() { return eng_(); }

    // Uniform in [0, n).
    std::uint64_t next_below(std::uint64_t n) {
        std::uniform_int_distribution<std::uint64_t> d(0, n - 1);
        return d(eng_);
    }

    std::mt19937_64& engine() { return eng_; }

private:
    std::mt19937_64 eng_;
};

}  // namespace cubelab
