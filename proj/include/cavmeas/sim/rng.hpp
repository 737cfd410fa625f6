#pragma once

#include <cstdint>
#include <limits>

namespace cavmeas::sim {

inline constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Identifies one independent random stream: the run seed, a stream id
// (which batch) and a counter (which trajectory within the batch).
struct StreamKey {
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;
    std::uint64_t counter = 0;
};

// xoshiro256** whose state is derived by hashing a StreamKey, so that
// every trajectory owns a stream that depends only on (seed, stream,
// counter) and never on evaluation order.
class Rng {
public:
    using result_type = std::uint64_t;

    explicit Rng(StreamKey key) {
        std::uint64_t h = splitmix64(key.seed);
        h = splitmix64(h ^ key.stream);
        h = splitmix64(h ^ key.counter);
        for (auto& w : s_) {
            h = splitmix64(h);
            w = h;
        }
    }

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()() {
        const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return uniform() < p; }

private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    std::uint64_t s_[4];
};

}  // namespace cavmeas::sim
