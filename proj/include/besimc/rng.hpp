#pragma once

#include <cstdint>

namespace besimc {

// SplitMix64 (Steele, Lea, Flood). Used to expand (seed, stream_id)
// pairs into well-mixed xoshiro state.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

private:
    std::uint64_t state_;
};

// xoshiro256++ 1.0 (Blackman, Vigna). UniformRandomBitGenerator over
// the full 64-bit range.
class Xoshiro256pp {
public:
    using result_type = std::uint64_t;

    Xoshiro256pp(std::uint64_t seed, std::uint64_t stream_id) {
        SplitMix64 sm(seed);
        for (auto& w : s_) w = sm.next();
        SplitMix64 st(stream_id ^ 0xda3e39cb94b95bdbull);
        for (auto& w : s_) w ^= st.next();
        bool all_zero = true;
        for (auto w : s_) all_zero = all_zero && w == 0;
        if (all_zero) s_[0] = 0x9e3779b97f4a7c15ull;
    }

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return ~result_type(0); }

    result_type operator()() {
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

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::uint64_t s_[4];
};

// Value-type key of a reproducible substream. Two streams with equal
// (seed, stream_id) produce identical engines; distinct stream_ids give
// statistically independent substreams of the same experiment seed.
struct RandomStream {
    std::uint64_t seed = 0;
    std::uint64_t stream_id = 0;

    Xoshiro256pp engine() const { return Xoshiro256pp(seed, stream_id); }
};

// Uniform draw strictly inside (0,1): 53-bit mantissa offset by half an
// ulp so neither endpoint is reachable. Safe to feed through Phi^{-1}.
inline double uniform01(Xoshiro256pp& eng) {
    return (static_cast<double>(eng() >> 11) + 0.5) * 0x1p-53;
}

// Uniform draw on [lo, hi).
inline double uniform_range(Xoshiro256pp& eng, double lo, double hi) {
    return lo + (hi - lo) * uniform01(eng);
}

} // namespace besimc
