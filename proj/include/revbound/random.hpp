#pragma once

#include <cmath>
#include <cstdint>

namespace revbound {

// SplitMix64 finalizer; used to derive independent per-chunk streams.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// xoshiro256** generator with a counter-based constructor.
///
/// The stream for chunk `c` of a run seeded with `seed` depends only on
/// (seed, c), so chunked work produces identical draws whatever the number
/// of worker threads. Uniforms are built from the top 53 bits directly so
/// the values are bit-identical across standard libraries.
class Stream {
public:
    Stream(std::uint64_t seed, std::uint64_t chunk) noexcept {
        std::uint64_t z = mix64(seed) ^ mix64(chunk + 0x632be59bd9b4e019ULL);
        for (auto& w : s_) {
            z = mix64(z);
            w = z;
        }
    }

    std::uint64_t next() noexcept {
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

    /// Uniform on [0, 1).
    double uniform() noexcept {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }

    /// Exponential with the given rate, by inversion: -ln(1 - U) / rate.
    double exponential(double rate) noexcept {
        return -std::log1p(-uniform()) / rate;
    }

private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
        return (x << k) | (x >> (64 - k));
    }
    std::uint64_t s_[4]{};
};

}  // namespace revbound
