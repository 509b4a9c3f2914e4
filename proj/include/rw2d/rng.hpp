#pragma once
#include <array>
#include <cstdint>

namespace rw2d {

// SplitMix64, used only to expand seeds into engine state.
struct SplitMix64 {
    std::uint64_t state;
    explicit SplitMix64(std::uint64_t seed) : state(seed) {}
    std::uint64_t next() {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }
};

/// xoshiro256++ engine. All randomness in the project flows through this
/// type; streams are derived from (master seed, stream index) so that
/// parallel trials are reproducible independent of scheduling.
class Rng {
public:
    Rng() : Rng(0, 0) {}
    Rng(std::uint64_t master_seed, std::uint64_t stream_index) {
        // Distinct streams: hash the pair through SplitMix64.
        SplitMix64 sm(master_seed ^ (0xA0761D6478BD642FULL * (stream_index + 1)));
        for (auto& w : s_) w = sm.next();
        if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[3] = 0x9E3779B97F4A7C15ULL;
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

    /// Uniform direction in {0,1,2,3} (top bits of the stream).
    unsigned step_direction() { return static_cast<unsigned>(next() >> 62); }

    /// Uniform double in [0,1).
    double u01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n) {
        // Rejection-free threshold method (Lemire).
        unsigned __int128 m = static_cast<unsigned __int128>(next()) * n;
        std::uint64_t lo = static_cast<std::uint64_t>(m);
        if (lo < n) {
            std::uint64_t t = -n % n;
            while (lo < t) {
                m = static_cast<unsigned __int128>(next()) * n;
                lo = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

    bool coin() { return (next() >> 63) != 0; }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }
    std::array<std::uint64_t, 4> s_;
};

} // namespace rw2d
