#pragma once

#include <cmath>
#include <cstdint>

namespace openavg {

/// Deterministic random stream addressed by (master_seed, stream_index).
///
/// Streams with distinct indices are independent, and a given pair always
/// reproduces the same draw sequence, which is what makes parallel Monte
/// Carlo replications order-independent: replication r owns stream r and
/// nothing else.
///
/// The generator is xoshiro256++ with its state expanded from the seed pair
/// via SplitMix64. Single-owner: one stream must not be shared across
/// threads.
class RngStream {
public:
    RngStream() : RngStream(0, 0) {}

    RngStream(std::uint64_t master_seed, std::uint64_t stream_index)
        : master_seed_(master_seed), stream_index_(stream_index) {
        std::uint64_t x = master_seed ^ (0x9E3779B97F4A7C15ULL * (stream_index + 1));
        for (auto& word : state_) word = splitmix64(x);
        // xoshiro must not start from the all-zero state
        if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0) state_[0] = 1;
    }

    std::uint64_t master_seed() const noexcept { return master_seed_; }
    std::uint64_t stream_index() const noexcept { return stream_index_; }

    std::uint64_t next_u64() noexcept {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// Uniform double in [0, 1), 53-bit resolution.
    double uniform01() noexcept {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Uniform integer in [0, n), n >= 1. Unbiased (Lemire rejection).
    std::uint64_t uniform_int(std::uint64_t n) noexcept {
        unsigned __int128 m = static_cast<unsigned __int128>(next_u64()) * n;
        auto low = static_cast<std::uint64_t>(m);
        if (low < n) {
            const std::uint64_t threshold = (0ULL - n) % n;
            while (low < threshold) {
                m = static_cast<unsigned __int128>(next_u64()) * n;
                low = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

    /// Exponential with the given rate (mean 1/rate).
    double exponential(double rate) noexcept {
        // 1 - u lies in (0, 1], so the log argument never vanishes
        return -std::log1p(-uniform01()) / rate;
    }

    /// Standard normal via Box-Muller; the second sample of each pair is
    /// cached, so the spare is part of the stream state.
    double normal01() noexcept {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u1 = 1.0 - uniform01();  // (0, 1]
        const double u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = kTwoPi * u2;
        spare_ = r * std::sin(theta);
        has_spare_ = true;
        return r * std::cos(theta);
    }

private:
    static constexpr double kTwoPi = 6.283185307179586476925286766559;

    static std::uint64_t splitmix64(std::uint64_t& x) noexcept {
        x += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = x;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    static std::uint64_t rotl(std::uint64_t v, int k) noexcept {
        return (v << k) | (v >> (64 - k));
    }

    std::uint64_t master_seed_;
    std::uint64_t stream_index_;
    std::uint64_t state_[4];
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace openavg
