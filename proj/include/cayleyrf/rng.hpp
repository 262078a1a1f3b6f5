#pragma once

#include <cstdint>

namespace cayleyrf {

// SplitMix64 (Steele, Lea, Flood). Used to expand seeds into generator state
// and to derive decorrelated per-trial seeds.
class SplitMix64 {
  public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

  private:
    std::uint64_t state_;
};

// xoshiro256** (Blackman, Vigna): 256-bit state, period 2^256 - 1.
// Seeding runs the seed through SplitMix64 as the authors recommend.
class Xoshiro256StarStar {
  public:
    explicit Xoshiro256StarStar(std::uint64_t seed) {
        SplitMix64 sm(seed);
        for (auto& w : s_) w = sm.next();
    }

    std::uint64_t next() {
        std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
        std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // Unbiased draw from [0, bound) by threshold rejection; bound >= 1.
    // Platform-stable: uses only 64-bit integer arithmetic.
    std::uint64_t bounded(std::uint64_t bound) {
        std::uint64_t threshold = (-bound) % bound;
        for (;;) {
            std::uint64_t x = next();
            if (x >= threshold) return x % bound;
        }
    }

    // Uniform integer in [lo, hi], both inclusive.
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
        return lo + static_cast<std::int64_t>(
                        bounded(static_cast<std::uint64_t>(hi - lo) + 1));
    }

  private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::uint64_t s_[4];
};

// Generator for one Monte Carlo trial. Each trial index yields an independent
// stream derived only from (base_seed, trial_index), so results do not depend
// on how trials are partitioned across workers.
inline Xoshiro256StarStar make_trial_rng(std::uint64_t base_seed,
                                         std::uint64_t trial_index) {
    return Xoshiro256StarStar(base_seed +
                              (trial_index + 1) * 0x9E3779B97F4A7C15ULL);
}

}  // namespace cayleyrf
