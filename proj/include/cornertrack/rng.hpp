#pragma once

#include <cstdint>

namespace cornertrack {

// 64-bit linear congruential generator, constants from Knuth's MMIX:
//   state <- state * 6364136223846793005 + 1442695040888963407
// The high 53 bits feed next01(). Deliberately not std::mt19937 +
// uniform_real_distribution: the distribution's rounding is
// implementation-defined, and sequences/weights must be reproducible
// bit-for-bit across toolchains.
class Lcg64 {
public:
    explicit Lcg64(std::uint64_t seed) : state_(seed) {
        // A couple of warm-up steps so small seeds decorrelate quickly.
        next_u64();
        next_u64();
    }

    std::uint64_t next_u64() {
        state_ = state_ * 6364136223846793005ULL + 1442695040888963407ULL;
        return state_;
    }

    // Uniform double in [0, 1).
    double next01() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Uniform double in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * next01(); }

    // Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n) { return next_u64() % n; }

private:
    std::uint64_t state_;
};

}  // namespace cornertrack
