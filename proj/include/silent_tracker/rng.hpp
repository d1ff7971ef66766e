// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstdint>

namespace silent_tracker {

/// Hand-rolled splitmix64 stream so that trial randomness is reproducible
/// across platforms and standard library versions. Each trial gets its own
/// stream derived from (seed, trial_index) only.
class TrialRng {
  public:
    TrialRng(std::uint64_t seed, std::uint64_t trial_index)
        : state_(mix(mix(seed + 0x9E3779B97F4A7C15ULL) ^
                     mix(trial_index + 0xBF58476D1CE4E5B9ULL))) {}

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ULL;
        return mix(state_);
    }

    /// Uniform integer in [0, bound). bound must be positive.
    std::uint64_t uniform_u64(std::uint64_t bound) { return next_u64() % bound; }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform01() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Standard normal via Box-Muller; the second value of each pair is cached.
    double normal() {
        if (have_cached_) {
            have_cached_ = false;
            return cached_;
        }
        double u1 = uniform01();
        double u2 = uniform01();
        while (u1 <= 0.0)
            u1 = uniform01();
        double r = std::sqrt(-2.0 * std::log(u1));
        double theta = 2.0 * M_PI * u2;
        cached_ = r * std::sin(theta);
        have_cached_ = true;
        return r * std::cos(theta);
    }

  private:
    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    std::uint64_t state_;
    bool have_cached_ = false;
    double cached_ = 0.0;
};

} // namespace silent_tracker
