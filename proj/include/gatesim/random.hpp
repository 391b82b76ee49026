// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstdint>

#include "gatesim/time.hpp"

namespace gatesim {

/// Seeded deterministic random stream (splitmix64 core). The generator uses
/// only integer ops and exact IEEE double arithmetic, so a given seed yields
/// the same sample sequence on every platform.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : state_(seed) {}

    /// Independent substream: used to give each traffic source its own
    /// stream derived from (scenario seed, source index).
    RngStream(std::uint64_t seed, std::uint64_t substream)
        : state_(mix(seed ^ mix(0x9E3779B97F4A7C15ULL + substream))) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1), 53-bit resolution.
    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [lo, hi] inclusive.
    std::int64_t next_in(std::int64_t lo, std::int64_t hi) {
        const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
        return lo + static_cast<std::int64_t>(next_u64() % span);
    }

    /// Standard-normal deviate as the sum of 12 uniforms minus 6. Mean and
    /// standard deviation are exact; tails truncate at +-6 sigma, far beyond
    /// anything a jittered send period exercises. Uses no libm, which keeps
    /// the sequence bit-identical across platforms.
    double next_normal() {
        double acc = 0.0;
        for (int i = 0; i < 12; ++i) acc += next_unit();
        return acc - 6.0;
    }

private:
    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    std::uint64_t state_;
};

/// Gaussian-distributed duration, rounded to whole nanoseconds and clamped to
/// >= 1 us so a sampled inter-send period can never be zero or negative.
/// stddev = 0 degenerates to exactly `mean` (before the clamp).
inline Duration gaussian(RngStream& stream, Duration mean, Duration stddev) {
    constexpr std::int64_t kFloorNs = 1000;
    if (stddev.ns == 0) {
        return Duration{mean.ns < kFloorNs ? kFloorNs : mean.ns};
    }
    const double sample = static_cast<double>(mean.ns) +
                          stream.next_normal() * static_cast<double>(stddev.ns);
    std::int64_t ns = std::llround(sample);
    if (ns < kFloorNs) ns = kFloorNs;
    return Duration{ns};
}

} // namespace gatesim
