// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "gatesim/gcl.hpp"
#include "gatesim/link.hpp"
#include "gatesim/time.hpp"

namespace gatesim {

struct InfeasibleScheduleError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// The three phases of the protected-window schedule plus the cycle they
/// partition. t_red guards against the largest in-flight frame, t_green fits
/// the protected stream, t_yellow is the remainder.
struct PhaseSet {
    Duration t_red{};
    Duration t_green{};
    Duration t_yellow{};
    Duration cycle{};

    void check_valid() const {
        if (t_red + t_green + t_yellow != cycle) {
            throw ModelFault("phase set does not partition the cycle");
        }
    }

    /// Single-window schedule: green, then yellow, then the red guard.
    std::string to_gcl_text() const {
        return "G:" + format_duration_us(t_green) + ";Y:" + format_duration_us(t_yellow) +
               ";R:" + format_duration_us(t_red);
    }
};

namespace detail {
inline Duration round_nearest_5us(Duration d) {
    constexpr std::int64_t step = 5000;
    return Duration{(d.ns + step / 2) / step * step};
}
} // namespace detail

/// Exact phases: red = serialization of the largest frame plus the margin,
/// green = serialization of the protected stream's frame plus the margin,
/// yellow = the rest of the cycle.
inline PhaseSet gcl_calc_exact(std::uint32_t max_frame_bytes, std::uint32_t hp_frame_bytes,
                               std::uint64_t bitrate_bps, Duration cycle, Duration margin) {
    PhaseSet p;
    p.cycle = cycle;
    p.t_red = serialization_time(max_frame_bytes, bitrate_bps) + margin;
    p.t_green = serialization_time(hp_frame_bytes, bitrate_bps) + margin;
    p.t_yellow = cycle - p.t_red - p.t_green;
    if (p.t_yellow.ns <= 0) {
        throw InfeasibleScheduleError("cycle " + format_duration_us(cycle) +
                                      " us leaves no yellow phase");
    }
    p.check_valid();
    return p;
}

/// Published-figure variant: serialization terms are rounded to the nearest
/// 5 us before the margin is added; yellow comes from the rounded values.
inline PhaseSet gcl_calc_paper_rounded(std::uint32_t max_frame_bytes,
                                       std::uint32_t hp_frame_bytes, std::uint64_t bitrate_bps,
                                       Duration cycle, Duration margin) {
    PhaseSet p;
    p.cycle = cycle;
    p.t_red = detail::round_nearest_5us(serialization_time(max_frame_bytes, bitrate_bps)) + margin;
    p.t_green = detail::round_nearest_5us(serialization_time(hp_frame_bytes, bitrate_bps)) + margin;
    p.t_yellow = cycle - p.t_red - p.t_green;
    if (p.t_yellow.ns <= 0) {
        throw InfeasibleScheduleError("cycle " + format_duration_us(cycle) +
                                      " us leaves no yellow phase");
    }
    p.check_valid();
    return p;
}

} // namespace gatesim
