// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <compare>
#include <stdexcept>
#include <string>

namespace gatesim {

/// Relative time span in integer nanoseconds. All schedule arithmetic in the
/// simulator is exact integer math; there is no floating-point time anywhere.
struct Duration {
    std::int64_t ns{0};

    constexpr Duration() = default;
    constexpr explicit Duration(std::int64_t nanos) : ns(nanos) {}

    friend constexpr auto operator<=>(Duration, Duration) = default;
    friend constexpr Duration operator+(Duration a, Duration b) { return Duration{a.ns + b.ns}; }
    friend constexpr Duration operator-(Duration a, Duration b) { return Duration{a.ns - b.ns}; }
    friend constexpr Duration operator*(Duration a, std::int64_t k) { return Duration{a.ns * k}; }
    friend constexpr Duration operator*(std::int64_t k, Duration a) { return Duration{a.ns * k}; }
    constexpr Duration& operator+=(Duration o) { ns += o.ns; return *this; }
    constexpr Duration& operator-=(Duration o) { ns -= o.ns; return *this; }
};

/// Absolute virtual time: nanoseconds since simulation start. Non-negative.
struct SimTime {
    std::int64_t ns{0};

    constexpr SimTime() = default;
    constexpr explicit SimTime(std::int64_t nanos) : ns(nanos) {}

    static constexpr SimTime max() { return SimTime{INT64_MAX}; }

    friend constexpr auto operator<=>(SimTime, SimTime) = default;
    friend constexpr SimTime operator+(SimTime t, Duration d) { return SimTime{t.ns + d.ns}; }
    friend constexpr SimTime operator-(SimTime t, Duration d) { return SimTime{t.ns - d.ns}; }
    friend constexpr Duration operator-(SimTime a, SimTime b) { return Duration{a.ns - b.ns}; }
    constexpr SimTime& operator+=(Duration d) { ns += d.ns; return *this; }
};

namespace literals {
constexpr Duration operator""_ns(unsigned long long v) { return Duration{static_cast<std::int64_t>(v)}; }
constexpr Duration operator""_us(unsigned long long v) { return Duration{static_cast<std::int64_t>(v) * 1000}; }
constexpr Duration operator""_ms(unsigned long long v) { return Duration{static_cast<std::int64_t>(v) * 1000000}; }
constexpr Duration operator""_s(unsigned long long v) { return Duration{static_cast<std::int64_t>(v) * 1000000000}; }
} // namespace literals

constexpr Duration nanoseconds(std::int64_t v) { return Duration{v}; }
constexpr Duration microseconds(std::int64_t v) { return Duration{v * 1000}; }
constexpr Duration milliseconds(std::int64_t v) { return Duration{v * 1000000}; }
constexpr Duration seconds(std::int64_t v) { return Duration{v * 1000000000}; }

/// Raised when a component violates a model precondition (e.g. scheduling
/// into the past). Indicates a bug in the model, never a scenario input error.
class ModelFault : public std::logic_error {
public:
    explicit ModelFault(const std::string& what) : std::logic_error(what) {}
};

/// Raised on invalid configuration input: malformed files, inconsistent
/// schedules, references to unknown nodes or ports.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace gatesim
