// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <cstdio>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "gatesim/time.hpp"

namespace gatesim {

/// Gate masks of the three schedule phases used throughout configs: green
/// opens the high priorities 6-7, yellow opens 0-5, red closes everything.
constexpr std::uint8_t kGreenMask = 0xC0;
constexpr std::uint8_t kYellowMask = 0x3F;
constexpr std::uint8_t kRedMask = 0x00;

/// One schedule slot: for `duration`, gate bit p open means priority p may
/// start transmitting.
struct GateControlEntry {
    Duration duration{};
    std::uint8_t gates{0};

    friend bool operator==(const GateControlEntry&, const GateControlEntry&) = default;
};

/// The cyclic 802.1Qbv schedule of one egress port. Entry boundaries are
/// half-open [start, end): at the exact instant a gate closes it is closed.
class GateControlList {
public:
    GateControlList() = default;

    GateControlList(std::vector<GateControlEntry> entries, Duration cycle, SimTime base_time = SimTime{0})
        : entries_(std::move(entries)), cycle_(cycle), base_time_(base_time) {
        check_valid(entries_, cycle_);
    }

    /// Always-open schedule: a single full-cycle entry with every gate open.
    static GateControlList all_open(Duration cycle, SimTime base_time = SimTime{0}) {
        return GateControlList({GateControlEntry{cycle, 0xFF}}, cycle, base_time);
    }

    static void check_valid(const std::vector<GateControlEntry>& entries, Duration cycle) {
        if (entries.empty()) throw ConfigError("gate control list has no entries");
        Duration sum{0};
        for (const auto& e : entries) {
            if (e.duration <= Duration{0}) throw ConfigError("gate control entry duration must be > 0");
            sum += e.duration;
        }
        if (sum != cycle) {
            throw ConfigError("gate control entries sum to " + std::to_string(sum.ns) +
                              " ns but cycle is " + std::to_string(cycle.ns) + " ns");
        }
    }

    const std::vector<GateControlEntry>& entries() const { return entries_; }
    Duration cycle() const { return cycle_; }
    SimTime base_time() const { return base_time_; }
    void rebase(SimTime base) { base_time_ = base; }

    bool operator==(const GateControlList& o) const {
        return entries_ == o.entries_ && cycle_ == o.cycle_;
    }

    /// Gate mask in force at instant t (t >= base_time).
    std::uint8_t mask_at(SimTime t) const {
        const auto [idx, into] = locate(t);
        (void)into;
        return entries_[idx].gates;
    }

    /// First cycle boundary at or after t.
    SimTime next_cycle_boundary(SimTime t) const {
        const std::int64_t off = offset_of(t);
        if (off == 0) return t;
        return t + Duration{cycle_.ns - off};
    }

    /// Earliest instant >= from where gate `pcp` is open, or nullopt if the
    /// bit is never set anywhere in the cycle.
    std::optional<SimTime> next_open(std::uint8_t pcp, SimTime from) const {
        const std::uint8_t bit = static_cast<std::uint8_t>(1u << pcp);
        auto [idx, into] = locate(from);
        SimTime t = from;
        for (std::size_t scanned = 0; scanned <= entries_.size(); ++scanned) {
            if (entries_[idx].gates & bit) return t;
            t += Duration{entries_[idx].duration.ns - into};
            into = 0;
            idx = (idx + 1) % entries_.size();
        }
        return std::nullopt;
    }

    /// How long gate `pcp` stays continuously open starting at t (0 if it is
    /// closed at t). An all-cycle-open gate reports the full cycle, which the
    /// shaper treats as unbounded.
    Duration open_run(std::uint8_t pcp, SimTime t) const {
        const std::uint8_t bit = static_cast<std::uint8_t>(1u << pcp);
        auto [idx, into] = locate(t);
        if (!(entries_[idx].gates & bit)) return Duration{0};
        Duration run{entries_[idx].duration.ns - into};
        std::size_t next = (idx + 1) % entries_.size();
        while (next != idx && (entries_[next].gates & bit)) {
            run += entries_[next].duration;
            next = (next + 1) % entries_.size();
        }
        if (next == idx) return cycle_;  // wrapped all the way round: open forever
        return run;
    }

    /// Whether gate `pcp` is open for the whole cycle.
    bool always_open(std::uint8_t pcp) const {
        const std::uint8_t bit = static_cast<std::uint8_t>(1u << pcp);
        for (const auto& e : entries_) {
            if (!(e.gates & bit)) return false;
        }
        return true;
    }

private:
    std::int64_t offset_of(SimTime t) const {
        if (t < base_time_) throw ModelFault("gate lookup before schedule base time");
        return (t - base_time_).ns % cycle_.ns;
    }

    // (entry index, ns already elapsed inside that entry) for instant t.
    std::pair<std::size_t, std::int64_t> locate(SimTime t) const {
        std::int64_t off = offset_of(t);
        for (std::size_t i = 0; i < entries_.size(); ++i) {
            if (off < entries_[i].duration.ns) return {i, off};
            off -= entries_[i].duration.ns;
        }
        throw ModelFault("gate control list walk ran past cycle end");
    }

    std::vector<GateControlEntry> entries_;
    Duration cycle_{1};
    SimTime base_time_{};
};

// --- Textual form ----------------------------------------------------------
//
// Semicolon-separated `<phase>:<duration_us>` tokens, phases G (priorities
// 6-7 open), Y (0-5 open), R (all closed), plus an explicit-mask form
// `M<hex2>:<duration_us>` for anything else, e.g. `MFF:1000`. Durations are
// microseconds with up to three decimals, so any nanosecond value round-trips
// bit-exactly: `R:10;G:15;Y:860;R:115`.

inline std::string format_duration_us(Duration d) {
    const std::int64_t whole = d.ns / 1000;
    const std::int64_t frac = d.ns % 1000;
    char buf[40];
    if (frac == 0) {
        std::snprintf(buf, sizeof(buf), "%lld", static_cast<long long>(whole));
    } else {
        std::snprintf(buf, sizeof(buf), "%lld.%03lld", static_cast<long long>(whole),
                      static_cast<long long>(frac));
        std::string s{buf};
        while (s.back() == '0') s.pop_back();
        return s;
    }
    return buf;
}

inline Duration parse_duration_us(const std::string& text) {
    const std::size_t dot = text.find('.');
    const std::string whole_part = dot == std::string::npos ? text : text.substr(0, dot);
    std::string frac_part = dot == std::string::npos ? "" : text.substr(dot + 1);
    if (whole_part.empty() && frac_part.empty()) throw ConfigError("empty duration");
    if (frac_part.size() > 3) throw ConfigError("duration '" + text + "' finer than 1 ns");
    while (frac_part.size() < 3) frac_part.push_back('0');
    std::int64_t whole = 0, frac = 0;
    for (char c : whole_part) {
        if (c < '0' || c > '9') throw ConfigError("bad duration '" + text + "'");
        whole = whole * 10 + (c - '0');
        if (whole > 0x7FFFFFFFFFFLL) throw ConfigError("duration '" + text + "' too large");
    }
    for (char c : frac_part) {
        if (c < '0' || c > '9') throw ConfigError("bad duration '" + text + "'");
        frac = frac * 10 + (c - '0');
    }
    return Duration{whole * 1000 + frac};
}

inline std::string format_gcl(const GateControlList& gcl) {
    std::string out;
    for (const auto& e : gcl.entries()) {
        if (!out.empty()) out.push_back(';');
        if (e.gates == kGreenMask) out.push_back('G');
        else if (e.gates == kYellowMask) out.push_back('Y');
        else if (e.gates == kRedMask) out.push_back('R');
        else {
            char buf[4];
            std::snprintf(buf, sizeof(buf), "M%02X", e.gates);
            out += buf;
        }
        out.push_back(':');
        out += format_duration_us(e.duration);
    }
    return out;
}

/// Parse the token list. The cycle is the sum of the entry durations; callers
/// validating against a separately declared cycle compare afterwards.
inline GateControlList parse_gcl(const std::string& text, SimTime base_time = SimTime{0}) {
    std::vector<GateControlEntry> entries;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t end = text.find(';', pos);
        if (end == std::string::npos) end = text.size();
        const std::string token = text.substr(pos, end - pos);
        pos = end + 1;
        if (token.empty()) throw ConfigError("empty gate control token in '" + text + "'");
        const std::size_t colon = token.find(':');
        if (colon == std::string::npos) throw ConfigError("gate control token '" + token + "' has no ':'");
        const std::string phase = token.substr(0, colon);
        std::uint8_t mask = 0;
        if (phase == "G") mask = kGreenMask;
        else if (phase == "Y") mask = kYellowMask;
        else if (phase == "R") mask = kRedMask;
        else if (phase.size() == 3 && phase[0] == 'M') {
            unsigned v = 0;
            if (std::sscanf(phase.c_str() + 1, "%2x", &v) != 1) {
                throw ConfigError("bad gate mask token '" + phase + "'");
            }
            mask = static_cast<std::uint8_t>(v);
        } else {
            throw ConfigError("unknown gate phase '" + phase + "'");
        }
        entries.push_back(GateControlEntry{parse_duration_us(token.substr(colon + 1)), mask});
    }
    if (entries.empty()) throw ConfigError("gate control list '" + text + "' is empty");
    Duration cycle{0};
    for (const auto& e : entries) cycle += e.duration;
    return GateControlList{std::move(entries), cycle, base_time};
}

} // namespace gatesim
