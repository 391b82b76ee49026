// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gatesim/frame.hpp"
#include "gatesim/mac.hpp"

namespace gatesim {

/// Match fields of a flow entry; an absent field is a wildcard.
struct FlowMatch {
    std::optional<std::string> in_port;
    std::optional<MacAddress> dst_mac;
    std::optional<std::uint16_t> ethertype;
    std::optional<std::uint8_t> pcp;

    bool matches(const Frame& frame, const std::string& ingress) const {
        if (in_port && *in_port != ingress) return false;
        if (dst_mac && *dst_mac != frame.dst_mac) return false;
        if (ethertype && *ethertype != frame.ethertype) return false;
        if (pcp && *pcp != frame.pcp) return false;
        return true;
    }

    bool operator==(const FlowMatch&) const = default;
};

enum class FlowActionKind : std::uint8_t { Output, ToController, Drop };

struct FlowAction {
    FlowActionKind kind{FlowActionKind::Drop};
    std::string port;  // Output only

    static FlowAction output(std::string p) { return {FlowActionKind::Output, std::move(p)}; }
    static FlowAction to_controller() { return {FlowActionKind::ToController, {}}; }
    static FlowAction drop() { return {FlowActionKind::Drop, {}}; }

    bool operator==(const FlowAction&) const = default;
};

struct FlowEntry {
    int priority{0};
    FlowMatch match;
    std::vector<FlowAction> actions;
    std::uint64_t entry_id{0};
    std::uint64_t packet_count{0};
    std::uint64_t byte_count{0};
};

/// Prioritized match/action table. Lookup is deterministic: highest priority
/// wins, ties broken by lowest entry_id. Inserting an entry whose match and
/// priority equal an existing one replaces it (entry_id kept, counters reset).
class FlowTable {
public:
    /// Returns the entry_id the entry ended up with.
    std::uint64_t insert(FlowEntry entry) {
        for (auto& e : entries_) {
            if (e.priority == entry.priority && e.match == entry.match) {
                entry.entry_id = e.entry_id;
                entry.packet_count = 0;
                entry.byte_count = 0;
                e = std::move(entry);
                return e.entry_id;
            }
        }
        entry.entry_id = next_id_++;
        entry.packet_count = 0;
        entry.byte_count = 0;
        entries_.push_back(std::move(entry));
        return entries_.back().entry_id;
    }

    /// Best match for the frame, or nullptr on miss. Counters untouched;
    /// the caller accounts the hit once it commits to the entry's actions.
    FlowEntry* lookup(const Frame& frame, const std::string& in_port) {
        FlowEntry* best = nullptr;
        for (auto& e : entries_) {
            if (!e.match.matches(frame, in_port)) continue;
            if (!best || e.priority > best->priority ||
                (e.priority == best->priority && e.entry_id < best->entry_id)) {
                best = &e;
            }
        }
        return best;
    }

    const std::vector<FlowEntry>& entries() const { return entries_; }
    std::size_t size() const { return entries_.size(); }
    void clear() {
        entries_.clear();
        next_id_ = 0;
    }

private:
    std::vector<FlowEntry> entries_;
    std::uint64_t next_id_{0};
};

} // namespace gatesim
