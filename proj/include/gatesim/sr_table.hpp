// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>

#include "gatesim/mac.hpp"
#include "gatesim/time.hpp"

namespace gatesim {

/// One registered stream as seen by a switch: the port toward the talker and
/// the set of ports toward listeners.
struct SrTableEntry {
    std::string stream_id;
    MacAddress dst_mac;
    std::uint8_t pcp{0};
    std::string talker_port;
    std::set<std::string> listener_ports;
};

class SrTable {
public:
    /// Create or refresh the talker side of a stream.
    void register_talker(const std::string& stream_id, MacAddress dst, std::uint8_t pcp,
                         const std::string& talker_port) {
        auto& e = entries_[stream_id];
        e.stream_id = stream_id;
        e.dst_mac = dst;
        e.pcp = pcp;
        e.talker_port = talker_port;
        e.listener_ports.erase(talker_port);
    }

    /// Add a listener port; the talker port never doubles as a listener port.
    void register_listener(const std::string& stream_id, const std::string& port) {
        auto it = entries_.find(stream_id);
        if (it == entries_.end()) return;
        if (it->second.talker_port == port) {
            throw ModelFault("SR stream " + stream_id + ": listener on talker port " + port);
        }
        it->second.listener_ports.insert(port);
    }

    /// Restore a full entry (launch-config import).
    void load(SrTableEntry e) {
        if (e.listener_ports.count(e.talker_port)) {
            throw ModelFault("SR stream " + e.stream_id + ": talker port listed as listener");
        }
        entries_[e.stream_id] = std::move(e);
    }

    const SrTableEntry* find(const std::string& stream_id) const {
        auto it = entries_.find(stream_id);
        return it == entries_.end() ? nullptr : &it->second;
    }

    const std::map<std::string, SrTableEntry>& entries() const { return entries_; }
    std::size_t size() const { return entries_.size(); }
    void clear() { entries_.clear(); }

private:
    std::map<std::string, SrTableEntry> entries_;
};

} // namespace gatesim
