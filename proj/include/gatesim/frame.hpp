// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "gatesim/mac.hpp"
#include "gatesim/time.hpp"

namespace gatesim {

/// Ethertype carried by stream-reservation signaling frames. Frames with this
/// ethertype never hit the flow tables; the relay punts them to the controller.
constexpr std::uint16_t kSrpEthertype = 0x22EA;

enum class SrpKind : std::uint8_t { TalkerAdvertise, ListenerReady };

/// Stream reservation signaling content, carried inside an SRP-ethertype frame.
struct SrpMessage {
    SrpKind kind{SrpKind::TalkerAdvertise};
    std::string stream_id;
    MacAddress dst_mac;           // the stream's (multicast) destination
    std::uint8_t pcp{0};
    std::uint32_t max_frame_size{0};
    Duration interval{};
};

/// An 802.1Q-tagged frame. wire_size covers all headers including the VLAN
/// tag; serialization math adds no preamble or interframe gap on top of it.
struct Frame {
    MacAddress src_mac;
    MacAddress dst_mac;
    std::uint16_t ethertype{0x0800};
    std::uint8_t pcp{0};          // 802.1Q priority, 0..7
    std::uint16_t vid{0};         // 12-bit VLAN id
    std::uint32_t wire_size{64};  // bytes, 64..1522
    std::string flow_id;
    std::uint64_t seq{0};         // per-flow counter
    SimTime created_at{};
    std::optional<SrpMessage> srp;

    static constexpr std::uint32_t kMinWireSize = 64;
    static constexpr std::uint32_t kMaxWireSize = 1522;

    void validate() const {
        if (wire_size < kMinWireSize || wire_size > kMaxWireSize) {
            throw ModelFault("frame wire_size " + std::to_string(wire_size) + " out of 64..1522");
        }
        if (pcp > 7) throw ModelFault("frame pcp " + std::to_string(pcp) + " out of 0..7");
        if (vid > 0x0FFF) throw ModelFault("frame vid out of 12-bit range");
    }
};

} // namespace gatesim
