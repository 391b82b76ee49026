// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "gatesim/engine.hpp"
#include "gatesim/flow_table.hpp"
#include "gatesim/frame.hpp"

namespace gatesim {

// ---------------------------------------------------------------- OpenFlow

enum class OpenFlowKind : std::uint8_t {
    Hello,
    FeaturesRequest,
    FeaturesReply,
    PacketIn,
    PacketOut,
    FlowMod,
};

struct OpenFlowMsg {
    OpenFlowKind kind{OpenFlowKind::Hello};
    std::vector<std::string> ports;  // FeaturesReply
    Frame frame;                     // PacketIn / PacketOut (complete frame, no buffer ids)
    std::string in_port;             // PacketIn
    std::string out_port;            // PacketOut
    FlowEntry entry;                 // FlowMod

    static OpenFlowMsg hello() { return {OpenFlowKind::Hello, {}, {}, {}, {}, {}}; }
    static OpenFlowMsg features_request() {
        return {OpenFlowKind::FeaturesRequest, {}, {}, {}, {}, {}};
    }
    static OpenFlowMsg features_reply(std::vector<std::string> ports) {
        OpenFlowMsg m;
        m.kind = OpenFlowKind::FeaturesReply;
        m.ports = std::move(ports);
        return m;
    }
    static OpenFlowMsg packet_in(Frame f, std::string in_port) {
        OpenFlowMsg m;
        m.kind = OpenFlowKind::PacketIn;
        m.frame = std::move(f);
        m.in_port = std::move(in_port);
        return m;
    }
    static OpenFlowMsg packet_out(Frame f, std::string out_port) {
        OpenFlowMsg m;
        m.kind = OpenFlowKind::PacketOut;
        m.frame = std::move(f);
        m.out_port = std::move(out_port);
        return m;
    }
    static OpenFlowMsg flow_mod(FlowEntry e) {
        OpenFlowMsg m;
        m.kind = OpenFlowKind::FlowMod;
        m.entry = std::move(e);
        return m;
    }
};

inline std::string to_string(OpenFlowKind k) {
    switch (k) {
        case OpenFlowKind::Hello: return "of-hello";
        case OpenFlowKind::FeaturesRequest: return "features-request";
        case OpenFlowKind::FeaturesReply: return "features-reply";
        case OpenFlowKind::PacketIn: return "packet-in";
        case OpenFlowKind::PacketOut: return "packet-out";
        case OpenFlowKind::FlowMod: return "flow-mod";
    }
    return "of-unknown";
}

// ----------------------------------------------------------------- NetConf

enum class NetconfOpKind : std::uint8_t { GetConfig, EditConfig };

struct NetconfOp {
    NetconfOpKind kind{NetconfOpKind::GetConfig};
    std::string datastore{"running"};
    // EditConfig payload: port name -> GCL textual form. A subset of ports
    // edits only those ports.
    std::map<std::string, std::string> gcl_edits;
};

enum class NetconfKind : std::uint8_t { Hello, Rpc, RpcReply };

struct NetconfMsg {
    NetconfKind kind{NetconfKind::Hello};
    std::uint64_t id{0};     // Rpc / RpcReply (reply id matches request id)
    NetconfOp op;            // Rpc
    bool ok{true};           // RpcReply
    std::string error;       // RpcReply, when !ok
    std::string data;        // RpcReply to GetConfig: datastore serialization

    static NetconfMsg hello() { return {}; }
    static NetconfMsg rpc(std::uint64_t id, NetconfOp op) {
        NetconfMsg m;
        m.kind = NetconfKind::Rpc;
        m.id = id;
        m.op = std::move(op);
        return m;
    }
    static NetconfMsg reply_ok(std::uint64_t id, std::string data = {}) {
        NetconfMsg m;
        m.kind = NetconfKind::RpcReply;
        m.id = id;
        m.ok = true;
        m.data = std::move(data);
        return m;
    }
    static NetconfMsg reply_error(std::uint64_t id, std::string reason) {
        NetconfMsg m;
        m.kind = NetconfKind::RpcReply;
        m.id = id;
        m.ok = false;
        m.error = std::move(reason);
        return m;
    }
};

inline std::string to_string(NetconfKind k) {
    switch (k) {
        case NetconfKind::Hello: return "nc-hello";
        case NetconfKind::Rpc: return "rpc";
        case NetconfKind::RpcReply: return "rpc-reply";
    }
    return "nc-unknown";
}

inline std::string to_string(NetconfOpKind k) {
    return k == NetconfOpKind::GetConfig ? "get-config" : "edit-config";
}

using ControlMsg = std::variant<OpenFlowMsg, NetconfMsg>;

// ----------------------------------------------------------------- Channel

/// Reliable, ordered, bidirectional control channel between the controller
/// and one switch. Delivery latency is fixed per channel (default 0), so the
/// engine's FIFO ordering of simultaneous events preserves send order.
class ControlChannel {
public:
    using Handler = std::function<void(const ControlMsg&)>;

    ControlChannel(SimEngine& engine, std::string switch_id, Duration latency = Duration{0})
        : engine_(&engine), switch_id_(std::move(switch_id)), latency_(latency) {}

    const std::string& switch_id() const { return switch_id_; }
    Duration latency() const { return latency_; }

    void connect_switch(Handler h) { to_switch_ = std::move(h); }
    void connect_controller(Handler h) { to_controller_ = std::move(h); }

    void send_to_switch(ControlMsg msg) { deliver(true, std::move(msg)); }
    void send_to_controller(ControlMsg msg) { deliver(false, std::move(msg)); }

    std::uint64_t in_flight() const { return in_flight_; }

private:
    void deliver(bool toward_switch, ControlMsg msg) {
        ++in_flight_;
        engine_->schedule_after(latency_, [this, toward_switch, m = std::move(msg)] {
            --in_flight_;
            Handler& h = toward_switch ? to_switch_ : to_controller_;
            if (!h) throw ModelFault("control channel to " + switch_id_ + " not connected");
            h(m);
        });
    }

    SimEngine* engine_;
    std::string switch_id_;
    Duration latency_;
    Handler to_switch_;
    Handler to_controller_;
    std::uint64_t in_flight_{0};
};

// ---------------------------------------------------------------- Timeline

/// Scripted control-plane actions: runtime GCL edits and the switch-side
/// fault arming that makes the next edit-config fail.
struct TimelineAction {
    enum class Kind : std::uint8_t { EditGcl, InjectEditFailure };
    SimTime at{};
    Kind kind{Kind::EditGcl};
    std::string switch_id;
    std::vector<std::string> ports;  // EditGcl; empty = every port of the switch
    std::string gcl_text;            // EditGcl
};

struct ControlTimeline {
    std::vector<TimelineAction> actions;

    void check_valid() const {
        for (std::size_t i = 1; i < actions.size(); ++i) {
            if (actions[i].at < actions[i - 1].at) {
                throw ConfigError("timeline actions not in non-decreasing time order");
            }
        }
    }
};

} // namespace gatesim
