// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "gatesim/control.hpp"
#include "gatesim/engine.hpp"
#include "gatesim/frame.hpp"

namespace gatesim {

/// One controller-side record of a control-plane message or local action.
/// Fields never contain commas, so the CSV stays a plain six-column file.
struct ControlLogRow {
    SimTime time{};
    std::string direction;  // send | recv | local
    std::string peer;
    std::string kind;
    std::string detail;
    std::string outcome;
};

class ControlLog {
public:
    void add(SimTime t, std::string direction, std::string peer, std::string kind,
             std::string detail, std::string outcome) {
        rows_.push_back({t, std::move(direction), std::move(peer), std::move(kind),
                         sanitize(std::move(detail)), sanitize(std::move(outcome))});
    }

    const std::vector<ControlLogRow>& rows() const { return rows_; }

    std::string to_csv() const {
        std::string out = "time_ns,direction,peer,kind,detail,outcome\n";
        for (const auto& r : rows_) {
            out += std::to_string(r.time.ns) + "," + r.direction + "," + r.peer + "," + r.kind +
                   "," + r.detail + "," + r.outcome + "\n";
        }
        return out;
    }

private:
    static std::string sanitize(std::string s) {
        for (auto& c : s) {
            if (c == ',' || c == '\n') c = ';';
        }
        return s;
    }

    std::vector<ControlLogRow> rows_;
};

/// The SDN controller: OpenFlow core, NetConf client, and two applications.
/// The SRP manager registers talkers/listeners and installs stream forwarding
/// rules; the GCL programmer plays back a scripted reconfiguration timeline.
class Controller {
public:
    explicit Controller(SimEngine& engine) : engine_(&engine) {}

    void add_channel(ControlChannel& ch) {
        const std::string id = ch.switch_id();
        if (channels_.count(id)) throw ConfigError("duplicate control channel to " + id);
        channels_.emplace(id, &ch);
        ch.connect_controller([this, id](const ControlMsg& m) { on_message(id, m); });
    }

    /// Hook the harness provides to realize InjectEditFailure switch-side.
    void set_failure_injector(std::function<void(const std::string&)> fn) {
        failure_injector_ = std::move(fn);
    }

    void set_timeline(ControlTimeline timeline) {
        timeline.check_valid();
        for (const auto& a : timeline.actions) {
            if (!channels_.count(a.switch_id)) {
                throw ConfigError("timeline targets unknown switch " + a.switch_id);
            }
        }
        timeline_ = std::move(timeline);
    }

    /// Schedule session setup (t = 0) and every timeline action.
    void start() {
        engine_->schedule(SimTime{0}, [this] { setup_sessions(); });
        for (const auto& action : timeline_.actions) {
            engine_->schedule(action.at, [this, action] { execute(action); });
        }
    }

    const ControlLog& log() const { return log_; }
    ControlLog& log() { return log_; }

    const std::vector<std::string>& switch_ports(const std::string& id) const {
        static const std::vector<std::string> empty;
        auto it = features_.find(id);
        return it == features_.end() ? empty : it->second;
    }

    /// Issue a get-config and hand the reply data to `sink` when it arrives.
    void request_config(const std::string& switch_id,
                        std::function<void(bool, std::string)> sink = {}) {
        NetconfOp op;
        op.kind = NetconfOpKind::GetConfig;
        const std::uint64_t id = next_rpc_id_++;
        pending_rpcs_[id] = {switch_id, "get-config", std::move(sink)};
        send_nc(switch_id, NetconfMsg::rpc(id, std::move(op)), "get-config", "");
    }

    // SRP view introspection (tests and reports).
    struct StreamView {
        MacAddress dst_mac;
        std::uint8_t pcp{0};
        std::map<std::string, std::string> adv_ingress;           // switch -> port toward talker
        std::map<std::string, std::set<std::string>> listeners;   // switch -> ports toward listeners
    };
    const std::map<std::string, StreamView>& streams() const { return streams_; }

private:
    struct PendingRpc {
        std::string switch_id;
        std::string what;
        std::function<void(bool, std::string)> sink;
    };

    ControlChannel& channel(const std::string& id) { return *channels_.at(id); }

    void setup_sessions() {
        for (auto& [id, ch] : channels_) {
            send_of(id, OpenFlowMsg::hello(), "");
            send_of(id, OpenFlowMsg::features_request(), "");
            send_nc(id, NetconfMsg::hello(), "nc-hello", "");
        }
    }

    void execute(const TimelineAction& action) {
        if (action.kind == TimelineAction::Kind::InjectEditFailure) {
            if (!failure_injector_) throw ModelFault("no failure injector wired");
            failure_injector_(action.switch_id);
            log_.add(engine_->now(), "local", action.switch_id, "inject-edit-failure", "", "armed");
            return;
        }
        std::vector<std::string> ports = action.ports;
        if (ports.empty()) {
            ports = switch_ports(action.switch_id);
            if (ports.empty()) {
                throw ModelFault("no features known for " + action.switch_id +
                                 "; cannot expand port wildcard");
            }
        }
        NetconfOp op;
        op.kind = NetconfOpKind::EditConfig;
        for (const auto& p : ports) op.gcl_edits[p] = action.gcl_text;
        const std::uint64_t id = next_rpc_id_++;
        pending_rpcs_[id] = {action.switch_id, "edit-config", {}};
        std::string detail = "ports=";
        for (std::size_t i = 0; i < ports.size(); ++i) detail += (i ? ";" : "") + ports[i];
        detail += " gcl=" + action.gcl_text;
        send_nc(action.switch_id, NetconfMsg::rpc(id, std::move(op)), "edit-config", detail);
    }

    void send_of(const std::string& id, OpenFlowMsg msg, std::string detail) {
        log_.add(engine_->now(), "send", id, to_string(msg.kind), std::move(detail), "sent");
        channel(id).send_to_switch(std::move(msg));
    }

    void send_nc(const std::string& id, NetconfMsg msg, std::string kind, std::string detail) {
        log_.add(engine_->now(), "send", id, std::move(kind), std::move(detail), "sent");
        channel(id).send_to_switch(std::move(msg));
    }

    void on_message(const std::string& id, const ControlMsg& msg) {
        if (const auto* nc = std::get_if<NetconfMsg>(&msg)) {
            on_netconf(id, *nc);
        } else {
            on_openflow(id, std::get<OpenFlowMsg>(msg));
        }
    }

    void on_netconf(const std::string& id, const NetconfMsg& msg) {
        if (msg.kind == NetconfKind::Hello) {
            nc_sessions_.insert(id);
            log_.add(engine_->now(), "recv", id, "nc-hello", "", "session-up");
            return;
        }
        if (msg.kind != NetconfKind::RpcReply) {
            throw ModelFault("controller got unexpected netconf kind from " + id);
        }
        auto it = pending_rpcs_.find(msg.id);
        const std::string what = it == pending_rpcs_.end() ? "unsolicited" : it->second.what;
        log_.add(engine_->now(), "recv", id, "rpc-reply", what + " id=" + std::to_string(msg.id),
                 msg.ok ? "ok" : "error: " + msg.error);
        if (it != pending_rpcs_.end()) {
            if (it->second.sink) it->second.sink(msg.ok, msg.data);
            pending_rpcs_.erase(it);
        }
    }

    void on_openflow(const std::string& id, const OpenFlowMsg& msg) {
        switch (msg.kind) {
            case OpenFlowKind::Hello:
                log_.add(engine_->now(), "recv", id, "of-hello", "", "ok");
                break;
            case OpenFlowKind::FeaturesReply: {
                features_[id] = msg.ports;
                std::string detail = "ports=";
                for (std::size_t i = 0; i < msg.ports.size(); ++i) {
                    detail += (i ? ";" : "") + msg.ports[i];
                }
                log_.add(engine_->now(), "recv", id, "features-reply", detail, "ok");
                break;
            }
            case OpenFlowKind::PacketIn:
                on_packet_in(id, msg);
                break;
            default:
                throw ModelFault("controller got unexpected OpenFlow " + to_string(msg.kind) +
                                 " from " + id);
        }
    }

    void on_packet_in(const std::string& id, const OpenFlowMsg& msg) {
        if (!msg.frame.srp) {
            log_.add(engine_->now(), "recv", id, "packet-in",
                     "data in_port=" + msg.in_port + " flow=" + msg.frame.flow_id, "absorbed");
            return;
        }
        const SrpMessage& srp = *msg.frame.srp;
        if (srp.kind == SrpKind::TalkerAdvertise) {
            on_talker_advertise(id, msg.in_port, msg.frame);
        } else {
            on_listener_ready(id, msg.in_port, msg.frame);
        }
    }

    void on_talker_advertise(const std::string& id, const std::string& in_port,
                             const Frame& frame) {
        const SrpMessage& srp = *frame.srp;
        auto& view = streams_[srp.stream_id];
        view.dst_mac = srp.dst_mac;
        view.pcp = srp.pcp;
        view.adv_ingress[id] = in_port;
        log_.add(engine_->now(), "recv", id, "packet-in",
                 "talker-advertise stream=" + srp.stream_id + " in_port=" + in_port, "registered");
        // Spread the advertise on every other port of this switch; the switch
        // mirrors the registration while executing the packet-out.
        for (const auto& p : switch_ports(id)) {
            if (p == in_port) continue;
            send_of(id, OpenFlowMsg::packet_out(frame, p),
                    "srp-advertise stream=" + srp.stream_id + " port=" + p);
        }
    }

    void on_listener_ready(const std::string& id, const std::string& in_port,
                           const Frame& frame) {
        const SrpMessage& srp = *frame.srp;
        auto it = streams_.find(srp.stream_id);
        if (it == streams_.end() || !it->second.adv_ingress.count(id)) {
            log_.add(engine_->now(), "recv", id, "packet-in",
                     "listener-ready stream=" + srp.stream_id + " in_port=" + in_port,
                     "unknown-stream");
            return;
        }
        StreamView& view = it->second;
        view.listeners[id].insert(in_port);
        log_.add(engine_->now(), "recv", id, "packet-in",
                 "listener-ready stream=" + srp.stream_id + " in_port=" + in_port, "registered");

        FlowEntry entry;
        entry.priority = kSrpFlowPriority;
        entry.match.dst_mac = view.dst_mac;
        for (const auto& p : view.listeners[id]) entry.actions.push_back(FlowAction::output(p));
        send_of(id, OpenFlowMsg::flow_mod(entry),
                "dst=" + view.dst_mac.to_string() + " outputs=" + join(view.listeners[id]));

        // Relay the listener-ready one hop toward the talker.
        const std::string& toward_talker = view.adv_ingress.at(id);
        send_of(id, OpenFlowMsg::packet_out(frame, toward_talker),
                "srp-ready stream=" + srp.stream_id + " port=" + toward_talker);
    }

    static std::string join(const std::set<std::string>& items) {
        std::string out;
        for (const auto& s : items) out += (out.empty() ? "" : ";") + s;
        return out;
    }

    static constexpr int kSrpFlowPriority = 500;

    SimEngine* engine_;
    std::map<std::string, ControlChannel*> channels_;
    std::map<std::string, std::vector<std::string>> features_;
    std::set<std::string> nc_sessions_;
    std::map<std::string, StreamView> streams_;
    std::map<std::uint64_t, PendingRpc> pending_rpcs_;
    std::uint64_t next_rpc_id_{1};
    ControlTimeline timeline_;
    std::function<void(const std::string&)> failure_injector_;
    ControlLog log_;
};

} // namespace gatesim
