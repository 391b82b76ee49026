// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "gatesim/control.hpp"
#include "gatesim/engine.hpp"
#include "gatesim/flow_table.hpp"
#include "gatesim/frame.hpp"
#include "gatesim/launch_config.hpp"
#include "gatesim/link.hpp"
#include "gatesim/qbv_port.hpp"
#include "gatesim/sr_table.hpp"

namespace gatesim {

/// Frame dispositions a switch can account for. Every frame that enters the
/// relay and does not leave through an egress port lands in exactly one of
/// these counters; the network-level conservation audit sums them.
struct SwitchCounters {
    std::uint64_t processed{0};          // frames through the lookup stage
    std::uint64_t copies_enqueued{0};    // Output actions that reached a port
    std::uint64_t punted{0};             // packet-ins sent to the controller
    std::uint64_t table_miss_drops{0};
    std::uint64_t action_drops{0};       // explicit Drop actions
    std::uint64_t unknown_port_drops{0};
    std::uint64_t no_controller_drops{0};
    std::uint64_t injected{0};           // packet-out frames entering the egress path
    std::uint64_t duplicated{0};         // extra copies from multi-action fan-out

    std::uint64_t total_drops() const {
        return table_miss_drops + action_drops + unknown_port_drops + no_controller_drops;
    }
};

/// A programmable real-time switch: store-and-forward relay over a flow
/// table, Qbv-gated egress ports, an SR table, a NetConf server over a GCL
/// datastore, and an OpenFlow agent. Ingress filtering (802.1Qci) is a named
/// pass-through stage.
class Switch {
public:
    Switch(SimEngine& engine, std::string id) : engine_(&engine), id_(std::move(id)) {}

    const std::string& id() const { return id_; }

    /// Wire one egress direction. The port starts with an all-open schedule
    /// until a launch config or NetConf edit replaces it.
    QbvPort& add_port(const std::string& name, LinkDirection& egress) {
        if (egress_.count(name)) throw ConfigError(id_ + ": duplicate port " + name);
        auto port = std::make_unique<QbvPort>(*engine_, egress, id_ + ":" + name,
                                              GateControlList::all_open(milliseconds(1)), policy_);
        auto& ref = *port;
        egress_.emplace(name, std::move(port));
        return ref;
    }

    void attach_channel(ControlChannel& ch) {
        channel_ = &ch;
        ch.connect_switch([this](const ControlMsg& m) { on_control(m); });
    }

    std::vector<std::string> port_names() const {
        std::vector<std::string> names;
        names.reserve(egress_.size());
        for (const auto& [name, _] : egress_) names.push_back(name);
        return names;  // map order: sorted, deterministic
    }

    QbvPort* port(const std::string& name) {
        auto it = egress_.find(name);
        return it == egress_.end() ? nullptr : it->second.get();
    }

    QbvPolicy policy() const { return policy_; }
    Duration processing_delay() const { return processing_delay_; }
    const FlowTable& flow_table() const { return table_; }
    FlowTable& flow_table() { return table_; }
    const SrTable& sr_table() const { return sr_table_; }
    const SwitchCounters& counters() const { return counters_; }
    std::uint64_t pipeline_in_flight() const { return pipeline_; }
    std::size_t queued_frames() const {
        std::size_t n = 0;
        for (const auto& [_, p] : egress_) n += p->queued_frames();
        return n;
    }

    // ------------------------------------------------------------- launch

    void set_policy(QbvPolicy p) {
        require_prestart("policy change");
        policy_ = p;
        for (auto& [_, port] : egress_) port->set_policy(p);
    }

    void set_processing_delay(Duration d) {
        require_prestart("processing_delay change");
        if (d.ns < 0) throw ConfigError(id_ + ": negative processing_delay");
        processing_delay_ = d;
    }

    /// Install the launch-time schedule of one port and seed the datastore.
    void set_initial_gcl(const std::string& port_name, const std::string& gcl_text) {
        require_prestart("initial GCL");
        auto it = egress_.find(port_name);
        if (it == egress_.end()) throw ConfigError(id_ + ": GCL for unknown port " + port_name);
        GateControlList gcl = parse_gcl(gcl_text);
        datastore_[port_name] = format_gcl(gcl);
        it->second->set_initial(std::move(gcl));
    }

    SwitchConfig export_launch_config() const {
        SwitchConfig cfg;
        cfg.policy = policy_;
        cfg.processing_delay = processing_delay_;
        cfg.port_gcls = datastore_;
        cfg.flow_entries = table_.entries();
        for (const auto& [_, e] : sr_table_.entries()) cfg.sr_entries.push_back(e);
        return cfg;
    }

    void import_launch_config(const SwitchConfig& cfg) {
        require_prestart("launch-config import");
        for (const auto& [port_name, text] : cfg.port_gcls) {
            if (!egress_.count(port_name)) {
                throw ConfigError(id_ + ": launch config references unknown port " + port_name);
            }
            parse_gcl(text);
        }
        set_policy(cfg.policy);
        set_processing_delay(cfg.processing_delay);
        datastore_.clear();
        for (const auto& [port_name, text] : cfg.port_gcls) set_initial_gcl(port_name, text);
        table_.clear();
        for (const auto& e : cfg.flow_entries) {
            FlowEntry copy = e;
            table_.insert(std::move(copy));
        }
        sr_table_.clear();
        for (const auto& e : cfg.sr_entries) sr_table_.load(e);
    }

    // ----------------------------------------------------------- dataplane

    /// Entry point for a fully received frame (store-and-forward). The
    /// lookup-and-execute stage runs after the pipeline's processing delay.
    void relay(Frame frame, const std::string& in_port) {
        ++pipeline_;
        engine_->schedule_after(processing_delay_,
                                [this, f = std::move(frame), in_port]() mutable {
                                    --pipeline_;
                                    process(std::move(f), in_port);
                                });
    }

    // ------------------------------------------------------------- netconf

    /// NetConf server. Handles hello and rpc messages, returns the reply.
    /// edit-config is atomic: on any validation error nothing is written.
    NetconfMsg netconf_handle(const NetconfMsg& msg) {
        if (msg.kind == NetconfKind::Hello) {
            nc_session_ = true;
            return NetconfMsg::hello();
        }
        if (msg.kind != NetconfKind::Rpc) {
            throw ModelFault(id_ + ": unexpected netconf message kind");
        }
        if (!nc_session_) return NetconfMsg::reply_error(msg.id, "no netconf session");
        if (msg.op.datastore != "running") {
            return NetconfMsg::reply_error(msg.id, "unknown datastore " + msg.op.datastore);
        }
        if (msg.op.kind == NetconfOpKind::GetConfig) {
            return NetconfMsg::reply_ok(msg.id, datastore_text());
        }
        if (edit_failure_armed_) {
            edit_failure_armed_ = false;
            return NetconfMsg::reply_error(msg.id, "simulated configuration failure");
        }
        std::map<std::string, GateControlList> parsed;
        for (const auto& [port_name, text] : msg.op.gcl_edits) {
            if (!egress_.count(port_name)) {
                return NetconfMsg::reply_error(msg.id, "unknown port " + port_name);
            }
            try {
                parsed.emplace(port_name, parse_gcl(text));
            } catch (const ConfigError& e) {
                return NetconfMsg::reply_error(msg.id, e.what());
            }
        }
        for (auto& [port_name, gcl] : parsed) {
            datastore_[port_name] = format_gcl(gcl);
            egress_.at(port_name)->install(std::move(gcl), engine_->now());
        }
        return NetconfMsg::reply_ok(msg.id);
    }

    /// Answer the next edit-config with rpc-error, applying nothing.
    void arm_edit_failure() { edit_failure_armed_ = true; }
    bool edit_failure_armed() const { return edit_failure_armed_; }

    /// Canonical datastore serialization, one "port <name> <gcl>" line per
    /// configured port, sorted by port name.
    std::string datastore_text() const {
        std::string out;
        for (const auto& [port_name, text] : datastore_) {
            out += "port " + port_name + " " + text + "\n";
        }
        return out;
    }

    const std::map<std::string, std::string>& datastore() const { return datastore_; }

private:
    void require_prestart(const std::string& what) const {
        if (engine_->started() || engine_->now() != SimTime{0}) {
            throw ConfigError(id_ + ": " + what + " after simulation start");
        }
    }

    void process(Frame frame, const std::string& in_port) {
        // 802.1Qci ingress stage: pass-through.
        if (frame.ethertype == kSrpEthertype) {
            punt(std::move(frame), in_port);
            return;
        }
        ++counters_.processed;
        FlowEntry* entry = table_.lookup(frame, in_port);
        if (!entry) {
            ++counters_.table_miss_drops;
            return;
        }
        ++entry->packet_count;
        entry->byte_count += frame.wire_size;
        if (entry->actions.empty()) {
            ++counters_.action_drops;
            return;
        }
        // Each executed action disposes one copy; every action beyond the
        // first duplicates the frame (multi-output fan-out).
        counters_.duplicated += entry->actions.size() - 1;
        for (const auto& action : entry->actions) {
            switch (action.kind) {
                case FlowActionKind::Output: {
                    auto it = egress_.find(action.port);
                    if (it == egress_.end()) {
                        ++counters_.unknown_port_drops;
                    } else {
                        ++counters_.copies_enqueued;
                        it->second->enqueue(frame, engine_->now());
                    }
                    break;
                }
                case FlowActionKind::ToController:
                    punt(frame, in_port);
                    break;
                case FlowActionKind::Drop:
                    ++counters_.action_drops;
                    break;
            }
        }
    }

    void punt(Frame frame, const std::string& in_port) {
        if (frame.srp) {
            auto& book = frame.srp->kind == SrpKind::TalkerAdvertise ? srp_adv_ingress_
                                                                     : srp_ready_ingress_;
            book[frame.srp->stream_id] = in_port;
        }
        if (!channel_) {
            ++counters_.no_controller_drops;
            return;
        }
        ++counters_.punted;
        channel_->send_to_controller(OpenFlowMsg::packet_in(std::move(frame), in_port));
    }

    void on_control(const ControlMsg& msg) {
        if (const auto* nc = std::get_if<NetconfMsg>(&msg)) {
            NetconfMsg reply = netconf_handle(*nc);
            channel_->send_to_controller(std::move(reply));
            return;
        }
        const auto& of = std::get<OpenFlowMsg>(msg);
        switch (of.kind) {
            case OpenFlowKind::Hello:
                channel_->send_to_controller(OpenFlowMsg::hello());
                break;
            case OpenFlowKind::FeaturesRequest:
                channel_->send_to_controller(OpenFlowMsg::features_reply(port_names()));
                break;
            case OpenFlowKind::FlowMod: {
                FlowEntry e = of.entry;
                table_.insert(std::move(e));
                break;
            }
            case OpenFlowKind::PacketOut:
                handle_packet_out(of.frame, of.out_port);
                break;
            default:
                throw ModelFault(id_ + ": unexpected OpenFlow message " + to_string(of.kind));
        }
    }

    void handle_packet_out(const Frame& frame, const std::string& out_port) {
        // A controller-approved SRP message transiting this switch carries
        // the registration the controller just made; mirror it locally.
        if (frame.srp) apply_sr_update(frame);
        auto it = egress_.find(out_port);
        if (it == egress_.end()) {
            ++counters_.unknown_port_drops;
            return;
        }
        ++counters_.injected;
        ++pipeline_;
        engine_->schedule_after(processing_delay_, [this, frame, out_port] {
            --pipeline_;
            egress_.at(out_port)->enqueue(frame, engine_->now());
        });
    }

    void apply_sr_update(const Frame& frame) {
        const SrpMessage& m = *frame.srp;
        if (m.kind == SrpKind::TalkerAdvertise) {
            auto it = srp_adv_ingress_.find(m.stream_id);
            if (it != srp_adv_ingress_.end()) {
                sr_table_.register_talker(m.stream_id, m.dst_mac, m.pcp, it->second);
            }
        } else {
            auto it = srp_ready_ingress_.find(m.stream_id);
            if (it != srp_ready_ingress_.end()) {
                sr_table_.register_listener(m.stream_id, it->second);
            }
        }
    }

    SimEngine* engine_;
    std::string id_;
    QbvPolicy policy_{QbvPolicy::GateOpenAtStart};
    Duration processing_delay_{0};
    std::map<std::string, std::unique_ptr<QbvPort>> egress_;
    ControlChannel* channel_{nullptr};
    FlowTable table_;
    SrTable sr_table_;
    std::map<std::string, std::string> datastore_;
    std::map<std::string, std::string> srp_adv_ingress_;
    std::map<std::string, std::string> srp_ready_ingress_;
    bool nc_session_{false};
    bool edit_failure_armed_{false};
    std::uint64_t pipeline_{0};
    SwitchCounters counters_;
};

} // namespace gatesim
