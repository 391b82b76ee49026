// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "gatesim/controller.hpp"
#include "gatesim/engine.hpp"
#include "gatesim/host.hpp"
#include "gatesim/link.hpp"
#include "gatesim/random.hpp"
#include "gatesim/scenario.hpp"
#include "gatesim/switch.hpp"
#include "gatesim/trace.hpp"

namespace gatesim {

/// Frame-copy conservation snapshot. Copies are born by host sends, switch
/// packet-out injections and flow-table fan-out; they die at a host, in a
/// drop counter or by punt to the controller; the rest are still in transit.
struct AuditReport {
    std::uint64_t host_sent{0};
    std::uint64_t injected{0};
    std::uint64_t duplicated{0};
    std::uint64_t recorded{0};
    std::uint64_t host_absorbed{0};
    std::uint64_t punted{0};
    std::uint64_t dropped{0};
    std::uint64_t residual{0};

    std::uint64_t born() const { return host_sent + injected + duplicated; }
    std::uint64_t accounted() const {
        return recorded + host_absorbed + punted + dropped + residual;
    }
    bool balanced() const { return born() == accounted(); }
};

/// A fully wired simulation instance built from one ScenarioConfig.
class Network {
public:
    explicit Network(const ScenarioConfig& cfg) : cfg_(cfg) {
        cfg_.check_valid();
        build();
    }

    SimEngine& engine() { return engine_; }
    const ScenarioConfig& config() const { return cfg_; }
    const TraceRecorder& trace() const { return trace_; }
    Controller* controller() { return controller_.get(); }

    Switch* find_switch(const std::string& id) {
        auto it = switches_.find(id);
        return it == switches_.end() ? nullptr : it->second.get();
    }
    Host* find_host(const std::string& id) {
        auto it = hosts_.find(id);
        return it == hosts_.end() ? nullptr : it->second.get();
    }
    const std::map<std::string, std::unique_ptr<Switch>>& switches() const { return switches_; }
    const std::map<std::string, std::unique_ptr<Host>>& hosts() const { return hosts_; }

    /// Run to the configured duration (or further, stepwise via run_until).
    void run() { run_until(SimTime{cfg_.duration.ns}); }

    void run_until(SimTime t) {
        if (!started_) {
            started_ = true;
            if (controller_) controller_->start();
            for (auto& [_, h] : hosts_) h->start();
        }
        engine_.run_until(t);
    }

    AuditReport audit() const {
        AuditReport a;
        for (const auto& [_, h] : hosts_) {
            a.host_sent += h->sent();
            a.host_absorbed += h->absorbed();
            a.recorded += h->recorded();
            a.residual += h->tx_backlog();
        }
        for (const auto& [_, s] : switches_) {
            const SwitchCounters& c = s->counters();
            a.injected += c.injected;
            a.duplicated += c.duplicated;
            a.punted += c.punted;
            a.dropped += c.total_drops();
            a.residual += s->queued_frames() + s->pipeline_in_flight();
        }
        for (const auto& l : links_) a.residual += l->in_flight();
        return a;
    }

private:
    void build() {
        for (const auto& n : cfg_.nodes) {
            switch (n.kind) {
                case NodeKind::Host:
                case NodeKind::Sink: {
                    auto h = std::make_unique<Host>(engine_, n.id, n.mac,
                                                    n.kind == NodeKind::Sink);
                    if (n.kind == NodeKind::Sink) h->set_trace(&trace_);
                    hosts_.emplace(n.id, std::move(h));
                    break;
                }
                case NodeKind::Switch: {
                    auto s = std::make_unique<Switch>(engine_, n.id);
                    s->set_processing_delay(n.processing_delay);
                    s->set_policy(cfg_.policy);
                    switches_.emplace(n.id, std::move(s));
                    break;
                }
                case NodeKind::Controller:
                    if (controller_) throw ConfigError("more than one controller node");
                    controller_ = std::make_unique<Controller>(engine_);
                    break;
            }
        }

        for (const auto& l : cfg_.links) {
            wire_direction(l.a_node, l.a_port, l.b_node, l.b_port, l.bitrate_bps);
            wire_direction(l.b_node, l.b_port, l.a_node, l.a_port, l.bitrate_bps);
        }

        for (const auto& c : cfg_.control_links) {
            const Duration lat = c.latency.ns != 0 ? c.latency : cfg_.control_latency;
            auto ch = std::make_unique<ControlChannel>(engine_, c.switch_id, lat);
            switches_.at(c.switch_id)->attach_channel(*ch);
            controller_->add_channel(*ch);
            channels_.push_back(std::move(ch));
        }
        if (controller_) {
            controller_->set_failure_injector([this](const std::string& id) {
                auto it = switches_.find(id);
                if (it == switches_.end()) throw ModelFault("failure injection on unknown switch " + id);
                it->second->arm_edit_failure();
            });
            controller_->set_timeline(cfg_.timeline);
        }

        for (const auto& g : cfg_.gcls) {
            Switch& sw = *switches_.at(g.switch_id);
            if (g.port == "*") {
                for (const auto& p : sw.port_names()) sw.set_initial_gcl(p, g.gcl_text);
            } else {
                sw.set_initial_gcl(g.port, g.gcl_text);
            }
        }

        for (const auto& f : cfg_.flows) {
            FlowEntry e = f.entry;
            switches_.at(f.switch_id)->flow_table().insert(std::move(e));
        }

        std::uint64_t substream = 0;
        for (const auto& t : cfg_.traffic) {
            hosts_.at(t.host)->add_source(t.source, RngStream(cfg_.seed, substream++));
        }
        for (const auto& t : cfg_.talkers) hosts_.at(t.host)->add_talker(t.talker);
        for (const auto& l : cfg_.listeners) hosts_.at(l.host)->add_listener(l.listener);
    }

    /// One direction from (from, from_port) to (to, to_port). The sender side
    /// is either a switch Qbv port or a host NIC; the receiver side funnels
    /// into relay() or deliver().
    void wire_direction(const std::string& from, const std::string& from_port,
                        const std::string& to, const std::string& to_port,
                        std::uint64_t bitrate) {
        const std::string label = from + (from_port.empty() ? "" : ":" + from_port) + "->" + to +
                                  (to_port.empty() ? "" : ":" + to_port);
        auto dir = std::make_unique<LinkDirection>(engine_, label, bitrate);
        if (auto hit = hosts_.find(to); hit != hosts_.end()) {
            Host* h = hit->second.get();
            dir->connect([h](const Frame& f) { h->deliver(f); });
        } else {
            Switch* sw = switches_.at(to).get();
            dir->connect([sw, to_port](const Frame& f) { sw->relay(f, to_port); });
        }
        if (auto hit = hosts_.find(from); hit != hosts_.end()) {
            hit->second->attach_nic(*dir);
        } else {
            switches_.at(from)->add_port(from_port, *dir);
        }
        links_.push_back(std::move(dir));
    }

    ScenarioConfig cfg_;
    SimEngine engine_;
    TraceRecorder trace_;
    std::map<std::string, std::unique_ptr<Host>> hosts_;
    std::map<std::string, std::unique_ptr<Switch>> switches_;
    std::unique_ptr<Controller> controller_;
    std::vector<std::unique_ptr<LinkDirection>> links_;
    std::vector<std::unique_ptr<ControlChannel>> channels_;
    bool started_{false};
};

} // namespace gatesim
