// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "gatesim/control.hpp"
#include "gatesim/gcl.hpp"
#include "gatesim/host.hpp"
#include "gatesim/launch_config.hpp"
#include "gatesim/qbv_port.hpp"

namespace gatesim {

enum class NodeKind : std::uint8_t { Host, Sink, Switch, Controller };

struct NodeDecl {
    NodeKind kind{NodeKind::Host};
    std::string id;
    MacAddress mac;                 // hosts and sinks
    Duration processing_delay{};    // switches
};

struct LinkDecl {
    std::string a_node, a_port;  // port "-" on host endpoints
    std::string b_node, b_port;
    std::uint64_t bitrate_bps{0};
};

struct ControlLinkDecl {
    std::string controller;
    std::string switch_id;
    Duration latency{};
};

struct GclDecl {
    std::string switch_id;
    std::string port;  // "*" = every port
    std::string gcl_text;
};

struct FlowDecl {
    std::string switch_id;
    FlowEntry entry;
};

struct TrafficDecl {
    std::string host;
    SourceConfig source;
};

struct TalkerDecl {
    std::string host;
    TalkerConfig talker;
};

struct ListenerDecl {
    std::string host;
    ListenerConfig listener;
};

/// A complete experiment description: topology, launch configuration,
/// traffic, and the scripted control-plane timeline.
struct ScenarioConfig {
    std::string name{"scenario"};
    Duration duration{};
    std::uint64_t seed{1};
    QbvPolicy policy{QbvPolicy::GateOpenAtStart};
    Duration control_latency{};

    std::vector<NodeDecl> nodes;
    std::vector<LinkDecl> links;
    std::vector<ControlLinkDecl> control_links;
    std::vector<GclDecl> gcls;
    std::vector<FlowDecl> flows;
    std::vector<TrafficDecl> traffic;
    std::vector<TalkerDecl> talkers;
    std::vector<ListenerDecl> listeners;
    ControlTimeline timeline;

    const NodeDecl* find_node(const std::string& id) const {
        for (const auto& n : nodes) {
            if (n.id == id) return &n;
        }
        return nullptr;
    }

    /// Port names of one switch, in link-declaration order.
    std::vector<std::string> switch_ports(const std::string& id) const {
        std::vector<std::string> out;
        for (const auto& l : links) {
            if (l.a_node == id) out.push_back(l.a_port);
            if (l.b_node == id) out.push_back(l.b_port);
        }
        return out;
    }

    void check_valid() const;
};

inline std::uint64_t parse_rate(const std::string& s) {
    if (s.empty()) throw ConfigError("empty link rate");
    std::uint64_t scale = 1;
    std::string digits = s;
    switch (s.back()) {
        case 'K': scale = 1000ULL; digits.pop_back(); break;
        case 'M': scale = 1000000ULL; digits.pop_back(); break;
        case 'G': scale = 1000000000ULL; digits.pop_back(); break;
        default: break;
    }
    return detail::parse_u64(digits) * scale;
}

inline std::string format_rate(std::uint64_t bps) {
    if (bps % 1000000000ULL == 0) return std::to_string(bps / 1000000000ULL) + "G";
    if (bps % 1000000ULL == 0) return std::to_string(bps / 1000000ULL) + "M";
    if (bps % 1000ULL == 0) return std::to_string(bps / 1000ULL) + "K";
    return std::to_string(bps);
}

inline void ScenarioConfig::check_valid() const {
    if (duration.ns <= 0) throw ConfigError("scenario duration must be > 0");

    std::set<std::string> ids;
    std::set<std::string> switches, controllers, endpoints;
    for (const auto& n : nodes) {
        if (!ids.insert(n.id).second) throw ConfigError("duplicate node id " + n.id);
        if (n.kind == NodeKind::Switch) {
            switches.insert(n.id);
            if (n.processing_delay.ns < 0) throw ConfigError(n.id + ": negative processing_delay");
        } else if (n.kind == NodeKind::Controller) {
            controllers.insert(n.id);
        } else {
            endpoints.insert(n.id);
        }
    }

    std::map<std::string, std::set<std::string>> ports_of;
    std::map<std::string, int> host_degree;
    for (const auto& l : links) {
        for (const auto* end : {&l.a_node, &l.b_node}) {
            if (!ids.count(*end)) throw ConfigError("link references unknown node " + *end);
            if (controllers.count(*end)) throw ConfigError("data link touches controller " + *end);
        }
        if (l.bitrate_bps == 0) throw ConfigError("link with zero bitrate");
        auto check_end = [&](const std::string& node, const std::string& port) {
            if (switches.count(node)) {
                if (port.empty() || port == "-") throw ConfigError(node + ": switch link end needs a port name");
                if (!ports_of[node].insert(port).second) {
                    throw ConfigError(node + ": duplicate port " + port);
                }
            } else {
                if (++host_degree[node] > 1) throw ConfigError(node + ": multiple links on one host");
            }
        };
        check_end(l.a_node, l.a_port);
        check_end(l.b_node, l.b_port);
    }
    for (const auto& e : endpoints) {
        bool used = false;
        for (const auto& t : traffic) used = used || t.host == e;
        if (host_degree.count(e) == 0 && used) {
            throw ConfigError(e + ": traffic source on unlinked host");
        }
    }

    // Connectivity over data links (nodes that have any link).
    if (!links.empty()) {
        std::map<std::string, std::vector<std::string>> adj;
        for (const auto& l : links) {
            adj[l.a_node].push_back(l.b_node);
            adj[l.b_node].push_back(l.a_node);
        }
        std::set<std::string> seen;
        std::vector<std::string> stack{links.front().a_node};
        while (!stack.empty()) {
            std::string cur = stack.back();
            stack.pop_back();
            if (!seen.insert(cur).second) continue;
            for (const auto& nb : adj[cur]) stack.push_back(nb);
        }
        if (seen.size() != adj.size()) throw ConfigError("data topology is not connected");
    }

    std::set<std::string> connected_switches;
    for (const auto& c : control_links) {
        if (!controllers.count(c.controller)) {
            throw ConfigError("control link from unknown controller " + c.controller);
        }
        if (!switches.count(c.switch_id)) {
            throw ConfigError("control link to unknown switch " + c.switch_id);
        }
        if (!connected_switches.insert(c.switch_id).second) {
            throw ConfigError("duplicate control link to " + c.switch_id);
        }
        if (c.latency.ns < 0) throw ConfigError("negative control latency");
    }

    for (const auto& g : gcls) {
        if (!switches.count(g.switch_id)) throw ConfigError("GCL for unknown switch " + g.switch_id);
        if (g.port != "*" && !ports_of[g.switch_id].count(g.port)) {
            throw ConfigError(g.switch_id + ": GCL for unknown port " + g.port);
        }
        parse_gcl(g.gcl_text);
    }

    for (const auto& f : flows) {
        if (!switches.count(f.switch_id)) throw ConfigError("flow for unknown switch " + f.switch_id);
        for (const auto& a : f.entry.actions) {
            if (a.kind == FlowActionKind::Output && !ports_of[f.switch_id].count(a.port)) {
                throw ConfigError(f.switch_id + ": flow outputs to unknown port " + a.port);
            }
        }
    }

    for (const auto& t : traffic) {
        if (!endpoints.count(t.host)) throw ConfigError("traffic source on unknown host " + t.host);
        t.source.check_valid();
    }
    std::set<std::string> stream_ids;
    for (const auto& t : talkers) {
        if (!endpoints.count(t.host)) throw ConfigError("talker on unknown host " + t.host);
        if (!stream_ids.insert(t.talker.stream_id).second) {
            throw ConfigError("duplicate stream id " + t.talker.stream_id);
        }
    }
    for (const auto& l : listeners) {
        if (!endpoints.count(l.host)) throw ConfigError("listener on unknown host " + l.host);
    }

    timeline.check_valid();
    for (const auto& a : timeline.actions) {
        if (!connected_switches.count(a.switch_id)) {
            throw ConfigError("timeline targets switch without control channel: " + a.switch_id);
        }
        if (a.kind == TimelineAction::Kind::EditGcl) {
            parse_gcl(a.gcl_text);
            for (const auto& p : a.ports) {
                if (!ports_of[a.switch_id].count(p)) {
                    throw ConfigError(a.switch_id + ": timeline edit names unknown port " + p);
                }
            }
        }
    }
}

// --------------------------------------------------------------- text form

inline std::string serialize_scenario(const ScenarioConfig& cfg) {
    std::string out;
    out += "[params]\n";
    out += "name " + cfg.name + "\n";
    out += "duration_us " + format_duration_us(cfg.duration) + "\n";
    out += "seed " + std::to_string(cfg.seed) + "\n";
    out += "qbv_policy " + to_string(cfg.policy) + "\n";
    out += "control_latency_us " + format_duration_us(cfg.control_latency) + "\n";

    out += "\n[nodes]\n";
    for (const auto& n : cfg.nodes) {
        switch (n.kind) {
            case NodeKind::Host:
                out += "host " + n.id + " mac=" + n.mac.to_string() + "\n";
                break;
            case NodeKind::Sink:
                out += "sink " + n.id + " mac=" + n.mac.to_string() + "\n";
                break;
            case NodeKind::Switch:
                out += "switch " + n.id + " processing_delay_us=" +
                       format_duration_us(n.processing_delay) + "\n";
                break;
            case NodeKind::Controller:
                out += "controller " + n.id + "\n";
                break;
        }
    }

    out += "\n[links]\n";
    for (const auto& l : cfg.links) {
        out += "link " + l.a_node + " " + (l.a_port.empty() ? "-" : l.a_port) + " " + l.b_node +
               " " + (l.b_port.empty() ? "-" : l.b_port) + " rate=" + format_rate(l.bitrate_bps) +
               "\n";
    }
    for (const auto& c : cfg.control_links) {
        out += "control " + c.controller + " " + c.switch_id + " latency_us=" +
               format_duration_us(c.latency) + "\n";
    }

    out += "\n[gcl]\n";
    for (const auto& g : cfg.gcls) {
        out += g.switch_id + " " + g.port + " " + g.gcl_text + "\n";
    }

    out += "\n[flows]\n";
    for (const auto& f : cfg.flows) {
        out += f.switch_id + " " + serialize_flow_entry(f.entry) + "\n";
    }

    out += "\n[traffic]\n";
    for (const auto& t : cfg.traffic) {
        const auto& s = t.source;
        out += "source " + t.host + " pcp=" + std::to_string(s.pcp) + " size=" +
               std::to_string(s.wire_size) + " period_us=" + format_duration_us(s.period);
        if (s.jitter_stddev.ns != 0) out += " jitter_us=" + format_duration_us(s.jitter_stddev);
        if (s.start_at.ns != 0) {
            out += " start_us=" + format_duration_us(Duration{s.start_at.ns});
        }
        if (s.offset.ns != 0) out += " offset_us=" + format_duration_us(s.offset);
        if (!s.flow_id.empty() && s.flow_id != t.host) out += " flow=" + s.flow_id;
        out += " dst=" + s.dst_mac.to_string() + "\n";
    }
    for (const auto& t : cfg.talkers) {
        const auto& k = t.talker;
        out += "talker " + t.host + " stream=" + k.stream_id + " dst=" + k.dst_mac.to_string() +
               " pcp=" + std::to_string(k.pcp) + " size=" + std::to_string(k.max_frame_size) +
               " interval_us=" + format_duration_us(k.interval) + " advertise_us=" +
               format_duration_us(Duration{k.advertise_at.ns}) + "\n";
    }
    for (const auto& l : cfg.listeners) {
        out += "listener " + l.host + " stream=" + l.listener.stream_id + " reply_delay_us=" +
               format_duration_us(l.listener.reply_delay) + "\n";
    }

    out += "\n[timeline]\n";
    for (const auto& a : cfg.timeline.actions) {
        out += "at_us " + format_duration_us(Duration{a.at.ns}) + " ";
        if (a.kind == TimelineAction::Kind::InjectEditFailure) {
            out += "inject-edit-failure " + a.switch_id + "\n";
        } else {
            std::string ports = "*";
            if (!a.ports.empty()) {
                ports.clear();
                for (std::size_t i = 0; i < a.ports.size(); ++i) {
                    ports += (i ? "," : "") + a.ports[i];
                }
            }
            out += "edit " + a.switch_id + " " + ports + " " + a.gcl_text + "\n";
        }
    }
    return out;
}

inline ScenarioConfig parse_scenario(const std::string& text) {
    ScenarioConfig cfg;
    cfg.name.clear();
    std::istringstream in(text);
    std::string line;
    std::string section;
    auto need = [](const std::map<std::string, std::string>& kv, const std::string& key,
                   const std::string& ctx) -> const std::string& {
        auto it = kv.find(key);
        if (it == kv.end()) throw ConfigError(ctx + ": missing " + key + "=");
        return it->second;
    };
    auto kv_from = [](const std::vector<std::string>& toks, std::size_t from) {
        std::map<std::string, std::string> kv;
        for (std::size_t i = from; i < toks.size(); ++i) {
            const auto [k, v] = detail::split_kv(toks[i]);
            kv[k] = v;
        }
        return kv;
    };

    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const auto first = line.find_first_not_of(" \t");
        if (first == std::string::npos) continue;
        if (line[first] == '#') continue;
        if (line[first] == '[') {
            const auto close = line.find(']', first);
            if (close == std::string::npos) throw ConfigError("unterminated section header");
            section = line.substr(first + 1, close - first - 1);
            continue;
        }
        const auto toks = detail::split_ws(line);

        if (section == "params") {
            if (toks.size() != 2) throw ConfigError("bad [params] line: " + line);
            if (toks[0] == "name") cfg.name = toks[1];
            else if (toks[0] == "duration_us") cfg.duration = parse_duration_us(toks[1]);
            else if (toks[0] == "seed") cfg.seed = detail::parse_u64(toks[1]);
            else if (toks[0] == "qbv_policy") cfg.policy = parse_qbv_policy(toks[1]);
            else if (toks[0] == "control_latency_us") cfg.control_latency = parse_duration_us(toks[1]);
            else throw ConfigError("unknown [params] key " + toks[0]);
        } else if (section == "nodes") {
            if (toks.size() < 2) throw ConfigError("bad [nodes] line: " + line);
            NodeDecl n;
            n.id = toks[1];
            const auto kv = kv_from(toks, 2);
            if (toks[0] == "host" || toks[0] == "sink") {
                n.kind = toks[0] == "host" ? NodeKind::Host : NodeKind::Sink;
                n.mac = MacAddress::parse(need(kv, "mac", toks[1]));
            } else if (toks[0] == "switch") {
                n.kind = NodeKind::Switch;
                if (kv.count("processing_delay_us")) {
                    n.processing_delay = parse_duration_us(kv.at("processing_delay_us"));
                }
            } else if (toks[0] == "controller") {
                n.kind = NodeKind::Controller;
            } else {
                throw ConfigError("unknown node kind " + toks[0]);
            }
            cfg.nodes.push_back(std::move(n));
        } else if (section == "links") {
            if (toks[0] == "link") {
                if (toks.size() != 6) throw ConfigError("bad link line: " + line);
                LinkDecl l;
                l.a_node = toks[1];
                l.a_port = toks[2] == "-" ? "" : toks[2];
                l.b_node = toks[3];
                l.b_port = toks[4] == "-" ? "" : toks[4];
                const auto kv = kv_from(toks, 5);
                l.bitrate_bps = parse_rate(need(kv, "rate", "link"));
                cfg.links.push_back(std::move(l));
            } else if (toks[0] == "control") {
                if (toks.size() < 3) throw ConfigError("bad control line: " + line);
                ControlLinkDecl c;
                c.controller = toks[1];
                c.switch_id = toks[2];
                const auto kv = kv_from(toks, 3);
                if (kv.count("latency_us")) c.latency = parse_duration_us(kv.at("latency_us"));
                cfg.control_links.push_back(std::move(c));
            } else {
                throw ConfigError("unknown [links] line: " + line);
            }
        } else if (section == "gcl") {
            if (toks.size() != 3) throw ConfigError("bad [gcl] line: " + line);
            cfg.gcls.push_back({toks[0], toks[1], toks[2]});
        } else if (section == "flows") {
            if (toks.size() < 2 || toks[1] != "entry") throw ConfigError("bad [flows] line: " + line);
            FlowDecl f;
            f.switch_id = toks[0];
            f.entry = parse_flow_entry({toks.begin() + 1, toks.end()});
            cfg.flows.push_back(std::move(f));
        } else if (section == "traffic") {
            if (toks.size() < 2) throw ConfigError("bad [traffic] line: " + line);
            const auto kv = kv_from(toks, 2);
            if (toks[0] == "source") {
                TrafficDecl t;
                t.host = toks[1];
                t.source.pcp = static_cast<std::uint8_t>(detail::parse_u64(need(kv, "pcp", t.host)));
                t.source.wire_size =
                    static_cast<std::uint32_t>(detail::parse_u64(need(kv, "size", t.host)));
                t.source.period = parse_duration_us(need(kv, "period_us", t.host));
                if (kv.count("jitter_us")) t.source.jitter_stddev = parse_duration_us(kv.at("jitter_us"));
                if (kv.count("start_us")) t.source.start_at = SimTime{parse_duration_us(kv.at("start_us")).ns};
                if (kv.count("offset_us")) t.source.offset = parse_duration_us(kv.at("offset_us"));
                if (kv.count("flow")) t.source.flow_id = kv.at("flow");
                else t.source.flow_id = t.host;
                t.source.dst_mac = MacAddress::parse(need(kv, "dst", t.host));
                cfg.traffic.push_back(std::move(t));
            } else if (toks[0] == "talker") {
                TalkerDecl t;
                t.host = toks[1];
                t.talker.stream_id = need(kv, "stream", t.host);
                t.talker.dst_mac = MacAddress::parse(need(kv, "dst", t.host));
                t.talker.pcp = static_cast<std::uint8_t>(detail::parse_u64(need(kv, "pcp", t.host)));
                t.talker.max_frame_size =
                    static_cast<std::uint32_t>(detail::parse_u64(need(kv, "size", t.host)));
                t.talker.interval = parse_duration_us(need(kv, "interval_us", t.host));
                t.talker.advertise_at = SimTime{parse_duration_us(need(kv, "advertise_us", t.host)).ns};
                cfg.talkers.push_back(std::move(t));
            } else if (toks[0] == "listener") {
                ListenerDecl l;
                l.host = toks[1];
                l.listener.stream_id = need(kv, "stream", l.host);
                if (kv.count("reply_delay_us")) {
                    l.listener.reply_delay = parse_duration_us(kv.at("reply_delay_us"));
                }
                cfg.listeners.push_back(std::move(l));
            } else {
                throw ConfigError("unknown [traffic] line: " + line);
            }
        } else if (section == "timeline") {
            if (toks.size() < 3 || toks[0] != "at_us") throw ConfigError("bad [timeline] line: " + line);
            TimelineAction a;
            a.at = SimTime{parse_duration_us(toks[1]).ns};
            if (toks[2] == "inject-edit-failure") {
                if (toks.size() != 4) throw ConfigError("bad inject line: " + line);
                a.kind = TimelineAction::Kind::InjectEditFailure;
                a.switch_id = toks[3];
            } else if (toks[2] == "edit") {
                if (toks.size() != 6) throw ConfigError("bad edit line: " + line);
                a.kind = TimelineAction::Kind::EditGcl;
                a.switch_id = toks[3];
                if (toks[4] != "*") {
                    std::size_t pos = 0;
                    const std::string& spec = toks[4];
                    while (pos <= spec.size()) {
                        const auto comma = spec.find(',', pos);
                        a.ports.push_back(spec.substr(
                            pos, comma == std::string::npos ? std::string::npos : comma - pos));
                        if (comma == std::string::npos) break;
                        pos = comma + 1;
                    }
                }
                a.gcl_text = toks[5];
            } else {
                throw ConfigError("unknown timeline action " + toks[2]);
            }
            cfg.timeline.actions.push_back(std::move(a));
        } else if (section.empty()) {
            throw ConfigError("content before first section: " + line);
        } else {
            throw ConfigError("unknown section [" + section + "]");
        }
    }
    if (cfg.name.empty()) cfg.name = "scenario";
    return cfg;
}

} // namespace gatesim
