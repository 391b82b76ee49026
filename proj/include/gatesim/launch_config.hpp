// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <cstdio>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "gatesim/flow_table.hpp"
#include "gatesim/gcl.hpp"
#include "gatesim/qbv_port.hpp"
#include "gatesim/sr_table.hpp"

namespace gatesim {

/// Everything a switch loads at launch: forwarding state, stream
/// registrations, per-port schedules, the selection policy and the pipeline
/// delay. Serializes to a canonical text form; parse(serialize(c)) is
/// lossless and re-serializes byte-identically.
struct SwitchConfig {
    QbvPolicy policy{QbvPolicy::GateOpenAtStart};
    Duration processing_delay{0};
    std::map<std::string, std::string> port_gcls;  // port -> GCL textual form
    std::vector<FlowEntry> flow_entries;           // in table order
    std::vector<SrTableEntry> sr_entries;
};

namespace detail {

inline std::vector<std::string> split_ws(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream in(line);
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

inline std::pair<std::string, std::string> split_kv(const std::string& tok) {
    const auto eq = tok.find('=');
    if (eq == std::string::npos) throw ConfigError("expected key=value, got '" + tok + "'");
    return {tok.substr(0, eq), tok.substr(eq + 1)};
}

inline std::uint64_t parse_u64(const std::string& s) {
    if (s.empty()) throw ConfigError("empty number");
    std::uint64_t v = 0;
    std::size_t i = 0;
    bool hex = s.size() > 2 && s[0] == '0' && (s[1] == 'x' || s[1] == 'X');
    if (hex) i = 2;
    for (; i < s.size(); ++i) {
        const char c = s[i];
        int digit;
        if (c >= '0' && c <= '9') digit = c - '0';
        else if (hex && c >= 'a' && c <= 'f') digit = c - 'a' + 10;
        else if (hex && c >= 'A' && c <= 'F') digit = c - 'A' + 10;
        else throw ConfigError("bad digit in number '" + s + "'");
        v = v * (hex ? 16 : 10) + static_cast<std::uint64_t>(digit);
    }
    return v;
}

inline std::int64_t parse_i64(const std::string& s) {
    if (!s.empty() && s[0] == '-') return -static_cast<std::int64_t>(parse_u64(s.substr(1)));
    return static_cast<std::int64_t>(parse_u64(s));
}

inline std::string hex16(std::uint16_t v) {
    char buf[8];
    std::snprintf(buf, sizeof buf, "0x%04X", v);
    return buf;
}

} // namespace detail

inline std::string serialize_match(const FlowMatch& m) {
    std::string out;
    if (m.in_port) out += " in_port=" + *m.in_port;
    if (m.dst_mac) out += " dst_mac=" + m.dst_mac->to_string();
    if (m.ethertype) out += " ethertype=" + detail::hex16(*m.ethertype);
    if (m.pcp) out += " pcp=" + std::to_string(*m.pcp);
    if (out.empty()) return "any";
    return out.substr(1);
}

inline std::string serialize_actions(const std::vector<FlowAction>& actions) {
    std::string out;
    for (const auto& a : actions) {
        if (!out.empty()) out += ',';
        switch (a.kind) {
            case FlowActionKind::Output: out += "output:" + a.port; break;
            case FlowActionKind::ToController: out += "to-controller"; break;
            case FlowActionKind::Drop: out += "drop"; break;
        }
    }
    return out.empty() ? "drop" : out;
}

/// Consumes match tokens from `toks` starting at `i` until an `actions=` or
/// other known key appears; "any" stands for the fully wildcarded match.
inline FlowMatch parse_match_tokens(const std::vector<std::string>& toks, std::size_t& i) {
    FlowMatch m;
    if (i < toks.size() && toks[i] == "any") {
        ++i;
        return m;
    }
    while (i < toks.size() && toks[i].find('=') != std::string::npos) {
        const auto [key, value] = detail::split_kv(toks[i]);
        if (key == "in_port") m.in_port = value;
        else if (key == "dst_mac") m.dst_mac = MacAddress::parse(value);
        else if (key == "ethertype") m.ethertype = static_cast<std::uint16_t>(detail::parse_u64(value));
        else if (key == "pcp") m.pcp = static_cast<std::uint8_t>(detail::parse_u64(value));
        else break;
        ++i;
    }
    return m;
}

inline std::vector<FlowAction> parse_actions(const std::string& s) {
    std::vector<FlowAction> out;
    std::size_t pos = 0;
    while (pos <= s.size()) {
        const auto comma = s.find(',', pos);
        const std::string tok = s.substr(pos, comma == std::string::npos ? std::string::npos
                                                                         : comma - pos);
        if (tok.rfind("output:", 0) == 0) {
            const std::string port = tok.substr(7);
            if (port.empty()) throw ConfigError("output action without port");
            out.push_back(FlowAction::output(port));
        } else if (tok == "to-controller") {
            out.push_back(FlowAction::to_controller());
        } else if (tok == "drop") {
            out.push_back(FlowAction::drop());
        } else {
            throw ConfigError("unknown action '" + tok + "'");
        }
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    if (out.empty()) throw ConfigError("empty action list");
    return out;
}

inline std::string serialize_flow_entry(const FlowEntry& e) {
    return "entry priority=" + std::to_string(e.priority) + " match " + serialize_match(e.match) +
           " actions " + serialize_actions(e.actions);
}

inline FlowEntry parse_flow_entry(const std::vector<std::string>& toks) {
    // toks: entry priority=N match <fields|any> actions <list>
    FlowEntry e;
    std::size_t i = 1;
    if (i >= toks.size()) throw ConfigError("flow entry: missing priority");
    {
        const auto [key, value] = detail::split_kv(toks[i]);
        if (key != "priority") throw ConfigError("flow entry: expected priority=");
        e.priority = static_cast<int>(detail::parse_i64(value));
        ++i;
    }
    if (i >= toks.size() || toks[i] != "match") throw ConfigError("flow entry: expected 'match'");
    ++i;
    e.match = parse_match_tokens(toks, i);
    if (i >= toks.size() || toks[i] != "actions") throw ConfigError("flow entry: expected 'actions'");
    ++i;
    if (i >= toks.size()) throw ConfigError("flow entry: missing action list");
    e.actions = parse_actions(toks[i]);
    return e;
}

inline std::string serialize_switch_config(const SwitchConfig& cfg) {
    std::string out;
    out += "[switch]\n";
    out += "policy " + to_string(cfg.policy) + "\n";
    out += "processing_delay_ns " + std::to_string(cfg.processing_delay.ns) + "\n";
    out += "\n[gcl]\n";
    for (const auto& [port, gcl] : cfg.port_gcls) {
        out += "port " + port + " " + gcl + "\n";
    }
    out += "\n[flows]\n";
    for (const auto& e : cfg.flow_entries) {
        out += serialize_flow_entry(e) + "\n";
    }
    out += "\n[sr]\n";
    for (const auto& e : cfg.sr_entries) {
        out += "stream id=" + e.stream_id + " dst_mac=" + e.dst_mac.to_string() +
               " pcp=" + std::to_string(e.pcp) + " talker=" + e.talker_port + " listeners=";
        std::string ls;
        for (const auto& p : e.listener_ports) {
            if (!ls.empty()) ls += ',';
            ls += p;
        }
        out += (ls.empty() ? "-" : ls) + "\n";
    }
    return out;
}

inline SwitchConfig parse_switch_config(const std::string& text) {
    SwitchConfig cfg;
    std::istringstream in(text);
    std::string line;
    std::string section;
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
        if (section == "switch") {
            if (toks.size() != 2) throw ConfigError("bad [switch] line: " + line);
            if (toks[0] == "policy") cfg.policy = parse_qbv_policy(toks[1]);
            else if (toks[0] == "processing_delay_ns") cfg.processing_delay = Duration{detail::parse_i64(toks[1])};
            else throw ConfigError("unknown [switch] key '" + toks[0] + "'");
        } else if (section == "gcl") {
            if (toks.size() != 3 || toks[0] != "port") throw ConfigError("bad [gcl] line: " + line);
            parse_gcl(toks[2]);  // reject malformed schedules at load time
            cfg.port_gcls[toks[1]] = toks[2];
        } else if (section == "flows") {
            if (toks.empty() || toks[0] != "entry") throw ConfigError("bad [flows] line: " + line);
            cfg.flow_entries.push_back(parse_flow_entry(toks));
        } else if (section == "sr") {
            if (toks.size() != 6 || toks[0] != "stream") throw ConfigError("bad [sr] line: " + line);
            SrTableEntry e;
            for (std::size_t i = 1; i < toks.size(); ++i) {
                const auto [key, value] = detail::split_kv(toks[i]);
                if (key == "id") e.stream_id = value;
                else if (key == "dst_mac") e.dst_mac = MacAddress::parse(value);
                else if (key == "pcp") e.pcp = static_cast<std::uint8_t>(detail::parse_u64(value));
                else if (key == "talker") e.talker_port = value;
                else if (key == "listeners") {
                    if (value != "-") {
                        std::size_t pos = 0;
                        while (pos <= value.size()) {
                            const auto comma = value.find(',', pos);
                            e.listener_ports.insert(value.substr(
                                pos, comma == std::string::npos ? std::string::npos : comma - pos));
                            if (comma == std::string::npos) break;
                            pos = comma + 1;
                        }
                    }
                } else {
                    throw ConfigError("unknown [sr] key '" + key + "'");
                }
            }
            cfg.sr_entries.push_back(std::move(e));
        } else if (section.empty()) {
            throw ConfigError("content before first section: " + line);
        } else {
            throw ConfigError("unknown section [" + section + "]");
        }
    }
    return cfg;
}

} // namespace gatesim
