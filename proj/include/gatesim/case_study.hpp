// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>

#include "gatesim/scenario.hpp"

namespace gatesim {

/// Pipeline delay that reproduces the published latency plot: the slot miss
/// at the second switch once the higher-priority flow joins, while the first
/// switch's slot and the 50 us bound on the new flow still hold. The
/// calibration sweep over {0, 2, 4, 6, 8} us is frozen in the test suite.
constexpr Duration kCalibratedProcessingDelay{4000};

namespace casestudy {
constexpr const char* kSinkMac = "02:00:00:00:00:FF";
inline std::string host_mac(int i) { return "02:00:00:00:00:0" + std::to_string(i); }
inline std::string host_dst(int i) { return "03:00:00:00:00:0" + std::to_string(i); }
} // namespace casestudy

/// The built-in two-switch case study: four hosts on switch 1, a sink behind
/// switch 2, scripted GCL updates at 2 s / 6 s / 8 s with the 6 s edit of
/// switch 2 armed to fail, and host 4 joining at 4 s.
inline ScenarioConfig case_study_scenario(std::uint64_t seed = 1,
                                          Duration processing_delay = kCalibratedProcessingDelay) {
    using casestudy::host_dst;
    using casestudy::host_mac;
    ScenarioConfig cfg;
    cfg.name = "case-study";
    cfg.duration = seconds(10);
    cfg.seed = seed;
    cfg.policy = QbvPolicy::GateOpenAtStart;

    for (int i = 1; i <= 4; ++i) {
        cfg.nodes.push_back({NodeKind::Host, "host" + std::to_string(i),
                             MacAddress::parse(host_mac(i)), Duration{}});
    }
    cfg.nodes.push_back({NodeKind::Switch, "S1", MacAddress{}, processing_delay});
    cfg.nodes.push_back({NodeKind::Switch, "S2", MacAddress{}, processing_delay});
    cfg.nodes.push_back({NodeKind::Sink, "sink", MacAddress::parse(casestudy::kSinkMac), Duration{}});
    cfg.nodes.push_back({NodeKind::Controller, "ctrl", MacAddress{}, Duration{}});

    constexpr std::uint64_t kRate = 100'000'000;
    for (int i = 1; i <= 4; ++i) {
        cfg.links.push_back({"host" + std::to_string(i), "", "S1", "p" + std::to_string(i), kRate});
    }
    cfg.links.push_back({"S1", "trunk", "S2", "trunk", kRate});
    cfg.links.push_back({"S2", "psink", "sink", "", kRate});
    cfg.control_links.push_back({"ctrl", "S1", Duration{}});
    cfg.control_links.push_back({"ctrl", "S2", Duration{}});

    cfg.gcls.push_back({"S1", "*", "G:15;Y:860;R:125"});
    cfg.gcls.push_back({"S2", "*", "G:15;Y:860;R:125"});

    for (int i = 1; i <= 4; ++i) {
        FlowDecl f1;
        f1.switch_id = "S1";
        f1.entry.priority = 100;
        f1.entry.match.dst_mac = MacAddress::parse(host_dst(i));
        f1.entry.actions.push_back(FlowAction::output("trunk"));
        cfg.flows.push_back(std::move(f1));
        FlowDecl f2;
        f2.switch_id = "S2";
        f2.entry.priority = 100;
        f2.entry.match.dst_mac = MacAddress::parse(host_dst(i));
        f2.entry.actions.push_back(FlowAction::output("psink"));
        cfg.flows.push_back(std::move(f2));
    }

    auto source = [](const std::string& host, std::uint8_t pcp, std::uint32_t size,
                     Duration period, Duration jitter, SimTime start, const std::string& dst) {
        TrafficDecl t;
        t.host = host;
        t.source.flow_id = host;
        t.source.pcp = pcp;
        t.source.wire_size = size;
        t.source.period = period;
        t.source.jitter_stddev = jitter;
        t.source.start_at = start;
        t.source.dst_mac = MacAddress::parse(dst);
        return t;
    };
    cfg.traffic.push_back(source("host1", 0, 1522, microseconds(200), microseconds(20),
                                 SimTime{0}, host_dst(1)));
    cfg.traffic.push_back(source("host2", 2, 1522, microseconds(500), Duration{}, SimTime{0},
                                 host_dst(2)));
    cfg.traffic.push_back(source("host3", 6, 122, milliseconds(1), Duration{}, SimTime{0},
                                 host_dst(3)));
    cfg.traffic.push_back(source("host4", 7, 122, milliseconds(1), Duration{},
                                 SimTime{seconds(4).ns}, host_dst(4)));

    auto edit = [](std::int64_t at_s, const std::string& sw, const std::string& gcl) {
        TimelineAction a;
        a.at = SimTime{seconds(at_s).ns};
        a.kind = TimelineAction::Kind::EditGcl;
        a.switch_id = sw;
        a.gcl_text = gcl;
        return a;
    };
    auto inject = [](std::int64_t at_s, const std::string& sw) {
        TimelineAction a;
        a.at = SimTime{seconds(at_s).ns};
        a.kind = TimelineAction::Kind::InjectEditFailure;
        a.switch_id = sw;
        return a;
    };
    cfg.timeline.actions.push_back(edit(2, "S1", "R:10;G:15;Y:860;R:115"));
    cfg.timeline.actions.push_back(edit(2, "S2", "R:20;G:15;Y:860;R:105"));
    cfg.timeline.actions.push_back(inject(6, "S2"));
    cfg.timeline.actions.push_back(edit(6, "S1", "R:10;G:30;Y:845;R:115"));
    cfg.timeline.actions.push_back(edit(6, "S2", "R:20;G:30;Y:845;R:105"));
    cfg.timeline.actions.push_back(edit(8, "S2", "R:20;G:30;Y:845;R:105"));
    return cfg;
}

/// Stream-reservation walkthrough on the same topology: empty flow tables,
/// all gates open, one talker at host 3 and a listener at the sink. Stream
/// data starts only after signaling has long converged.
inline ScenarioConfig srp_scenario(std::uint64_t seed = 1) {
    using casestudy::host_mac;
    ScenarioConfig cfg;
    cfg.name = "srp-walkthrough";
    cfg.duration = milliseconds(100);
    cfg.seed = seed;
    cfg.policy = QbvPolicy::GateOpenAtStart;

    for (int i = 1; i <= 4; ++i) {
        cfg.nodes.push_back({NodeKind::Host, "host" + std::to_string(i),
                             MacAddress::parse(host_mac(i)), Duration{}});
    }
    cfg.nodes.push_back({NodeKind::Switch, "S1", MacAddress{}, Duration{}});
    cfg.nodes.push_back({NodeKind::Switch, "S2", MacAddress{}, Duration{}});
    cfg.nodes.push_back({NodeKind::Sink, "sink", MacAddress::parse(casestudy::kSinkMac), Duration{}});
    cfg.nodes.push_back({NodeKind::Controller, "ctrl", MacAddress{}, Duration{}});

    constexpr std::uint64_t kRate = 100'000'000;
    for (int i = 1; i <= 4; ++i) {
        cfg.links.push_back({"host" + std::to_string(i), "", "S1", "p" + std::to_string(i), kRate});
    }
    cfg.links.push_back({"S1", "trunk", "S2", "trunk", kRate});
    cfg.links.push_back({"S2", "psink", "sink", "", kRate});
    cfg.control_links.push_back({"ctrl", "S1", Duration{}});
    cfg.control_links.push_back({"ctrl", "S2", Duration{}});

    const std::string stream_dst = "01:00:5E:00:00:01";
    TalkerDecl talker;
    talker.host = "host3";
    talker.talker.stream_id = "s1";
    talker.talker.dst_mac = MacAddress::parse(stream_dst);
    talker.talker.pcp = 6;
    talker.talker.max_frame_size = 122;
    talker.talker.interval = milliseconds(1);
    talker.talker.advertise_at = SimTime{milliseconds(1).ns};
    cfg.talkers.push_back(std::move(talker));

    ListenerDecl listener;
    listener.host = "sink";
    listener.listener.stream_id = "s1";
    listener.listener.reply_delay = microseconds(100);
    cfg.listeners.push_back(std::move(listener));

    TrafficDecl data;
    data.host = "host3";
    data.source.flow_id = "stream-s1";
    data.source.pcp = 6;
    data.source.wire_size = 122;
    data.source.period = milliseconds(1);
    data.source.start_at = SimTime{milliseconds(50).ns};
    data.source.dst_mac = MacAddress::parse(stream_dst);
    cfg.traffic.push_back(std::move(data));
    return cfg;
}

/// Minimal default-drop check: one host, one switch with an empty flow
/// table, one sink. Every data frame must land in the miss counter.
inline ScenarioConfig default_drop_scenario() {
    ScenarioConfig cfg;
    cfg.name = "default-drop";
    cfg.duration = milliseconds(10);
    cfg.seed = 1;

    cfg.nodes.push_back({NodeKind::Host, "host1", MacAddress::parse(casestudy::host_mac(1)),
                         Duration{}});
    cfg.nodes.push_back({NodeKind::Switch, "S1", MacAddress{}, Duration{}});
    cfg.nodes.push_back({NodeKind::Sink, "sink", MacAddress::parse(casestudy::kSinkMac),
                         Duration{}});
    constexpr std::uint64_t kRate = 100'000'000;
    cfg.links.push_back({"host1", "", "S1", "p1", kRate});
    cfg.links.push_back({"S1", "psink", "sink", "", kRate});

    TrafficDecl t;
    t.host = "host1";
    t.source.flow_id = "host1";
    t.source.pcp = 0;
    t.source.wire_size = 200;
    t.source.period = milliseconds(1);
    t.source.dst_mac = MacAddress::parse(casestudy::kSinkMac);
    cfg.traffic.push_back(std::move(t));
    return cfg;
}

inline ScenarioConfig builtin_scenario(const std::string& name, std::uint64_t seed) {
    if (name == "case-study") return case_study_scenario(seed);
    if (name == "srp-walkthrough") return srp_scenario(seed);
    if (name == "default-drop") return default_drop_scenario();
    throw ConfigError("unknown built-in scenario '" + name + "'");
}

} // namespace gatesim
