// SPDX-License-Identifier: Apache-2.0
#include <catch2/catch_amalgamated.hpp>

#include "gatesim/launch_config.hpp"
#include "gatesim/switch.hpp"

using namespace gatesim;
using namespace gatesim::literals;

namespace {

SwitchConfig sample_config() {
    SwitchConfig cfg;
    cfg.policy = QbvPolicy::LengthAware;
    cfg.processing_delay = 4_us;
    cfg.port_gcls["p1"] = "R:10;G:15;Y:860;R:115";
    cfg.port_gcls["trunk"] = "G:15;Y:860;R:125";

    FlowEntry a;
    a.priority = 500;
    a.match.dst_mac = MacAddress::parse("01:00:5E:00:00:01");
    a.actions = {FlowAction::output("trunk"), FlowAction::output("p1")};
    cfg.flow_entries.push_back(a);

    FlowEntry b;
    b.priority = 10;
    b.match.in_port = "p1";
    b.match.ethertype = 0x0800;
    b.match.pcp = 6;
    b.actions = {FlowAction::to_controller()};
    cfg.flow_entries.push_back(b);

    FlowEntry c;
    c.priority = -1;
    c.actions = {FlowAction::drop()};
    cfg.flow_entries.push_back(c);

    SrTableEntry s1;
    s1.stream_id = "s1";
    s1.dst_mac = MacAddress::parse("01:00:5E:00:00:01");
    s1.pcp = 6;
    s1.talker_port = "p1";
    s1.listener_ports = {"trunk", "p1x"};
    cfg.sr_entries.push_back(s1);

    SrTableEntry s2;
    s2.stream_id = "s2";
    s2.dst_mac = MacAddress::parse("01:00:5E:00:00:02");
    s2.pcp = 7;
    s2.talker_port = "trunk";
    cfg.sr_entries.push_back(s2);
    return cfg;
}

} // namespace

TEST_CASE("switch config serialization round-trips byte-identically") {
    const SwitchConfig cfg = sample_config();
    const std::string text = serialize_switch_config(cfg);
    const SwitchConfig parsed = parse_switch_config(text);
    REQUIRE(serialize_switch_config(parsed) == text);

    REQUIRE(parsed.policy == QbvPolicy::LengthAware);
    REQUIRE(parsed.processing_delay == 4_us);
    REQUIRE(parsed.port_gcls == cfg.port_gcls);
    REQUIRE(parsed.flow_entries.size() == 3);
    REQUIRE(parsed.flow_entries[0].priority == 500);
    REQUIRE(parsed.flow_entries[0].match.dst_mac == MacAddress::parse("01:00:5E:00:00:01"));
    REQUIRE(parsed.flow_entries[0].actions.size() == 2);
    REQUIRE(parsed.flow_entries[2].priority == -1);
    REQUIRE(parsed.sr_entries.size() == 2);
    REQUIRE(parsed.sr_entries[0].listener_ports == std::set<std::string>{"p1x", "trunk"});
    REQUIRE(parsed.sr_entries[1].listener_ports.empty());
}

TEST_CASE("flow entry text covers wildcards and every action kind") {
    FlowEntry any;
    any.priority = 0;
    any.actions = {FlowAction::drop()};
    REQUIRE(serialize_flow_entry(any) == "entry priority=0 match any actions drop");

    const auto toks = detail::split_ws(
        "entry priority=500 match in_port=p2 dst_mac=01:00:5E:00:00:01 ethertype=0x22EA pcp=6"
        " actions output:trunk,to-controller,drop");
    const FlowEntry e = parse_flow_entry(toks);
    REQUIRE(e.priority == 500);
    REQUIRE(e.match.in_port == "p2");
    REQUIRE(e.match.ethertype == 0x22EA);
    REQUIRE(e.match.pcp == 6);
    REQUIRE(e.actions.size() == 3);
    REQUIRE(e.actions[0] == FlowAction::output("trunk"));
    REQUIRE(e.actions[1] == FlowAction::to_controller());
    REQUIRE(e.actions[2] == FlowAction::drop());
    REQUIRE(serialize_flow_entry(e) ==
            "entry priority=500 match in_port=p2 dst_mac=01:00:5E:00:00:01 ethertype=0x22EA pcp=6"
            " actions output:trunk,to-controller,drop");
}

TEST_CASE("comments and blank lines are ignored") {
    const std::string text =
        "# launch state\n"
        "[switch]\n"
        "policy gate-open-at-start\n"
        "\n"
        "processing_delay_ns 0\n"
        "[gcl]\n"
        "  # indented comment\n"
        "port p1 MFF:1000\n";
    const SwitchConfig cfg = parse_switch_config(text);
    REQUIRE(cfg.policy == QbvPolicy::GateOpenAtStart);
    REQUIRE(cfg.port_gcls.at("p1") == "MFF:1000");
}

TEST_CASE("malformed launch configs are rejected") {
    REQUIRE_THROWS_AS(parse_switch_config("policy x\n"), ConfigError);
    REQUIRE_THROWS_AS(parse_switch_config("[nope]\nx y\n"), ConfigError);
    REQUIRE_THROWS_AS(parse_switch_config("[switch]\npolicy wat\n"), ConfigError);
    REQUIRE_THROWS_AS(parse_switch_config("[gcl]\nport p1 Q:10\n"), ConfigError);
    REQUIRE_THROWS_AS(parse_switch_config("[flows]\nentry priority=1 match any actions fly\n"),
                      ConfigError);
    REQUIRE_THROWS_AS(parse_switch_config("[sr]\nstream id=s1\n"), ConfigError);
}

TEST_CASE("a switch exports its launch state and a fresh switch imports it") {
    SimEngine eng;
    Switch sw(eng, "S1");
    LinkDirection d1(eng, "a", 100000000), d2(eng, "b", 100000000);
    sw.add_port("p1", d1);
    sw.add_port("trunk", d2);
    sw.set_policy(QbvPolicy::LengthAware);
    sw.set_processing_delay(4_us);
    sw.set_initial_gcl("p1", "R:10;G:15;Y:860;R:115");
    sw.set_initial_gcl("trunk", "G:15;Y:860;R:125");
    FlowEntry e;
    e.priority = 500;
    e.match.dst_mac = MacAddress::parse("02:00:00:00:00:FF");
    e.actions = {FlowAction::output("trunk")};
    sw.flow_table().insert(std::move(e));

    const std::string text = serialize_switch_config(sw.export_launch_config());

    SimEngine eng2;
    Switch sw2(eng2, "S1b");
    LinkDirection e1(eng2, "a", 100000000), e2(eng2, "b", 100000000);
    sw2.add_port("p1", e1);
    sw2.add_port("trunk", e2);
    sw2.import_launch_config(parse_switch_config(text));
    REQUIRE(serialize_switch_config(sw2.export_launch_config()) == text);
    REQUIRE(sw2.policy() == QbvPolicy::LengthAware);
    REQUIRE(sw2.processing_delay() == 4_us);
    REQUIRE(sw2.flow_table().size() == 1);
    // The imported schedule is live, not only recorded in the datastore.
    REQUIRE(sw2.port("p1")->active_gcl() == parse_gcl("R:10;G:15;Y:860;R:115"));
}

TEST_CASE("import referencing a port the switch lacks is rejected atomically") {
    SimEngine eng;
    Switch sw(eng, "S1");
    LinkDirection d1(eng, "a", 100000000);
    sw.add_port("p1", d1);
    sw.set_initial_gcl("p1", "G:15;Y:860;R:125");

    SwitchConfig cfg;
    cfg.port_gcls["p1"] = "MFF:1000";
    cfg.port_gcls["ghost"] = "MFF:1000";
    REQUIRE_THROWS_AS(sw.import_launch_config(cfg), ConfigError);
    // Nothing was applied.
    REQUIRE(sw.datastore_text() == "port p1 G:15;Y:860;R:125\n");
}
