// SPDX-License-Identifier: Apache-2.0
#include <catch2/catch_amalgamated.hpp>

#include <optional>
#include <vector>

#include "gatesim/switch.hpp"

using namespace gatesim;
using namespace gatesim::literals;

namespace {

struct SwitchRig {
    SimEngine eng;
    Switch sw{eng, "S1"};
    LinkDirection out_a{eng, "S1:pa->x", 100000000};
    LinkDirection out_b{eng, "S1:pb->y", 100000000};
    std::vector<std::pair<std::string, SimTime>> deliveries;

    SwitchRig() {
        sw.add_port("pa", out_a);
        sw.add_port("pb", out_b);
        out_a.connect([this](const Frame&) { deliveries.emplace_back("pa", eng.now()); });
        out_b.connect([this](const Frame&) { deliveries.emplace_back("pb", eng.now()); });
    }

    Frame frame(const std::string& dst, std::uint8_t pcp = 6) {
        Frame f;
        f.src_mac = MacAddress::parse("02:00:00:00:00:01");
        f.dst_mac = MacAddress::parse(dst);
        f.pcp = pcp;
        f.wire_size = 122;
        f.flow_id = "t";
        return f;
    }

    FlowEntry to_port(const std::string& dst, std::vector<FlowAction> actions,
                      int priority = 100) {
        FlowEntry e;
        e.priority = priority;
        e.match.dst_mac = MacAddress::parse(dst);
        e.actions = std::move(actions);
        return e;
    }
};

} // namespace

TEST_CASE("relay runs lookup after the processing delay and egresses the frame") {
    SwitchRig rig;
    rig.sw.set_processing_delay(4_us);
    rig.sw.flow_table().insert(rig.to_port("02:00:00:00:00:FF", {FlowAction::output("pa")}));
    rig.eng.schedule(SimTime{1000}, [&] {
        rig.sw.relay(rig.frame("02:00:00:00:00:FF"), "pb");
    });
    rig.eng.run_until(1_ms);
    // 1 us in + 4 us pipeline + 9.76 us serialization on an open gate.
    REQUIRE(rig.deliveries ==
            std::vector<std::pair<std::string, SimTime>>{{"pa", SimTime{14760}}});
    REQUIRE(rig.sw.counters().processed == 1);
    REQUIRE(rig.sw.counters().copies_enqueued == 1);
    REQUIRE(rig.sw.counters().total_drops() == 0);
}

TEST_CASE("table miss drops the frame") {
    SwitchRig rig;
    rig.eng.schedule(SimTime{0}, [&] { rig.sw.relay(rig.frame("02:00:00:00:00:FF"), "pb"); });
    rig.eng.run_until(1_ms);
    REQUIRE(rig.deliveries.empty());
    REQUIRE(rig.sw.counters().table_miss_drops == 1);
    REQUIRE(rig.sw.counters().processed == 1);
}

TEST_CASE("multi-output fan-out copies the frame and counts the duplicates") {
    SwitchRig rig;
    rig.sw.flow_table().insert(rig.to_port(
        "01:00:5E:00:00:01", {FlowAction::output("pa"), FlowAction::output("pb")}));
    rig.eng.schedule(SimTime{0}, [&] { rig.sw.relay(rig.frame("01:00:5E:00:00:01"), "pb"); });
    rig.eng.run_until(1_ms);
    REQUIRE(rig.deliveries.size() == 2);
    REQUIRE(rig.sw.counters().copies_enqueued == 2);
    REQUIRE(rig.sw.counters().duplicated == 1);
}

TEST_CASE("explicit drop action and unknown output port are accounted") {
    SwitchRig rig;
    rig.sw.flow_table().insert(rig.to_port("02:00:00:00:00:02", {FlowAction::drop()}));
    rig.sw.flow_table().insert(rig.to_port("02:00:00:00:00:03", {FlowAction::output("nope")}));
    rig.eng.schedule(SimTime{0}, [&] {
        rig.sw.relay(rig.frame("02:00:00:00:00:02"), "pa");
        rig.sw.relay(rig.frame("02:00:00:00:00:03"), "pa");
    });
    rig.eng.run_until(1_ms);
    REQUIRE(rig.deliveries.empty());
    REQUIRE(rig.sw.counters().action_drops == 1);
    REQUIRE(rig.sw.counters().unknown_port_drops == 1);
}

TEST_CASE("srp frames bypass the flow table and punt to the controller") {
    SwitchRig rig;
    ControlChannel ch(rig.eng, "S1");
    rig.sw.attach_channel(ch);
    std::optional<OpenFlowMsg> seen;
    ch.connect_controller([&](const ControlMsg& m) { seen = std::get<OpenFlowMsg>(m); });
    // A drop-everything entry must not catch the signaling frame.
    FlowEntry drop_all;
    drop_all.priority = 1000;
    drop_all.actions = {FlowAction::drop()};
    rig.sw.flow_table().insert(std::move(drop_all));

    rig.eng.schedule(SimTime{0}, [&] {
        Frame f = rig.frame("01:00:5E:00:00:01");
        f.ethertype = kSrpEthertype;
        f.srp = SrpMessage{SrpKind::TalkerAdvertise, "s1", f.dst_mac, 6, 122, 1_ms};
        rig.sw.relay(std::move(f), "pa");
    });
    rig.eng.run_until(1_ms);
    REQUIRE(seen.has_value());
    REQUIRE(seen->kind == OpenFlowKind::PacketIn);
    REQUIRE(seen->in_port == "pa");
    REQUIRE(seen->frame.srp.has_value());
    REQUIRE(rig.sw.counters().punted == 1);
    REQUIRE(rig.sw.counters().processed == 0);
}

TEST_CASE("punt without a controller channel is a counted drop") {
    SwitchRig rig;
    rig.eng.schedule(SimTime{0}, [&] {
        Frame f = rig.frame("01:00:5E:00:00:01");
        f.ethertype = kSrpEthertype;
        f.srp = SrpMessage{SrpKind::TalkerAdvertise, "s1", f.dst_mac, 6, 122, 1_ms};
        rig.sw.relay(std::move(f), "pa");
    });
    rig.eng.run_until(1_ms);
    REQUIRE(rig.sw.counters().no_controller_drops == 1);
    REQUIRE(rig.sw.counters().punted == 0);
}

TEST_CASE("netconf serves get-config from the canonical datastore") {
    SwitchRig rig;
    rig.sw.set_initial_gcl("pa", "G:15;Y:860;R:125");
    // No hello yet: rpcs are refused.
    auto refused = rig.sw.netconf_handle(
        NetconfMsg::rpc(1, NetconfOp{NetconfOpKind::GetConfig, "running", {}}));
    REQUIRE_FALSE(refused.ok);
    REQUIRE(rig.sw.netconf_handle(NetconfMsg::hello()).kind == NetconfKind::Hello);

    auto reply = rig.sw.netconf_handle(
        NetconfMsg::rpc(2, NetconfOp{NetconfOpKind::GetConfig, "running", {}}));
    REQUIRE(reply.ok);
    REQUIRE(reply.id == 2);
    REQUIRE(reply.data == "port pa G:15;Y:860;R:125\n");

    auto bad_store = rig.sw.netconf_handle(
        NetconfMsg::rpc(3, NetconfOp{NetconfOpKind::GetConfig, "candidate", {}}));
    REQUIRE_FALSE(bad_store.ok);
}

TEST_CASE("edit-config is atomic across ports") {
    SwitchRig rig;
    rig.sw.set_initial_gcl("pa", "G:15;Y:860;R:125");
    rig.sw.set_initial_gcl("pb", "G:15;Y:860;R:125");
    rig.sw.netconf_handle(NetconfMsg::hello());
    const std::string before = rig.sw.datastore_text();

    SECTION("one malformed entry rejects the whole edit") {
        NetconfOp op{NetconfOpKind::EditConfig, "running",
                     {{"pa", "R:10;G:15;Y:860;R:115"}, {"pb", "G:0;Y:1000"}}};
        auto reply = rig.sw.netconf_handle(NetconfMsg::rpc(5, op));
        REQUIRE_FALSE(reply.ok);
        REQUIRE(rig.sw.datastore_text() == before);
        REQUIRE_FALSE(rig.sw.port("pa")->has_pending());
    }
    SECTION("an unknown port rejects the whole edit") {
        NetconfOp op{NetconfOpKind::EditConfig, "running",
                     {{"pa", "R:10;G:15;Y:860;R:115"}, {"nope", "MFF:1000"}}};
        auto reply = rig.sw.netconf_handle(NetconfMsg::rpc(6, op));
        REQUIRE_FALSE(reply.ok);
        REQUIRE(rig.sw.datastore_text() == before);
        REQUIRE_FALSE(rig.sw.port("pa")->has_pending());
    }
    SECTION("a subset edit touches only the named port") {
        NetconfOp op{NetconfOpKind::EditConfig, "running", {{"pa", "R:10;G:15;Y:860;R:115"}}};
        auto reply = rig.sw.netconf_handle(NetconfMsg::rpc(7, op));
        REQUIRE(reply.ok);
        REQUIRE(rig.sw.datastore_text() ==
                "port pa R:10;G:15;Y:860;R:115\nport pb G:15;Y:860;R:125\n");
        REQUIRE(rig.sw.port("pa")->has_pending());
        REQUIRE_FALSE(rig.sw.port("pb")->has_pending());
    }
}

TEST_CASE("an armed failure rejects exactly the next edit") {
    SwitchRig rig;
    rig.sw.set_initial_gcl("pa", "G:15;Y:860;R:125");
    rig.sw.netconf_handle(NetconfMsg::hello());
    rig.sw.arm_edit_failure();
    REQUIRE(rig.sw.edit_failure_armed());

    NetconfOp op{NetconfOpKind::EditConfig, "running", {{"pa", "R:10;G:15;Y:860;R:115"}}};
    auto failed = rig.sw.netconf_handle(NetconfMsg::rpc(8, op));
    REQUIRE_FALSE(failed.ok);
    REQUIRE(failed.error == "simulated configuration failure");
    REQUIRE(rig.sw.datastore_text() == "port pa G:15;Y:860;R:125\n");
    REQUIRE_FALSE(rig.sw.edit_failure_armed());

    auto retried = rig.sw.netconf_handle(NetconfMsg::rpc(9, op));
    REQUIRE(retried.ok);
    REQUIRE(rig.sw.datastore_text() == "port pa R:10;G:15;Y:860;R:115\n");
    // get-config is never affected by arming.
    rig.sw.arm_edit_failure();
    auto got = rig.sw.netconf_handle(
        NetconfMsg::rpc(10, NetconfOp{NetconfOpKind::GetConfig, "running", {}}));
    REQUIRE(got.ok);
    REQUIRE(rig.sw.edit_failure_armed());
}

TEST_CASE("runtime edits take effect at the old schedule's cycle boundary") {
    SwitchRig rig;
    rig.sw.set_initial_gcl("pa", "G:15;Y:860;R:125");
    rig.sw.netconf_handle(NetconfMsg::hello());
    rig.eng.schedule(SimTime{2000300000}, [&] {
        NetconfOp op{NetconfOpKind::EditConfig, "running", {{"pa", "R:10;G:15;Y:860;R:115"}}};
        REQUIRE(rig.sw.netconf_handle(NetconfMsg::rpc(11, op)).ok);
        REQUIRE(rig.sw.port("pa")->pending_activation() == SimTime{2001000000});
    });
    rig.eng.run_until(SimTime{2000300000});
}

TEST_CASE("launch-time setters refuse to run after the simulation starts") {
    SwitchRig rig;
    rig.eng.schedule(SimTime{5}, [] {});
    rig.eng.run_until(SimTime{5});
    REQUIRE_THROWS_AS(rig.sw.set_initial_gcl("pa", "MFF:1000"), ConfigError);
    REQUIRE_THROWS_AS(rig.sw.set_processing_delay(1_us), ConfigError);
    REQUIRE_THROWS_AS(rig.sw.set_policy(QbvPolicy::LengthAware), ConfigError);
    REQUIRE_THROWS_AS(rig.sw.import_launch_config(SwitchConfig{}), ConfigError);
}
