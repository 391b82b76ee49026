// SPDX-License-Identifier: Apache-2.0
#include <catch2/catch_amalgamated.hpp>

#include <vector>

#include "gatesim/engine.hpp"

using namespace gatesim;
using namespace gatesim::literals;

TEST_CASE("events fire in time order regardless of scheduling order") {
    SimEngine eng;
    std::vector<int> order;
    eng.schedule(SimTime{30}, [&] { order.push_back(3); });
    eng.schedule(SimTime{10}, [&] { order.push_back(1); });
    eng.schedule(SimTime{20}, [&] { order.push_back(2); });
    eng.run_until(SimTime{100});
    REQUIRE(order == std::vector<int>{1, 2, 3});
    REQUIRE(eng.executed_events() == 3);
}

TEST_CASE("same-instant events fire in scheduling order") {
    SimEngine eng;
    std::vector<int> order;
    eng.schedule(SimTime{5}, [&] { order.push_back(1); });
    eng.schedule(SimTime{5}, [&] { order.push_back(2); });
    eng.schedule(SimTime{5}, [&] { order.push_back(3); });
    eng.run_until(SimTime{5});
    REQUIRE(order == std::vector<int>{1, 2, 3});
}

TEST_CASE("run_until horizon is inclusive and pending events survive") {
    SimEngine eng;
    int fired = 0;
    eng.schedule(SimTime{100}, [&] { ++fired; });
    eng.schedule(SimTime{101}, [&] { ++fired; });
    eng.run_until(SimTime{100});
    REQUIRE(fired == 1);
    REQUIRE(eng.now() == SimTime{100});
    REQUIRE(eng.pending_events() == 1);
    eng.run_until(SimTime{101});
    REQUIRE(fired == 2);
}

TEST_CASE("handlers may schedule follow-up events at the current instant") {
    SimEngine eng;
    std::vector<int> order;
    eng.schedule(SimTime{10}, [&] {
        order.push_back(1);
        eng.schedule(eng.now(), [&] { order.push_back(2); });
    });
    eng.schedule(SimTime{10}, [&] { order.push_back(3); });
    eng.run_until(SimTime{10});
    // The follow-up was scheduled after event 3, so it fires last.
    REQUIRE(order == std::vector<int>{1, 3, 2});
}

TEST_CASE("scheduling in the past is rejected") {
    SimEngine eng;
    eng.schedule(SimTime{10}, [] {});
    eng.run_until(SimTime{10});
    REQUIRE_THROWS_AS(eng.schedule(SimTime{9}, [] {}), ModelFault);
}

TEST_CASE("schedule_after offsets from now") {
    SimEngine eng;
    SimTime fired_at{};
    eng.schedule(SimTime{10}, [&] {
        eng.schedule_after(5_us, [&] { fired_at = eng.now(); });
    });
    eng.run_until(1_ms);
    REQUIRE(fired_at == SimTime{10} + 5_us);
}
