#include <doctest.h>

#include "engine.hpp"
#include "fixtures.hpp"
#include "monitor.hpp"
#include "reduction.hpp"
#include "strategy.hpp"

using namespace rmpg;

namespace {

constexpr std::int64_t kBound = 11;

PlayRecord play(const ReductionOutput& red, const std::string& p1, const std::string& p2,
                std::int64_t horizon) {
    auto s1 = make_strategy(p1, kBound);
    auto s2 = make_strategy(p2, kBound);
    return run_play(red.graph, *s1, *s2, horizon);
}

} // namespace

TEST_CASE("honest play satisfies the referee-side checks") {
    ReductionOutput red = build_game(tests::loop_machine());
    RefereeParams params = RefereeParams::for_bound(kBound);
    PlayRecord rec = play(red, "tau", "referee", 100000);
    for (const char* id : {"L1", "L3", "L4"}) {
        auto reports = run_monitors(rec, {id}, params);
        REQUIRE(reports.size() == 1);
        CHECK(reports[0].applicable);
        CHECK(reports[0].pass);
    }
    MonitorReport l6 = check_L6(rec);
    CHECK(l6.applicable);
    CHECK(l6.pass);
    // no blames: the blame-side checks have nothing to say
    CHECK_FALSE(check_L2(rec, params).applicable);
    CHECK_FALSE(check_L5(rec, params).applicable);
    CHECK_FALSE(check_L7(rec).applicable);
}

TEST_CASE("skipping the reset loops leaves the decay check vacuous") {
    ReductionOutput red = build_game(tests::loop_machine());
    RefereeParams params = RefereeParams::for_bound(kBound);
    // the adversary rushes reset; player 1 random, so nobody restores the
    // guard averages before simulation starts
    auto s1 = make_random(5);
    auto s2 = make_never_blame();
    PlayRecord rec = run_play(red.graph, *s1, *s2, 4000);
    MonitorReport l1 = check_L1(rec, params);
    CHECK_FALSE(l1.applicable);
}

TEST_CASE("without the referee's reset work the certified checks are vacuous") {
    // the certified delta/gamma constants presuppose the full reset
    // invariant set including the guard floor; a rushed reset leaves them
    // with nothing to certify, while the loop band still holds exactly
    ReductionOutput red = build_game(tests::loop_machine());
    RefereeParams params = RefereeParams::for_bound(kBound);
    PlayRecord rec = play(red, "tau", "never-blame", 50000);
    CHECK_FALSE(check_L1(rec, params).applicable);
    CHECK_FALSE(check_L4(rec, params).applicable);
    MonitorReport l3 = check_L3(rec, params);
    CHECK(l3.applicable);
    CHECK(l3.pass);
}

TEST_CASE("counter cheats pass the counter-blame payoff check") {
    ReductionOutput red = build_game(tests::loop_machine());
    RefereeParams params = RefereeParams::for_bound(kBound);
    for (const char* cheat : {"cheat:3:zero-when-positive", "cheat:5:positive-when-zero"}) {
        PlayRecord rec = play(red, cheat, "referee", 100000);
        MonitorReport l5 = check_L5(rec, params);
        CHECK(l5.applicable);
        CHECK(l5.pass);
        CHECK_FALSE(check_L2(rec, params).applicable);
    }
}

TEST_CASE("loop cheats pass the side-blame payoff check and break the band") {
    ReductionOutput red = build_game(tests::loop_machine());
    RefereeParams params = RefereeParams::for_bound(kBound);
    for (const char* cheat : {"cheat-loop:1:over", "cheat-loop:2:under"}) {
        PlayRecord rec = play(red, cheat, "referee", 100000);
        MonitorReport l2 = check_L2(rec, params);
        CHECK(l2.applicable);
        CHECK(l2.pass);
        MonitorReport l3 = check_L3(rec, params);
        CHECK(l3.applicable);
        CHECK_FALSE(l3.pass);
        CHECK(l3.first_failure.has_value());
    }
}

TEST_CASE("spurious blames keep the tradeoff check green") {
    ReductionOutput red = build_game(tests::loop_machine());
    for (int mode : {0, 1, 2}) {
        PlayRecord rec = play(red, "tau", "spurious:" + std::to_string(mode), 100000);
        CHECK(rec.blame_count > 0);
        MonitorReport l7 = check_L7(rec);
        CHECK(l7.applicable);
        CHECK(l7.pass);
        MonitorReport l6 = check_L6(rec);
        CHECK(l6.applicable);
        CHECK(l6.pass);
    }
}

TEST_CASE("the round-level tolerance invariant anchors on the first cycle") {
    ReductionOutput red = build_game(tests::loop_machine());
    for (const char* p2 : {"never-blame", "spurious:2", "mixed:7"}) {
        PlayRecord rec = play(red, "tau", p2, 100000);
        RoundInvariantReport rep = check_round_invariant(rec, Rational(1, 11));
        INFO("adversary ", p2);
        CHECK(rep.anchor_round.has_value());
        CHECK(rep.pass);
        CHECK(rep.violations == 0);
    }
}

TEST_CASE("unknown or param-less checks are rejected") {
    ReductionOutput red = build_game(tests::loop_machine());
    PlayRecord rec = play(red, "tau", "never-blame", 2000);
    CHECK_THROWS_AS(run_monitors(rec, {"L9"}, RefereeParams::for_bound(kBound)),
                    std::invalid_argument);
    CHECK_THROWS_AS(run_monitors(rec, {"L1"}, std::nullopt), std::invalid_argument);
    // L6/L7 run without params
    CHECK(run_monitors(rec, {"L6", "L7"}, std::nullopt).size() == 2);
}

TEST_CASE("reports render rationals exactly") {
    ReductionOutput red = build_game(tests::loop_machine());
    RefereeParams params = RefereeParams::for_bound(kBound);
    PlayRecord rec = play(red, "cheat-loop:2:under", "referee", 100000);
    MonitorReport l3 = check_L3(rec, params);
    REQUIRE_FALSE(l3.pass);
    CHECK(l3.text().find("FAIL at round") != std::string::npos);
}
