#include <doctest.h>

#include <map>

#include "engine.hpp"
#include "fixtures.hpp"
#include "monitor.hpp"
#include "reduction.hpp"
#include "strategy.hpp"

using namespace rmpg;

namespace {

constexpr std::int64_t kHorizon = 100000;
constexpr std::int64_t kBound = 11;

ReductionOutput compile_loop() { return build_game(tests::loop_machine()); }
ReductionOutput compile_halt() { return build_game(tests::halt_machine()); }

PlayRecord play(const ReductionOutput& red, const std::string& p1, const std::string& p2,
                std::int64_t horizon = kHorizon) {
    auto s1 = make_strategy(p1, kBound);
    auto s2 = make_strategy(p2, kBound);
    return run_play(red.graph, *s1, *s2, horizon);
}

// first round at which a blame-loop vertex is entered, with its kind
std::optional<std::pair<std::int64_t, GadgetKind>> first_blame(const PlayRecord& rec) {
    PlayTracker tr(*rec.graph);
    for (std::size_t i = 0; i < rec.edges.size(); ++i) {
        StepEvents ev = tr.advance(rec.edges[i]);
        if (ev.blame_entered)
            return std::make_pair((std::int64_t)i + 1, rec.graph->vertex(tr.vertex()).tag.kind);
    }
    return std::nullopt;
}

} // namespace

TEST_CASE("a one-vertex loop plays itself") {
    std::vector<Vertex> vs(1);
    vs[0].owner = Owner::P1;
    std::vector<Edge> es{Edge{0, 0, {1}, "loop"}};
    GameGraph g(1, 0, {}, std::move(vs), std::move(es));
    auto s1 = make_random(1);
    auto s2 = make_random(2);
    PlayRecord rec = run_play(g, *s1, *s2, 5);
    CHECK(rec.edges == std::vector<std::uint32_t>{0, 0, 0, 0, 0});
    CHECK(rec.lasso);  // out-degree one certifies the tail
    CHECK(rec.lasso_from == 1);
}

TEST_CASE("plays are deterministic given strategies and seeds") {
    ReductionOutput red = compile_loop();
    PlayRecord a = play(red, "tau", "referee", 20000);
    PlayRecord b = play(red, "tau", "referee", 20000);
    CHECK(a.edges == b.edges);
    PlayRecord c = play(red, "random:9", "mixed:4", 5000);
    PlayRecord d = play(red, "random:9", "mixed:4", 5000);
    CHECK(c.edges == d.edges);
}

TEST_CASE("random strategies take the only edge and split pairs evenly") {
    std::vector<Vertex> vs(2);
    vs[0].owner = Owner::P1;
    vs[1].owner = Owner::P1;
    std::vector<Edge> es{Edge{0, 1, {0}, "only"}, Edge{1, 0, {0}, "a"}, Edge{1, 1, {0}, "b"}};
    GameGraph g(1, 0, {}, std::move(vs), std::move(es));
    auto s1 = make_random(1234);
    auto s2 = make_random(5678);
    PlayRecord rec = run_play(g, *s1, *s2, 10000);
    std::map<std::uint32_t, std::int64_t> uses;
    std::int64_t at_pair = 0;
    PlayTracker tr(g);
    std::uint32_t v = tr.vertex();
    for (std::uint32_t e : rec.edges) {
        if (v == 0) CHECK(e == 0);  // single edge: no choice
        if (v == 1) {
            ++at_pair;
            ++uses[e];
        }
        tr.advance(e);
        v = tr.vertex();
    }
    REQUIRE(at_pair > 3000);
    for (auto& [e, n] : uses) {
        double freq = (double)n / (double)at_pair;
        CHECK(freq > 0.4);
        CHECK(freq < 0.6);
    }
}

TEST_CASE("honest play on the looping machine never gets blamed") {
    ReductionOutput red = compile_loop();
    PlayRecord rec = play(red, "tau", "referee");
    CHECK(rec.blame_count == 0);
    CHECK(rec.reset_visits == 1);
    CHECK_FALSE(rec.lasso);
    OutcomeSummary sum = summarize_outcome(rec, red.condition);
    REQUIRE(sum.condition_estimate.has_value());
    CHECK(*sum.condition_estimate);
}

TEST_CASE("honest play on the halting machine is trapped at the sink") {
    ReductionOutput red = compile_halt();
    PlayRecord rec = play(red, "tau", "referee");
    REQUIRE(rec.lasso);
    CHECK(rec.graph->vertex(rec.lasso_vertex).tag.kind == GadgetKind::FinalSink);
    CHECK(rec.blame_count == 0);
    OutcomeSummary sum = summarize_outcome(rec, red.condition);
    REQUIRE(sum.limits.has_value());
    CHECK(sum.limits->sup_avg[red.layout.x] == Rational(-1));
    CHECK(sum.limits->inf_avg[red.layout.x] == Rational(-1));
    for (std::uint32_t d = 0; d < red.graph.dimensions(); ++d)
        if (d != red.layout.x) CHECK(sum.limits->sup_avg[d] == Rational(0));
    REQUIRE(sum.condition_holds.has_value());
    CHECK_FALSE(*sum.condition_holds);
}

TEST_CASE("declared-zero lies are caught at the positive check") {
    ReductionOutput red = compile_loop();
    PlayRecord rec = play(red, "cheat:3:zero-when-positive", "referee");
    auto blame = first_blame(rec);
    REQUIRE(blame.has_value());
    CHECK(blame->second == GadgetKind::BlameCounterPos);
}

TEST_CASE("declared-positive lies are caught at the negative check") {
    ReductionOutput red = compile_loop();
    PlayRecord rec = play(red, "cheat:5:positive-when-zero", "referee");
    auto blame = first_blame(rec);
    REQUIRE(blame.has_value());
    CHECK(blame->second == GadgetKind::BlameCounterNeg);
}

TEST_CASE("loop overshoot and undershoot trigger the side blames") {
    ReductionOutput red = compile_loop();
    auto over = first_blame(play(red, "cheat-loop:1:over", "referee"));
    REQUIRE(over.has_value());
    CHECK(over->second == GadgetKind::BlameLeftToRight);
    auto under = first_blame(play(red, "cheat-loop:2:under", "referee"));
    REQUIRE(under.has_value());
    CHECK(under->second == GadgetKind::BlameRightToLeft);
}

TEST_CASE("a lie scheduled past the horizon leaves the play identical") {
    ReductionOutput red = compile_loop();
    PlayRecord honest = play(red, "tau", "referee", 30000);
    PlayRecord late = play(red, "cheat:1000000:zero-when-positive", "referee", 30000);
    CHECK(honest.edges == late.edges);
}

TEST_CASE("referee reset looping is minimal") {
    ReductionOutput red = compile_halt();
    const DimensionLayout& lay = red.layout;
    RefereeParams params = RefereeParams::for_bound(kBound);
    PlayRecord rec = play(red, "tau", "referee");
    // replay; at every advance out of the first reset vertex, verify the
    // referee's stopping predicate fails one loop earlier
    PlayTracker tr(*rec.graph);
    auto predicate = [&](std::vector<std::int64_t> t, std::int64_t rounds) {
        std::int64_t S = std::llabs(t[lay.gs]);
        std::int64_t C = std::llabs(t[lay.gc]);
        if (S < params.min_guard) return false;
        if (2 * S < rounds + 3 || 2 * C < rounds + 3) return false;
        Rational lo = Rational(1) - params.epsilon / Rational(4);
        Rational hi = Rational(1) + params.epsilon / Rational(4);
        if (Rational(t[lay.ell]) < lo * Rational(S)) return false;
        if (Rational(t[lay.ell]) > hi * Rational(S)) return false;
        if (Rational(t[lay.r]).abs() > params.epsilon / Rational(4) * Rational(S)) return false;
        for (int j = 1; j <= lay.counter_count; ++j) {
            if (Rational(t[lay.cp(j)]) < lo * Rational(C)) return false;
            if (Rational(t[lay.cp(j)]) > hi * Rational(C)) return false;
            if (Rational(t[lay.cm(j)]) < lo * Rational(C)) return false;
            if (Rational(t[lay.cm(j)]) > hi * Rational(C)) return false;
        }
        return true;
    };
    int advances = 0;
    for (std::uint32_t e : rec.edges) {
        const Edge& edge = rec.graph->edge(e);
        bool from_reset_first =
            rec.graph->vertex(edge.src).tag.role == VertexRole::ResetFirst && edge.src != edge.dst;
        if (from_reset_first) {
            ++advances;
            CHECK(predicate(tr.totals(), tr.round()));
            if (tr.loops_in_phase() > 0) {
                std::vector<std::int64_t> prev = tr.totals();
                const auto& w =
                    rec.graph->edge(*rec.graph->self_loop(edge.src)).weights;
                for (std::size_t d = 0; d < prev.size(); ++d) prev[d] -= w[d];
                CHECK_FALSE(predicate(prev, tr.round() - 1));
            }
        }
        tr.advance(e);
    }
    CHECK(advances >= 1);
}

TEST_CASE("tau leaves the second reset vertex within its entry bound") {
    ReductionOutput red = compile_loop();
    PlayRecord rec = play(red, "tau", "spurious:1", 60000);
    PlayTracker tr(*rec.graph);
    std::int64_t entry_round = -1;
    for (std::uint32_t e : rec.edges) {
        const Edge& edge = rec.graph->edge(e);
        const VertexTag& t = rec.graph->vertex(edge.src).tag;
        if (t.role == VertexRole::ResetSecond) {
            if (entry_round < 0) entry_round = tr.round() - tr.loops_in_phase();
            if (edge.src != edge.dst) {
                CHECK(tr.loops_in_phase() <= entry_round + 1);
                entry_round = -1;
            }
        }
        tr.advance(e);
    }
}

TEST_CASE("tau loops every sim phase for exactly the guard magnitude") {
    ReductionOutput red = compile_loop();
    PlayRecord rec = play(red, "tau", "referee", 60000);
    PlayTracker tr(*rec.graph);
    std::int64_t phases = 0;
    for (std::uint32_t e : rec.edges) {
        StepEvents ev = tr.advance(e);
        if (ev.phase_completed) {
            ++phases;
            CHECK(ev.phase_loops == tr.sim().gs_abs);
        }
    }
    CHECK(phases > 10);
}

TEST_CASE("two-counter honest play reaches its sink and passes the checks") {
    ReductionOutput red = build_game(tests::halt_machine2());
    RefereeParams params = RefereeParams::for_bound(kBound);
    PlayRecord rec = play(red, "tau", "referee");
    CHECK(rec.blame_count == 0);
    REQUIRE(rec.lasso);
    CHECK(rec.graph->vertex(rec.lasso_vertex).tag.kind == GadgetKind::FinalSink);
    for (MonitorReport& rep : run_monitors(rec, {"L1", "L3", "L4", "L6"}, params)) {
        CHECK(rep.applicable);
        CHECK(rep.pass);
    }
    OutcomeSummary sum = summarize_outcome(rec, red.condition);
    REQUIRE(sum.condition_holds.has_value());
    CHECK_FALSE(*sum.condition_holds);
}

TEST_CASE("two-counter cheats are blamed on the right counter") {
    ReductionOutput red = build_game(tests::loop_machine2());
    // step 5 is the second counter's zero test with its counter at one
    PlayRecord rec = play(red, "cheat:5:zero-when-positive", "referee");
    auto blame = first_blame(rec);
    REQUIRE(blame.has_value());
    CHECK(blame->second == GadgetKind::BlameCounterPos);
    PlayTracker tr(*rec.graph);
    for (std::size_t i = 0; i + 1 < (std::size_t)blame->first; ++i) tr.advance(rec.edges[i]);
    // the blame vertex belongs to counter 2
    const Edge& e = rec.graph->edge(rec.edges[(std::size_t)blame->first - 1]);
    CHECK(rec.graph->vertex(e.dst).tag.counter == 2);
    RefereeParams params = RefereeParams::for_bound(kBound);
    MonitorReport l5 = check_L5(rec, params);
    CHECK(l5.applicable);
    CHECK(l5.pass);
}

TEST_CASE("strategies must return edges of the current vertex") {
    struct Bad : Strategy {
        std::uint32_t choose(const PlayTracker&) override { return 99999; }
        std::string name() const override { return "bad"; }
    };
    ReductionOutput red = compile_loop();
    Bad bad;
    auto s2 = make_strategy("referee", kBound);
    // the horizon must outlast the referee's opening reset loops so that a
    // player-1 vertex is actually reached
    CHECK_THROWS_AS(run_play(red.graph, bad, *s2, 2000), std::runtime_error);
}

TEST_CASE("strategy specs are validated") {
    CHECK_THROWS_AS(make_strategy("nonsense", kBound), std::invalid_argument);
    CHECK_THROWS_AS(make_strategy("referee", std::nullopt), std::invalid_argument);
    CHECK_THROWS_AS(make_strategy("cheat:3:sideways", kBound), std::invalid_argument);
    CHECK_THROWS_AS(make_strategy("random", kBound), std::invalid_argument);
    CHECK(make_strategy("cheat-loop:2:under", kBound)->name() == "cheat-loop:under");
}

TEST_CASE("referee params reject small bounds and order their constants") {
    CHECK_THROWS_AS(RefereeParams::for_bound(10), std::invalid_argument);
    for (std::int64_t n : {11LL, 20LL, 100LL}) {
        RefereeParams p = RefereeParams::for_bound(n);
        CHECK(p.epsilon == Rational(1, (n + 1) * (n + 1)));
        CHECK(p.gamma_counter > Rational(0));
        CHECK(p.gamma_counter < p.delta);
        CHECK(p.gamma_side < p.delta);
        CHECK(p.delta < Rational(1, 2));
        CHECK(p.delta < p.delta_stated);
    }
}

TEST_CASE("summaries need a nonempty record") {
    ReductionOutput red = compile_loop();
    PlayRecord empty;
    empty.graph = &red.graph;
    CHECK_THROWS_AS(summarize_outcome(empty, red.condition), std::domain_error);
}
