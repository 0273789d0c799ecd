#include <doctest.h>

#include <random>

#include "fixtures.hpp"
#include "graph.hpp"
#include "reduction.hpp"

using namespace rmpg;

namespace {

// Small graph: v0 with a self-loop carrying the given weights plus an exit
// to v1, which loops back with the optional second vector.
GameGraph two_vertex_graph(std::vector<std::int64_t> loop0, std::vector<std::int64_t> loop1) {
    std::uint32_t k = (std::uint32_t)loop0.size();
    std::vector<Vertex> vs(2);
    vs[0].label = "a";
    vs[1].label = "b";
    std::vector<Edge> es;
    es.push_back(Edge{0, 0, loop0, "loop"});
    es.push_back(Edge{0, 1, std::vector<std::int64_t>(k, 0), "go"});
    es.push_back(Edge{1, 0, loop1, "back"});
    return GameGraph(k, 0, {}, std::move(vs), std::move(es));
}

} // namespace

TEST_CASE("single-edge average equals its weight") {
    GameGraph g = two_vertex_graph({2, -1}, {0, 0});
    PlayPrefix p(g, 0);
    p.push(0);
    std::vector<Rational> avg = avg_prefix(p);
    CHECK(avg[0] == Rational(2));
    CHECK(avg[1] == Rational(-1));
}

TEST_CASE("two mixed edges average to a half each") {
    std::vector<Vertex> vs(2);
    std::vector<Edge> es{Edge{0, 1, {1, 0}, ""}, Edge{1, 0, {0, 1}, ""}};
    GameGraph g(2, 0, {}, std::move(vs), std::move(es));
    PlayPrefix p(g, 0, {0, 1});
    std::vector<Rational> avg = avg_prefix(p);
    CHECK(avg[0] == Rational(1, 2));
    CHECK(avg[1] == Rational(1, 2));
}

TEST_CASE("averaging the increment gadget loop four times") {
    DimensionLayout lay = DimensionLayout::for_counters(1);
    GameGraph g = two_vertex_graph(sim_loop_weights(lay, SimKind::Inc, StepDir::RightToLeft, 1),
                                   std::vector<std::int64_t>(8, 0));
    PlayPrefix p(g, 0, {0, 0, 0, 0});
    std::vector<Rational> avg = avg_prefix(p);
    CHECK(avg[lay.ell] == Rational(1));
    CHECK(avg[lay.r] == Rational(-1));
    CHECK(avg[lay.gs] == Rational(0));
    CHECK(avg[lay.cp(1)] == Rational(2));
    CHECK(avg[lay.cm(1)] == Rational(0));
    CHECK(avg[lay.gc] == Rational(-1));
    CHECK(avg[lay.x] == Rational(0));
    CHECK(avg[lay.y] == Rational(0));
}

TEST_CASE("empty prefix has no average") {
    GameGraph g = two_vertex_graph({0}, {0});
    PlayPrefix p(g, 0);
    CHECK_THROWS_AS(avg_prefix(p), std::domain_error);
}

TEST_CASE("incremental totals match recomputation") {
    GameGraph g = two_vertex_graph({1, -2, 3}, {-1, 5, 0});
    std::mt19937_64 rng(42);
    PlayPrefix p(g, 0);
    for (int i = 0; i < 500; ++i) {
        const auto& outs = g.out(p.current());
        p.push(outs[rng() % outs.size()]);
    }
    std::vector<std::int64_t> fresh(3, 0);
    for (std::uint32_t e : p.edges())
        for (std::size_t d = 0; d < 3; ++d) fresh[d] += g.edge(e).weights[d];
    CHECK(fresh == p.totals());
}

TEST_CASE("final-sink lasso limits") {
    ReductionOutput red = build_game(tests::halt_machine());
    std::uint32_t qf = 0;
    for (std::uint32_t v = 0; v < red.graph.vertices().size(); ++v)
        if (red.graph.vertex(v).tag.kind == GadgetKind::FinalSink) qf = v;
    PlayPrefix stem(red.graph, qf);
    PlayPrefix cycle(red.graph, qf, {*red.graph.self_loop(qf)});
    LimitVector lv = lasso_limits(stem, cycle);
    for (std::uint32_t d = 0; d < red.graph.dimensions(); ++d) {
        Rational expect = d == red.layout.x ? Rational(-1) : Rational(0);
        CHECK(lv.inf_avg[d] == expect);
        CHECK(lv.sup_avg[d] == expect);
    }
}

TEST_CASE("telescoping two-edge cycle has zero limit") {
    std::vector<Vertex> vs(2);
    std::vector<Edge> es{Edge{0, 1, {1}, ""}, Edge{1, 0, {-1}, ""}};
    GameGraph g(1, 0, {}, std::move(vs), std::move(es));
    PlayPrefix stem(g, 0);
    PlayPrefix cycle(g, 0, {0, 1});
    LimitVector lv = lasso_limits(stem, cycle);
    CHECK(lv.inf_avg[0] == Rational(0));
    CHECK(lv.sup_avg[0] == Rational(0));
}

TEST_CASE("lasso limits ignore the stem") {
    GameGraph g = two_vertex_graph({3, -4}, {7, 9});
    PlayPrefix cycle(g, 0, {0});
    LimitVector no_stem = lasso_limits(PlayPrefix(g, 0), cycle);
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        PlayPrefix stem(g, 0);
        int hops = 1 + (int)(rng() % 10);
        for (int i = 0; i < hops; ++i) {
            // wander but end back at vertex 0
            stem.push(1);
            stem.push(2);
        }
        for (int i = 0; i < (int)(rng() % 5); ++i) stem.push(0);
        LimitVector with_stem = lasso_limits(stem, cycle);
        CHECK(with_stem.inf_avg == no_stem.inf_avg);
        CHECK(with_stem.sup_avg == no_stem.sup_avg);
    }
}

TEST_CASE("lasso rejects open cycles and disconnected stems") {
    GameGraph g = two_vertex_graph({1}, {1});
    PlayPrefix open_path(g, 0, {1});  // ends at vertex 1
    CHECK_THROWS_AS(lasso_limits(PlayPrefix(g, 0), open_path), std::invalid_argument);
    PlayPrefix cycle(g, 0, {0});
    PlayPrefix bad_stem(g, 0, {1});  // ends at 1, cycle starts at 0
    CHECK_THROWS_AS(lasso_limits(bad_stem, cycle), std::invalid_argument);
}

TEST_CASE("estimates on a constant loop are flat") {
    GameGraph g = two_vertex_graph({5, -3}, {0, 0});
    PlayPrefix p(g, 0);
    for (int i = 0; i < 64; ++i) p.push(0);
    LimitEstimate est = estimate_limits(p, {1, 2, 4, 8, 16, 32, 64});
    CHECK(est.running_min[0] == Rational(5));
    CHECK(est.running_max[0] == Rational(5));
    CHECK(est.running_min[1] == Rational(-3));
    CHECK(est.running_max[1] == Rational(-3));
}

TEST_CASE("estimates approach the sink average from above") {
    // stem of zero-weight rounds, then a -1 loop: Avg_x(n) = -(n - n0)/n
    std::vector<Vertex> vs(2);
    std::vector<Edge> es{Edge{0, 0, {0}, ""}, Edge{0, 1, {0}, ""}, Edge{1, 1, {-1}, ""}};
    GameGraph g(1, 0, {}, std::move(vs), std::move(es));
    PlayPrefix p(g, 0);
    const std::int64_t n0 = 10;
    for (int i = 0; i < n0 - 1; ++i) p.push(0);
    p.push(1);
    for (int i = 0; i < 1000 - n0; ++i) p.push(2);
    std::vector<std::int64_t> cps{16, 64, 256, 1000};
    LimitEstimate est = estimate_limits(p, cps);
    Rational prev(1);
    for (std::size_t i = 0; i < cps.size(); ++i) {
        Rational expect(-(cps[i] - n0), cps[i]);
        CHECK(est.averages[i][0] == expect);
        CHECK(est.averages[i][0] < prev);  // strictly decreasing toward -1
        prev = est.averages[i][0];
    }
    CHECK(est.running_min[0] == est.averages.back()[0]);
}

TEST_CASE("estimate edge cases") {
    GameGraph g = two_vertex_graph({1}, {1});
    PlayPrefix p(g, 0, {0, 0});
    CHECK(estimate_limits(p, {}).averages.empty());
    CHECK_THROWS_AS(estimate_limits(p, {3}), std::out_of_range);
    CHECK_THROWS_AS(estimate_limits(p, {0}), std::out_of_range);
}

TEST_CASE("graph jsonl round trip preserves structure and tags") {
    ReductionOutput red = build_game(tests::loop_machine());
    std::string text = graph_to_jsonl(red.graph, red.condition.str());
    std::string cond;
    GameGraph back = graph_from_jsonl(text, &cond);
    CHECK(cond == red.condition.str());
    CHECK(back.dimensions() == red.graph.dimensions());
    CHECK(back.initial() == red.graph.initial());
    CHECK(back.vertices().size() == red.graph.vertices().size());
    CHECK(back.edges().size() == red.graph.edges().size());
    for (std::uint32_t v = 0; v < back.vertices().size(); ++v) {
        CHECK(back.vertex(v).owner == red.graph.vertex(v).owner);
        CHECK(back.vertex(v).tag.kind == red.graph.vertex(v).tag.kind);
        CHECK(back.vertex(v).tag.role == red.graph.vertex(v).tag.role);
        CHECK(back.vertex(v).tag.instance == red.graph.vertex(v).tag.instance);
    }
    for (std::uint32_t e = 0; e < back.edges().size(); ++e) {
        CHECK(back.edge(e).weights == red.graph.edge(e).weights);
        CHECK(back.edge(e).tag == red.graph.edge(e).tag);
    }
}

TEST_CASE("dot export clusters gadget instances") {
    ReductionOutput red = build_game(tests::loop_machine());
    std::string dot = graph_to_dot(red.graph);
    CHECK(dot.find("subgraph cluster_0") != std::string::npos);
    CHECK(dot.find("shape=box") != std::string::npos);
    CHECK(dot.find("shape=circle") != std::string::npos);
}

TEST_CASE("graphs without outgoing edges are rejected") {
    std::vector<Vertex> vs(2);
    std::vector<Edge> es{Edge{0, 1, {0}, ""}};
    CHECK_THROWS_AS(GameGraph(1, 0, {}, std::move(vs), std::move(es)), std::invalid_argument);
}
