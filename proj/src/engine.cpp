/*
 * Copyright 2026 The rmpg authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "engine.hpp"

#include <algorithm>
#include <cstdlib>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace rmpg {

namespace {

bool is_sim_instance_kind(GadgetKind k) {
    return k == GadgetKind::SimNop || k == GadgetKind::SimInc || k == GadgetKind::SimDec ||
           k == GadgetKind::ZeroTest;
}

} // namespace

PlayTracker::PlayTracker(const GameGraph& g)
    : g_(&g),
      layout_(DimensionLayout::from_graph(g)),
      vertex_(g.initial()),
      totals_(g.dimensions(), 0) {
    if (g.vertex(vertex_).tag.role == VertexRole::ResetFirst) reset_visits_ = 1;
}

StepEvents PlayTracker::advance(std::uint32_t edge_index) {
    const Edge& e = g_->edge(edge_index);
    if (e.src != vertex_) throw std::invalid_argument("edge does not leave the current vertex");
    StepEvents ev;
    ++round_;
    for (std::size_t d = 0; d < totals_.size(); ++d) totals_[d] += e.weights[d];
    if (e.dst == e.src) {
        ++loops_in_phase_;
        return ev;
    }
    const VertexTag& st = g_->vertex(e.src).tag;
    const VertexTag& dt = g_->vertex(e.dst).tag;

    if (st.role == VertexRole::SimLoop) {
        ev.phase_completed = true;
        ev.phase_kind = st.kind;
        ev.phase_dir = st.dir;
        ev.phase_counter = st.counter;
        ev.phase_loops = loops_in_phase_;
    }
    if (sim_.active && st.instance != dt.instance && is_sim_instance_kind(st.kind) &&
        (is_sim_instance_kind(dt.kind) || dt.kind == GadgetKind::FinalSink)) {
        ++sim_.shadow.steps;
        ev.step_completed = true;
    }
    if (dt.role == VertexRole::BlameLoop) {
        ev.blame_entered = true;
        sim_.active = false;
    }
    if (dt.kind == GadgetKind::FinalSink) sim_.active = false;  // the machine halted
    if (st.role == VertexRole::BlameLoop) ev.blame_exited = true;
    if (dt.role == VertexRole::ResetFirst) {
        ++reset_visits_;
        ev.reset_entered = true;
        sim_.active = false;
    }
    if (st.role == VertexRole::ResetThird && layout_ && is_sim_instance_kind(dt.kind)) {
        sim_.active = true;
        sim_.entry_round = round_;
        sim_.gs_abs = std::llabs(totals_[layout_->gs]);
        sim_.gc_abs = std::llabs(totals_[layout_->gc]);
        sim_.shadow = MachineShadow{};
        ev.sim_entered = true;
    }
    if (!dt.machine_state.empty()) sim_.shadow.state = dt.machine_state;
    // Declared counter effects land when the gadget completes through its
    // side check, so the "counter < 0?" vertex of a zero test sees the
    // declared decrement and step boundaries see only finished gadgets.
    if (st.role == VertexRole::SideCheck && e.tag == "ok" && sim_.active && st.counter >= 1) {
        std::size_t j = (std::size_t)st.counter - 1;
        if (st.kind == GadgetKind::SimInc) {
            ++sim_.shadow.counters[j];
            ++sim_.shadow.incs[j];
        } else if (st.kind == GadgetKind::SimDec) {
            --sim_.shadow.counters[j];
            ++sim_.shadow.decs[j];
        }
    }
    vertex_ = e.dst;
    loops_in_phase_ = 0;
    return ev;
}

PlayRecord run_play(const GameGraph& g, Strategy& p1, Strategy& p2, std::int64_t horizon) {
    if (horizon < 1) throw std::invalid_argument("horizon must be at least 1");
    PlayRecord rec;
    rec.graph = &g;
    rec.horizon = horizon;
    rec.edges.reserve((std::size_t)horizon);
    PlayTracker tr(g);
    std::int64_t captive_since = -1;
    for (std::int64_t round = 1; round <= horizon; ++round) {
        std::uint32_t v = tr.vertex();
        Strategy& s = g.vertex(v).owner == Owner::P1 ? p1 : p2;
        std::uint32_t e = s.choose(tr);
        const auto& outs = g.out(v);
        if (std::find(outs.begin(), outs.end(), e) == outs.end())
            throw std::runtime_error("strategy '" + s.name() + "' returned a non-edge at vertex " +
                                     std::to_string(v));
        bool self = g.edge(e).dst == v;
        bool committed = self && (outs.size() == 1 || s.committed_to_self_loop(tr));
        if (committed) {
            if (captive_since < 0) captive_since = round;
        } else {
            captive_since = -1;
        }
        StepEvents ev = tr.advance(e);
        if (ev.blame_entered) ++rec.blame_count;
        rec.edges.push_back(e);
    }
    rec.reset_visits = tr.reset_visits();
    if (captive_since >= 0) {
        rec.lasso = true;
        rec.lasso_from = captive_since;
        rec.lasso_vertex = tr.vertex();
    }
    return rec;
}

OutcomeSummary summarize_outcome(const PlayRecord& rec, const Condition& condition) {
    if (!rec.graph || rec.edges.empty()) throw std::domain_error("empty play record");
    const GameGraph& g = *rec.graph;
    OutcomeSummary sum;
    sum.blame_count = rec.blame_count;
    sum.reset_visits = rec.reset_visits;
    if (rec.lasso) {
        sum.lasso = true;
        sum.lasso_label = g.vertex(rec.lasso_vertex).label;
        LimitVector lv;
        std::optional<std::uint32_t> loop = g.self_loop(rec.lasso_vertex);
        if (!loop) throw std::logic_error("lasso vertex without self-loop");
        for (std::int64_t w : g.edge(*loop).weights) {
            lv.inf_avg.push_back(Rational(w));
            lv.sup_avg.push_back(Rational(w));
        }
        sum.limits = lv;
        sum.condition_holds = eval_condition(condition, lv);
        return sum;
    }
    // No certified tail: estimate with running extremes over the second half.
    PlayPrefix prefix(g, g.initial(), rec.edges);
    std::vector<std::int64_t> cps;
    for (std::int64_t c : geometric_checkpoints(prefix.length()))
        if (2 * c >= prefix.length()) cps.push_back(c);
    LimitEstimate est = estimate_limits(prefix, cps);
    LimitVector lv;
    lv.inf_avg = est.running_min;
    lv.sup_avg = est.running_max;
    sum.estimate = lv;
    sum.condition_estimate = eval_condition(condition, lv);
    return sum;
}

std::string OutcomeSummary::text(const GameGraph&) const {
    std::ostringstream out;
    if (lasso) {
        out << "lasso at " << lasso_label << "; condition: "
            << (*condition_holds ? "true" : "false");
    } else {
        out << "no lasso detected; condition estimate (non-conclusive): "
            << (*condition_estimate ? "satisfied" : "violated")
            << " over the tail checkpoints";
    }
    out << "; blames: " << blame_count << "; reset visits: " << reset_visits;
    return out.str();
}

std::string trace_to_jsonl(const PlayRecord& rec) {
    const GameGraph& g = *rec.graph;
    PlayTracker tr(g);
    std::set<std::int64_t> cps;
    for (std::int64_t c : geometric_checkpoints(rec.horizon)) cps.insert(c);
    std::ostringstream out;
    for (std::size_t i = 0; i < rec.edges.size(); ++i) {
        const Edge& e = g.edge(rec.edges[i]);
        StepEvents ev = tr.advance(rec.edges[i]);
        bool boundary = ev.reset_entered || ev.sim_entered || ev.step_completed ||
                        ev.blame_entered || ev.blame_exited;
        std::int64_t round = (std::int64_t)i + 1;
        if (!boundary && !cps.count(round)) continue;
        nlohmann::json j = {{"round", round}, {"edge", rec.edges[i]}, {"tag", e.tag},
                            {"at", g.vertex(tr.vertex()).label}};
        if (boundary) {
            std::vector<std::string> events;
            if (ev.reset_entered) events.push_back("reset");
            if (ev.sim_entered) events.push_back("sim");
            if (ev.step_completed) events.push_back("step");
            if (ev.blame_entered) events.push_back("blame");
            if (ev.blame_exited) events.push_back("blame-exit");
            j["events"] = events;
        }
        j["totals"] = tr.totals();
        out << j.dump() << "\n";
    }
    return out.str();
}

} // namespace rmpg
