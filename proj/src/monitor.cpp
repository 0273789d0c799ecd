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

#include "monitor.hpp"

#include <cstdlib>
#include <sstream>
#include <stdexcept>

namespace rmpg {

std::string MonitorReport::text() const {
    std::ostringstream out;
    out << id << " (" << title << "): ";
    if (!applicable)
        out << "vacuous";
    else if (pass)
        out << "pass, " << checks << " checks";
    else
        out << "FAIL at round " << first_failure->round << ": " << first_failure->what;
    for (const auto& n : notes) out << "\n  note: " << n;
    return out.str();
}

namespace {

Side arrived_side(const GameGraph& g, std::uint32_t vertex) {
    const VertexTag& t = g.vertex(vertex).tag;
    if (t.kind == GadgetKind::FinalSink) return Side::Left;
    return t.dir == StepDir::LeftToRight ? Side::Left : Side::Right;
}

/// The two side dimensions from the point of view of a state's side: the
/// charged one carries ~|g_s|, the other ~0.
struct SideDims {
    std::uint32_t charged;
    std::uint32_t other;
};

SideDims side_dims(const DimensionLayout& lay, Side side) {
    return side == Side::Left ? SideDims{lay.ell, lay.r} : SideDims{lay.r, lay.ell};
}

/// Left-right invariant at a step boundary, tolerance eps.
bool side_invariant_holds(const PlayTracker& tr, Side side, const Rational& eps) {
    const DimensionLayout& lay = *tr.layout();
    std::int64_t S = tr.sim().gs_abs;
    SideDims d = side_dims(lay, side);
    Rational Sq(S);
    Rational charged(tr.total(d.charged));
    Rational other(tr.total(d.other));
    if (charged < (Rational(1) - eps) * Sq || charged > (Rational(1) + eps) * Sq) return false;
    if (other < -(eps * Sq) || other > eps * Sq) return false;
    return true;
}

/// Walks a record through a fresh tracker, invoking fn after every advance.
template <typename Fn>
void walk(const PlayRecord& rec, Fn&& fn) {
    if (!rec.graph) throw std::domain_error("empty play record");
    PlayTracker tr(*rec.graph);
    for (std::size_t i = 0; i < rec.edges.size(); ++i) {
        std::uint32_t src = tr.vertex();
        StepEvents ev = tr.advance(rec.edges[i]);
        fn(tr, ev, (std::int64_t)i + 1, src);
    }
}

struct Failure {
    MonitorReport* rep;

    void record(std::int64_t round, const std::string& what) {
        rep->pass = false;
        if (!rep->first_failure) rep->first_failure = CheckFailure{round, what};
    }

    void check(bool ok, std::int64_t round, const char* what, const Rational& lhs,
               const Rational& rhs) {
        ++rep->checks;
        if (!ok) record(round, std::string(what) + ": " + lhs.str() + " vs " + rhs.str());
    }
};

/// Shared per-invocation hypothesis state for the referee-side checks. The
/// certified delta and gamma constants are only guaranteed once the full
/// reset work was done: guard averages at -1/2, the eps/4 ratio bounds,
/// and the guard magnitude floor the referee establishes.
struct InvocationGates {
    bool guard_ok = false;   // both guard averages at or below -1/2 at entry
    bool reset_ok = false;   // the full referee reset invariant set at entry
    bool lr_ok = false;      // side invariants held at every boundary so far

    void on_entry(const PlayTracker& tr, const RefereeParams& params) {
        const DimensionLayout& lay = *tr.layout();
        guard_ok = tr.avg(lay.gs) <= Rational(-1, 2) && tr.avg(lay.gc) <= Rational(-1, 2);
        Rational lo = Rational(1) - params.epsilon / Rational(4);
        Rational hi = Rational(1) + params.epsilon / Rational(4);
        Rational S(tr.sim().gs_abs);
        Rational C(tr.sim().gc_abs);
        bool ratios = true;
        Rational ell(tr.total(lay.ell));
        Rational r(tr.total(lay.r));
        if (ell < lo * S || ell > hi * S) ratios = false;
        if (r.abs() > params.epsilon / Rational(4) * S) ratios = false;
        for (int j = 1; j <= lay.counter_count; ++j) {
            Rational cp(tr.total(lay.cp(j)));
            Rational cm(tr.total(lay.cm(j)));
            if (cp < lo * C || cp > hi * C || cm < lo * C || cm > hi * C) ratios = false;
        }
        reset_ok = guard_ok && ratios && tr.sim().gs_abs >= params.min_guard;
        lr_ok = true;
    }

    /// Call at every boundary (entry or completed step); degrades lr_ok.
    void on_boundary(const PlayTracker& tr, const Rational& eps) {
        if (lr_ok && !side_invariant_holds(tr, arrived_side(tr.graph(), tr.vertex()), eps))
            lr_ok = false;
    }
};

} // namespace

MonitorReport check_L1(const PlayRecord& rec, const RefereeParams& params) {
    MonitorReport rep;
    rep.id = "L1";
    rep.title = "guard average decay";
    Failure f{&rep};
    InvocationGates gates;
    walk(rec, [&](const PlayTracker& tr, const StepEvents& ev, std::int64_t round, std::uint32_t) {
        if (!tr.layout()) return;
        const DimensionLayout& lay = *tr.layout();
        if (ev.sim_entered) {
            gates.on_entry(tr, params);
            gates.on_boundary(tr, params.epsilon);
        } else if (ev.step_completed) {
            gates.on_boundary(tr, params.epsilon);
        }
        if (!tr.sim().active || !gates.reset_ok || !gates.lr_ok) return;
        std::int64_t steps = tr.sim().shadow.steps;
        bool in_scope = steps < params.halt_bound ||
                        (ev.step_completed && steps == params.halt_bound);
        if (!in_scope) return;
        rep.applicable = true;
        Rational avg = tr.avg(lay.gs);
        f.check(avg <= -params.delta, round, "Avg(gs) above -delta", avg, -params.delta);
    });
    return rep;
}

namespace {

struct BlameEpisode {
    bool active = false;
    bool genuine = false;
    GadgetKind kind = GadgetKind::None;
    int counter = 0;
    std::int64_t entered = 0;
};

MonitorReport check_blame_payoff(const PlayRecord& rec, const RefereeParams& params,
                                 bool side_kind) {
    MonitorReport rep;
    rep.id = side_kind ? "L2" : "L5";
    rep.title = side_kind ? "side-blame payoff" : "counter-blame payoff";
    Failure f{&rep};
    InvocationGates gates;
    BlameEpisode ep;
    walk(rec, [&](const PlayTracker& tr, const StepEvents& ev, std::int64_t round,
                  std::uint32_t src) {
        if (!tr.layout()) return;
        const DimensionLayout& lay = *tr.layout();
        if (ev.sim_entered) {
            gates.on_entry(tr, params);
            gates.on_boundary(tr, params.epsilon);
        } else if (ev.step_completed) {
            gates.on_boundary(tr, params.epsilon);
        }
        if (ev.blame_entered) {
            const VertexTag& bt = tr.graph().vertex(tr.vertex()).tag;
            const VertexTag& ct = tr.graph().vertex(src).tag;  // the deciding check vertex
            ep.active = true;
            ep.kind = bt.kind;
            ep.counter = bt.counter;
            ep.entered = round;
            bool within = tr.sim().shadow.steps < params.halt_bound;
            bool violated = false;
            if (ct.role == VertexRole::SideCheck) {
                Side side = ct.dir == StepDir::LeftToRight ? Side::Right : Side::Left;
                violated = !side_invariant_holds(tr, side, params.epsilon);
            } else if (ct.role == VertexRole::CounterCheckPos) {
                violated = tr.sim().shadow.counters.at((std::size_t)ct.counter - 1) > 0;
            } else if (ct.role == VertexRole::CounterCheckNeg) {
                violated = tr.sim().shadow.counters.at((std::size_t)ct.counter - 1) < 0;
            }
            ep.genuine = violated && within && gates.reset_ok && gates.lr_ok;
            return;
        }
        if (ev.blame_exited && ep.active) {
            bool is_side = ep.kind == GadgetKind::BlameLeftToRight ||
                           ep.kind == GadgetKind::BlameRightToLeft;
            if (is_side == side_kind && ep.genuine) {
                rep.applicable = true;
                if (side_kind) {
                    const Rational& g = params.gamma_side;
                    Rational a_ell = tr.avg(lay.ell);
                    Rational a_r = tr.avg(lay.r);
                    f.check(a_ell <= -g || a_r <= -g, round,
                            "neither side average at or below -gamma_side",
                            a_ell < a_r ? a_ell : a_r, -g);
                    Rational a_gs = tr.avg(lay.gs);
                    Rational a_gc = tr.avg(lay.gc);
                    f.check(a_gs <= -g, round, "Avg(gs) above -gamma_side", a_gs, -g);
                    f.check(a_gc <= -g, round, "Avg(gc) above -gamma_side", a_gc, -g);
                } else {
                    const Rational& g = params.gamma_counter;
                    std::uint32_t punished = ep.kind == GadgetKind::BlameCounterPos
                                                 ? lay.cm(ep.counter)
                                                 : lay.cp(ep.counter);
                    Rational a_p = tr.avg(punished);
                    f.check(a_p <= -g, round, "punished counter average above -gamma_counter",
                            a_p, -g);
                    Rational a_gs = tr.avg(lay.gs);
                    Rational a_gc = tr.avg(lay.gc);
                    f.check(a_gs <= -g, round, "Avg(gs) above -gamma_counter", a_gs, -g);
                    f.check(a_gc <= -g, round, "Avg(gc) above -gamma_counter", a_gc, -g);
                }
            }
            ep = BlameEpisode{};
        }
    });
    return rep;
}

} // namespace

MonitorReport check_L2(const PlayRecord& rec, const RefereeParams& params) {
    return check_blame_payoff(rec, params, true);
}

MonitorReport check_L5(const PlayRecord& rec, const RefereeParams& params) {
    return check_blame_payoff(rec, params, false);
}

MonitorReport check_L3(const PlayRecord& rec, const RefereeParams& params) {
    MonitorReport rep;
    rep.id = "L3";
    rep.title = "sim loop-length band";
    Failure f{&rep};
    InvocationGates gates;
    walk(rec, [&](const PlayTracker& tr, const StepEvents& ev, std::int64_t round, std::uint32_t) {
        if (!tr.layout()) return;
        bool lr_ok_at_phase_end = gates.lr_ok;  // boundaries strictly before this phase
        if (ev.sim_entered) {
            gates.on_entry(tr, params);
            gates.on_boundary(tr, params.epsilon);
            return;
        }
        if (ev.phase_completed && tr.sim().active && lr_ok_at_phase_end) {
            rep.applicable = true;
            Rational S(tr.sim().gs_abs);
            Rational len(ev.phase_loops);
            Rational lo = S * (Rational(1) - Rational(2) * params.epsilon);
            Rational hi = S * (Rational(1) + Rational(2) * params.epsilon);
            f.check(len >= lo && len <= hi, round, "loop phase outside the band", len, S);
        }
        if (ev.step_completed) gates.on_boundary(tr, params.epsilon);
    });
    return rep;
}

MonitorReport check_L4(const PlayRecord& rec, const RefereeParams& params) {
    MonitorReport rep;
    rep.id = "L4";
    rep.title = "counter drift bound";
    Failure f{&rep};
    InvocationGates gates;
    walk(rec, [&](const PlayTracker& tr, const StepEvents& ev, std::int64_t round, std::uint32_t) {
        if (!tr.layout()) return;
        const DimensionLayout& lay = *tr.layout();
        if (ev.sim_entered) {
            gates.on_entry(tr, params);
            gates.on_boundary(tr, params.epsilon);
        } else if (ev.step_completed) {
            gates.on_boundary(tr, params.epsilon);
        } else {
            return;  // step boundaries only
        }
        if (!tr.sim().active || !gates.reset_ok || !gates.lr_ok) return;
        if (tr.sim().shadow.steps > params.halt_bound) return;
        rep.applicable = true;
        Rational S(tr.sim().gs_abs);
        Rational C(std::llabs(tr.total(lay.gc)));
        Rational slack = C * (Rational(1) + params.epsilon) + S / Rational(2);
        for (int j = 1; j <= lay.counter_count; ++j) {
            const MachineShadow& sh = tr.sim().shadow;
            Rational drift = Rational(sh.incs[(std::size_t)j - 1] - sh.decs[(std::size_t)j - 1]) * S;
            Rational cp(tr.total(lay.cp(j)));
            Rational cm(tr.total(lay.cm(j)));
            f.check(cp <= slack + drift, round, "cp above its drift bound", cp, slack + drift);
            f.check(cm <= slack - drift, round, "cm above its drift bound", cm, slack - drift);
        }
    });
    return rep;
}

MonitorReport check_L6(const PlayRecord& rec) {
    MonitorReport rep;
    rep.id = "L6";
    rep.title = "honest-strategy lower bounds";
    Failure f{&rep};
    walk(rec, [&](const PlayTracker& tr, const StepEvents& ev, std::int64_t round, std::uint32_t) {
        if (!tr.layout()) return;
        if (!ev.sim_entered && !ev.step_completed) return;
        if (!tr.sim().active) return;
        rep.applicable = true;
        const DimensionLayout& lay = *tr.layout();
        Rational eps_i(1, tr.reset_visits() + 10);
        Rational S(tr.sim().gs_abs);
        SideDims d = side_dims(lay, arrived_side(tr.graph(), tr.vertex()));
        Rational charged(tr.total(d.charged));
        Rational other(tr.total(d.other));
        f.check(charged >= (Rational(1) - eps_i) * S, round, "charged side dim too small",
                charged, (Rational(1) - eps_i) * S);
        f.check(other >= -(eps_i * S), round, "off side dim too negative", other, -(eps_i * S));
        Rational C(std::llabs(tr.total(lay.gc)));
        const MachineShadow& sh = tr.sim().shadow;
        for (int j = 1; j <= lay.counter_count; ++j) {
            Rational drift = Rational(sh.incs[(std::size_t)j - 1] - sh.decs[(std::size_t)j - 1]) * S;
            Rational cp(tr.total(lay.cp(j)));
            Rational cm(tr.total(lay.cm(j)));
            f.check(cp >= (Rational(1) - eps_i) * C + drift, round, "cp below its floor", cp,
                    (Rational(1) - eps_i) * C + drift);
            f.check(cm >= (Rational(1) - eps_i) * C - drift, round, "cm below its floor", cm,
                    (Rational(1) - eps_i) * C - drift);
        }
    });
    return rep;
}

MonitorReport check_L7(const PlayRecord& rec) {
    MonitorReport rep;
    rep.id = "L7";
    rep.title = "blame tradeoff";
    Failure f{&rep};
    bool in_blame = false;
    GadgetKind kind = GadgetKind::None;
    int counter = 0;
    walk(rec, [&](const PlayTracker& tr, const StepEvents& ev, std::int64_t round, std::uint32_t) {
        if (!tr.layout()) return;
        const DimensionLayout& lay = *tr.layout();
        if (ev.blame_entered) {
            in_blame = true;
            const VertexTag& t = tr.graph().vertex(tr.vertex()).tag;
            kind = t.kind;
            counter = t.counter;
            rep.applicable = true;
        }
        if (!in_blame) return;
        std::uint32_t punished, guard;
        switch (kind) {
            case GadgetKind::BlameRightToLeft: punished = lay.ell; guard = lay.gs; break;
            case GadgetKind::BlameLeftToRight: punished = lay.r; guard = lay.gs; break;
            case GadgetKind::BlameCounterNeg: punished = lay.cp(counter); guard = lay.gc; break;
            case GadgetKind::BlameCounterPos: punished = lay.cm(counter); guard = lay.gc; break;
            default: return;
        }
        Rational eps_i(1, tr.reset_visits() + 10);
        Rational a_p = tr.avg(punished);
        if (a_p <= -eps_i) {
            Rational a_g = tr.avg(guard);
            f.check(a_g >= -eps_i, round, "guard average low while punished average low", a_g,
                    -eps_i);
        }
        if (ev.blame_exited) in_blame = false;
    });
    return rep;
}

std::vector<MonitorReport> run_monitors(const PlayRecord& rec,
                                        const std::vector<std::string>& ids,
                                        const std::optional<RefereeParams>& params) {
    std::vector<MonitorReport> out;
    for (const std::string& id : ids) {
        if (id == "L6") {
            out.push_back(check_L6(rec));
            continue;
        }
        if (id == "L7") {
            out.push_back(check_L7(rec));
            continue;
        }
        if (!params)
            throw std::invalid_argument("check " + id + " needs --halt-bound for its constants");
        if (id == "L1") out.push_back(check_L1(rec, *params));
        else if (id == "L2") out.push_back(check_L2(rec, *params));
        else if (id == "L3") out.push_back(check_L3(rec, *params));
        else if (id == "L4") out.push_back(check_L4(rec, *params));
        else if (id == "L5") out.push_back(check_L5(rec, *params));
        else throw std::invalid_argument("unknown check id '" + id + "'");
    }
    return out;
}

RoundInvariantReport check_round_invariant(const PlayRecord& rec, const Rational& delta) {
    RoundInvariantReport rep;
    rep.delta = delta;
    if (!rec.graph) throw std::domain_error("empty play record");
    std::optional<DimensionLayout> lay = DimensionLayout::from_graph(*rec.graph);
    if (!lay) throw std::invalid_argument("round invariant needs a compiled game graph");
    // visit count whose tolerance 1/(i+10) first reaches delta
    std::int64_t needed_visits = (Rational(1) / delta).ceil() - 10;
    if (needed_visits < 1) needed_visits = 1;

    std::vector<bool> ok;
    ok.reserve(rec.edges.size());
    std::optional<std::int64_t> anchor;
    // The guard arms carry a memory: a blame that drove a side (counter)
    // average below -delta left its guard average above -delta at the
    // exit, and the following reset pulls the guard back down before the
    // punished dimension has diluted. The exit value is the witness the
    // lim-sup argument consumes.
    bool side_exit_ok = false;
    bool counter_exit_ok = false;
    walk(rec, [&](const PlayTracker& tr, const StepEvents& ev, std::int64_t round,
                  std::uint32_t src) {
        if (ev.sim_entered && !anchor && tr.reset_visits() >= needed_visits) anchor = round;
        if (ev.blame_exited) {
            GadgetKind kind = tr.graph().vertex(src).tag.kind;
            if (kind == GadgetKind::BlameLeftToRight || kind == GadgetKind::BlameRightToLeft)
                side_exit_ok = tr.avg(lay->gs) >= -delta;
            else
                counter_exit_ok = tr.avg(lay->gc) >= -delta;
        }
        bool side = (tr.avg(lay->ell) >= -delta && tr.avg(lay->r) >= -delta) ||
                    tr.avg(lay->gs) >= -delta || side_exit_ok;
        bool counters = tr.avg(lay->gc) >= -delta || counter_exit_ok;
        if (!counters) {
            counters = true;
            for (int j = 1; j <= lay->counter_count && counters; ++j)
                if (tr.avg(lay->cp(j)) < -delta || tr.avg(lay->cm(j)) < -delta) counters = false;
        }
        ok.push_back(side && counters);
    });
    std::int64_t horizon = (std::int64_t)ok.size();
    if (anchor) {
        rep.anchor_round = anchor;
        rep.stable_from = *anchor;
    } else {
        std::int64_t last_bad = 0;
        for (std::int64_t r = horizon; r >= 1; --r)
            if (!ok[(std::size_t)r - 1]) {
                last_bad = r;
                break;
            }
        rep.stable_from = last_bad + 1;
        rep.pass = rep.stable_from <= horizon / 2;
        rep.checked_rounds = horizon - rep.stable_from + 1;
        return rep;
    }
    for (std::int64_t r = *anchor; r <= horizon; ++r) {
        ++rep.checked_rounds;
        if (!ok[(std::size_t)r - 1]) {
            ++rep.violations;
            if (rep.first_violation < 0) rep.first_violation = r;
        }
    }
    rep.pass = rep.violations == 0;
    return rep;
}

std::string RoundInvariantReport::text() const {
    std::ostringstream out;
    out << "tolerance " << delta.str() << ": ";
    if (anchor_round)
        out << "anchored at round " << *anchor_round;
    else
        out << "visit target not reached; stable from round " << stable_from;
    out << ", checked " << checked_rounds << " rounds, ";
    if (pass)
        out << "pass";
    else
        out << "FAIL (" << violations << " violations, first at " << first_violation << ")";
    return out.str();
}

} // namespace rmpg
