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

#include "strategy.hpp"

#include <cstdlib>
#include <random>
#include <stdexcept>

namespace rmpg {

RefereeParams RefereeParams::for_bound(std::int64_t n) {
    if (n <= 10) throw std::invalid_argument("halt bound must exceed 10");
    RefereeParams p;
    p.halt_bound = n;
    p.epsilon = Rational(1, (n + 1) * (n + 1));
    Rational N(n);
    p.delta_stated = Rational(1) / (Rational(1, 2) + N * (Rational(1) + Rational(2) * p.epsilon));
    p.delta = Rational(1) / (Rational(2) + N * (Rational(1) + Rational(4) * p.epsilon));
    Rational inv_delta = Rational(1) / p.delta;
    Rational side_a = (p.epsilon / Rational(2)) / (inv_delta + p.epsilon / Rational(2));
    Rational side_b = (p.epsilon / Rational(8)) / (Rational(1) + inv_delta);
    p.gamma_side = side_a < side_b ? side_a : side_b;
    Rational counter_a(1, 20 * n);
    Rational counter_b = p.delta / Rational(9);
    p.gamma_counter = counter_a < counter_b ? counter_a : counter_b;
    p.min_guard = 8 * (n + 1) * (n + 1);
    return p;
}

namespace {

std::uint32_t edge_with_tag(const PlayTracker& st, const std::string& tag) {
    const GameGraph& g = st.graph();
    for (std::uint32_t e : g.out(st.vertex()))
        if (g.edge(e).tag == tag) return e;
    throw std::logic_error("no edge tagged '" + tag + "' at vertex " +
                           std::to_string(st.vertex()));
}

std::uint32_t loop_edge(const PlayTracker& st) {
    auto e = st.graph().self_loop(st.vertex());
    if (!e) throw std::logic_error("vertex has no self-loop");
    return *e;
}

std::uint32_t only_edge_or_throw(const PlayTracker& st, const std::string& who) {
    const auto& outs = st.graph().out(st.vertex());
    if (outs.size() == 1) return outs[0];
    throw std::logic_error(who + " asked to move at an unsupported vertex " +
                           std::to_string(st.vertex()));
}

const DimensionLayout& layout_or_throw(const PlayTracker& st, const std::string& who) {
    if (!st.layout()) throw std::logic_error(who + " needs a compiled game graph");
    return *st.layout();
}

std::int64_t abs_total(const PlayTracker& st, std::uint32_t dim) {
    return std::llabs(st.total(dim));
}

// Shared shape of the reset stopping rules: the ratio invariants against
// the guard magnitudes plus the guard averages projected to the moment the
// play will reach the sim gadget if nobody loops any more.
bool reset_ratios_hold(const PlayTracker& st, const Rational& quarter_tol,
                       std::int64_t wiring_ahead) {
    const DimensionLayout& lay = *st.layout();
    std::int64_t S = abs_total(st, lay.gs);
    std::int64_t C = abs_total(st, lay.gc);
    if (S == 0 || C == 0) return false;
    if (st.total(lay.gs) > 0 || st.total(lay.gc) > 0) return false;
    std::int64_t projected = st.round() + wiring_ahead;
    if (2 * S < projected || 2 * C < projected) return false;
    Rational lo = Rational(1) - quarter_tol;
    Rational hi = Rational(1) + quarter_tol;
    Rational ell(st.total(lay.ell));
    Rational r(st.total(lay.r));
    Rational Sq(S), Cq(C);
    if (ell < lo * Sq || ell > hi * Sq) return false;
    if (r.abs() > quarter_tol * Sq) return false;
    for (int j = 1; j <= lay.counter_count; ++j) {
        Rational cp(st.total(lay.cp(j)));
        Rational cm(st.total(lay.cm(j)));
        if (cp < lo * Cq || cp > hi * Cq) return false;
        if (cm < lo * Cq || cm > hi * Cq) return false;
    }
    return true;
}

class TauStrategy : public Strategy {
  public:
    std::uint32_t choose(const PlayTracker& st) override {
        const Vertex& v = st.graph().vertex(st.vertex());
        switch (v.tag.role) {
            case VertexRole::ResetSecond:
                return st.total(layout_or_throw(st, name()).y) < 0 ? loop_edge(st)
                                                                   : edge_with_tag(st, "advance");
            case VertexRole::ResetThird:
                return reset_done(st) ? edge_with_tag(st, "fresh-sim") : loop_edge(st);
            case VertexRole::SimLoop: {
                std::int64_t target = loop_target(st);
                return st.loops_in_phase() < target ? loop_edge(st) : edge_with_tag(st, "exit");
            }
            case VertexRole::Declare: return declare(st, v.tag);
            case VertexRole::Sink: return loop_edge(st);
            default: return only_edge_or_throw(st, name());
        }
    }

    bool committed_to_self_loop(const PlayTracker& st) const override {
        return st.graph().vertex(st.vertex()).tag.role == VertexRole::Sink;
    }

    std::string name() const override { return "tau"; }

  protected:
    virtual std::int64_t loop_target(const PlayTracker& st) {
        return abs_total(st, layout_or_throw(st, name()).gs);
    }

    virtual std::uint32_t declare(const PlayTracker& st, const VertexTag& tag) {
        return honest_declaration(st, tag);
    }

    std::uint32_t honest_declaration(const PlayTracker& st, const VertexTag& tag) {
        std::int64_t c = st.sim().shadow.counters.at((std::size_t)tag.counter - 1);
        return edge_with_tag(st, c == 0 ? "declare-zero" : "declare-pos");
    }

  private:
    bool reset_done(const PlayTracker& st) const {
        const DimensionLayout& lay = *st.layout();
        if (st.total(lay.x) < 0) return false;
        Rational tol(1, 4 * (st.reset_visits() + 10));
        return reset_ratios_hold(st, tol, 1);
    }
};

class RefereeStrategy final : public Strategy {
  public:
    explicit RefereeStrategy(const RefereeParams& params) : params_(params) {}

    std::uint32_t choose(const PlayTracker& st) override {
        const Vertex& v = st.graph().vertex(st.vertex());
        const VertexTag& tag = v.tag;
        switch (tag.role) {
            case VertexRole::ResetFirst:
                return reset_done(st) ? edge_with_tag(st, "advance") : loop_edge(st);
            case VertexRole::SideCheck: {
                std::optional<std::int64_t> plan = side_violation_plan(st, tag.dir);
                if (plan) {
                    planned_loops_ = *plan;
                    return edge_with_tag(st, "blame");
                }
                return edge_with_tag(st, "ok");
            }
            case VertexRole::CounterCheckPos:
            case VertexRole::CounterCheckNeg: {
                std::int64_t c = st.sim().shadow.counters.at((std::size_t)tag.counter - 1);
                bool lie = tag.role == VertexRole::CounterCheckPos ? c > 0 : c < 0;
                if (lie) {
                    planned_loops_ = counter_blame_plan(st);
                    return edge_with_tag(st, "blame");
                }
                return edge_with_tag(st, "ok");
            }
            case VertexRole::BlameLoop:
                return st.loops_in_phase() < planned_loops_ ? loop_edge(st)
                                                            : edge_with_tag(st, "reset");
            case VertexRole::Sink: return loop_edge(st);
            default: return only_edge_or_throw(st, name());
        }
    }

    bool committed_to_self_loop(const PlayTracker& st) const override {
        return st.graph().vertex(st.vertex()).tag.role == VertexRole::Sink;
    }

    std::string name() const override { return "referee"; }

  private:
    bool reset_done(const PlayTracker& st) const {
        const DimensionLayout& lay = layout_or_throw(st, "referee");
        if (abs_total(st, lay.gs) < params_.min_guard) return false;
        return reset_ratios_hold(st, params_.epsilon / Rational(4), 3);
    }

    // Classifies a violated side invariant at the state just entered and
    // prescribes the blame-loop length. The first gadget state after a
    // left-to-right move is a right state, so the transferred dimension is
    // r; a right-to-left move charges ell.
    std::optional<std::int64_t> side_violation_plan(const PlayTracker& st, StepDir dir) const {
        const DimensionLayout& lay = layout_or_throw(st, "referee");
        std::int64_t S = abs_total(st, lay.gs);
        Rational Sq(S);
        Rational charged(st.total(dir == StepDir::LeftToRight ? lay.r : lay.ell));
        Rational other(st.total(dir == StepDir::LeftToRight ? lay.ell : lay.r));
        const Rational& eps = params_.epsilon;
        if (charged < (Rational(1) - eps) * Sq)
            return (Sq * (Rational(1) - eps / Rational(2))).floor();
        if (charged > (Rational(1) + eps) * Sq) return 2;
        if (other < -(eps * Sq)) return 2;
        if (other > eps * Sq) return (Sq * (Rational(1) - eps / Rational(4))).floor();
        return std::nullopt;
    }

    std::int64_t counter_blame_plan(const PlayTracker& st) const {
        const DimensionLayout& lay = layout_or_throw(st, "referee");
        Rational X(abs_total(st, lay.gc));
        Rational Y(abs_total(st, lay.gs));
        return (X * (Rational(1) + params_.epsilon) - Y / Rational(4)).ceil();
    }

    RefereeParams params_;
    std::int64_t planned_loops_ = 0;
};

class RandomStrategy final : public Strategy {
  public:
    explicit RandomStrategy(std::uint64_t seed) : rng_(seed) {}

    std::uint32_t choose(const PlayTracker& st) override {
        const auto& outs = st.graph().out(st.vertex());
        std::uniform_int_distribution<std::size_t> d(0, outs.size() - 1);
        return outs[d(rng_)];
    }

    std::string name() const override { return "random"; }

  private:
    std::mt19937_64 rng_;
};

class CheatZeroTest final : public TauStrategy {
  public:
    CheatZeroTest(std::int64_t step, bool claim_zero_when_positive)
        : step_(step), claim_zero_(claim_zero_when_positive) {}

    std::string name() const override {
        return claim_zero_ ? "cheat:zero-when-positive" : "cheat:positive-when-zero";
    }

  protected:
    std::uint32_t declare(const PlayTracker& st, const VertexTag& tag) override {
        if (st.sim().shadow.steps + 1 == step_) {
            std::int64_t c = st.sim().shadow.counters.at((std::size_t)tag.counter - 1);
            if (claim_zero_ && c > 0) return edge_with_tag(st, "declare-zero");
            if (!claim_zero_ && c == 0) return edge_with_tag(st, "declare-pos");
        }
        return honest_declaration(st, tag);
    }

  private:
    std::int64_t step_;
    bool claim_zero_;
};

class CheatLoop final : public TauStrategy {
  public:
    CheatLoop(std::int64_t step, bool overshoot) : step_(step), overshoot_(overshoot) {}

    std::string name() const override {
        return overshoot_ ? "cheat-loop:over" : "cheat-loop:under";
    }

  protected:
    std::int64_t loop_target(const PlayTracker& st) override {
        std::int64_t honest = TauStrategy::loop_target(st);
        if (st.sim().shadow.steps + 1 != step_) return honest;
        return overshoot_ ? 2 * honest : honest / 2;
    }

  private:
    std::int64_t step_;
    bool overshoot_;
};

class NeverBlame final : public Strategy {
  public:
    std::uint32_t choose(const PlayTracker& st) override {
        switch (st.graph().vertex(st.vertex()).tag.role) {
            case VertexRole::ResetFirst: return edge_with_tag(st, "advance");
            case VertexRole::SideCheck:
            case VertexRole::CounterCheckPos:
            case VertexRole::CounterCheckNeg: return edge_with_tag(st, "ok");
            case VertexRole::BlameLoop: return edge_with_tag(st, "reset");
            case VertexRole::Sink: return loop_edge(st);
            default: return only_edge_or_throw(st, name());
        }
    }

    bool committed_to_self_loop(const PlayTracker& st) const override {
        return st.graph().vertex(st.vertex()).tag.role == VertexRole::Sink;
    }

    std::string name() const override { return "never-blame"; }
};

class SpuriousBlame final : public Strategy {
  public:
    explicit SpuriousBlame(int mode) : mode_(mode) {}

    std::uint32_t choose(const PlayTracker& st) override {
        const VertexTag& tag = st.graph().vertex(st.vertex()).tag;
        switch (tag.role) {
            case VertexRole::ResetFirst: return edge_with_tag(st, "advance");
            case VertexRole::SideCheck:
                return edge_with_tag(st, st.sim().shadow.steps == 0 ? "blame" : "ok");
            case VertexRole::CounterCheckPos:
            case VertexRole::CounterCheckNeg: return edge_with_tag(st, "ok");
            case VertexRole::BlameLoop: {
                if (keep_looping(st, tag)) return loop_edge(st);
                return edge_with_tag(st, "reset");
            }
            case VertexRole::Sink: return loop_edge(st);
            default: return only_edge_or_throw(st, name());
        }
    }

    bool committed_to_self_loop(const PlayTracker& st) const override {
        return st.graph().vertex(st.vertex()).tag.role == VertexRole::Sink;
    }

    std::string name() const override { return "spurious:" + std::to_string(mode_); }

  private:
    bool keep_looping(const PlayTracker& st, const VertexTag& tag) const {
        switch (mode_) {
            case 0: return false;
            case 1: {
                std::int64_t entry_round = st.round() - st.loops_in_phase();
                return st.loops_in_phase() < entry_round;
            }
            default: {
                const DimensionLayout& lay = layout_or_throw(st, "spurious");
                std::uint32_t guard =
                    tag.kind == GadgetKind::BlameLeftToRight ||
                            tag.kind == GadgetKind::BlameRightToLeft
                        ? lay.gs
                        : lay.gc;
                return st.total(guard) < 0;
            }
        }
    }

    int mode_;
};

class MixedAdversary final : public Strategy {
  public:
    explicit MixedAdversary(std::uint64_t seed) : rng_(seed) {}

    std::uint32_t choose(const PlayTracker& st) override {
        const VertexTag& tag = st.graph().vertex(st.vertex()).tag;
        switch (tag.role) {
            case VertexRole::ResetFirst: {
                std::int64_t before = st.round() - st.loops_in_phase();
                if (st.loops_in_phase() < 2 * before + 2 && rng_() % 4 != 0)
                    return loop_edge(st);
                return edge_with_tag(st, "advance");
            }
            case VertexRole::SideCheck:
            case VertexRole::CounterCheckPos:
            case VertexRole::CounterCheckNeg:
                if (rng_() % 4 == 0) {
                    blame_target_ = -1;
                    return edge_with_tag(st, "blame");
                }
                return edge_with_tag(st, "ok");
            case VertexRole::BlameLoop: {
                if (blame_target_ < 0)
                    blame_target_ = (std::int64_t)(rng_() % (std::uint64_t)(st.round() + 1));
                if (st.loops_in_phase() < blame_target_) return loop_edge(st);
                blame_target_ = -1;
                return edge_with_tag(st, "reset");
            }
            case VertexRole::Sink: return loop_edge(st);
            default: return only_edge_or_throw(st, name());
        }
    }

    bool committed_to_self_loop(const PlayTracker& st) const override {
        return st.graph().vertex(st.vertex()).tag.role == VertexRole::Sink;
    }

    std::string name() const override { return "mixed"; }

  private:
    std::mt19937_64 rng_;
    std::int64_t blame_target_ = -1;
};

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        std::size_t p = s.find(sep, start);
        parts.push_back(s.substr(start, p - start));
        if (p == std::string::npos) break;
        start = p + 1;
    }
    return parts;
}

} // namespace

std::unique_ptr<Strategy> make_tau() { return std::make_unique<TauStrategy>(); }

std::unique_ptr<Strategy> make_referee(const RefereeParams& params) {
    return std::make_unique<RefereeStrategy>(params);
}

std::unique_ptr<Strategy> make_random(std::uint64_t seed) {
    return std::make_unique<RandomStrategy>(seed);
}

std::unique_ptr<Strategy> make_cheat_zero_test(std::int64_t step, bool claim_zero_when_positive) {
    return std::make_unique<CheatZeroTest>(step, claim_zero_when_positive);
}

std::unique_ptr<Strategy> make_cheat_loop(std::int64_t step, bool overshoot) {
    return std::make_unique<CheatLoop>(step, overshoot);
}

std::unique_ptr<Strategy> make_never_blame() { return std::make_unique<NeverBlame>(); }

std::unique_ptr<Strategy> make_spurious_blame(int mode) {
    return std::make_unique<SpuriousBlame>(mode);
}

std::unique_ptr<Strategy> make_mixed_adversary(std::uint64_t seed) {
    return std::make_unique<MixedAdversary>(seed);
}

std::unique_ptr<Strategy> make_strategy(const std::string& spec,
                                        std::optional<std::int64_t> halt_bound) {
    std::vector<std::string> parts = split(spec, ':');
    const std::string& head = parts[0];
    auto want = [&](std::size_t n) {
        if (parts.size() != n)
            throw std::invalid_argument("malformed strategy spec '" + spec + "'");
    };
    if (head == "tau") {
        want(1);
        return make_tau();
    }
    if (head == "referee") {
        want(1);
        if (!halt_bound)
            throw std::invalid_argument("the referee needs --halt-bound");
        return make_referee(RefereeParams::for_bound(*halt_bound));
    }
    if (head == "random") {
        want(2);
        return make_random(std::stoull(parts[1]));
    }
    if (head == "cheat") {
        want(3);
        std::int64_t step = std::stoll(parts[1]);
        if (parts[2] == "zero-when-positive") return make_cheat_zero_test(step, true);
        if (parts[2] == "positive-when-zero") return make_cheat_zero_test(step, false);
        throw std::invalid_argument("unknown cheat direction '" + parts[2] + "'");
    }
    if (head == "cheat-loop") {
        want(3);
        std::int64_t step = std::stoll(parts[1]);
        if (parts[2] == "over") return make_cheat_loop(step, true);
        if (parts[2] == "under") return make_cheat_loop(step, false);
        throw std::invalid_argument("unknown cheat-loop mode '" + parts[2] + "'");
    }
    if (head == "never-blame") {
        want(1);
        return make_never_blame();
    }
    if (head == "spurious") {
        want(2);
        return make_spurious_blame(std::stoi(parts[1]));
    }
    if (head == "mixed") {
        want(2);
        return make_mixed_adversary(std::stoull(parts[1]));
    }
    throw std::invalid_argument("unknown strategy '" + spec + "'");
}

} // namespace rmpg
