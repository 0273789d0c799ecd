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

#include "reduction.hpp"

#include <map>
#include <stdexcept>

namespace rmpg {

std::uint32_t DimensionLayout::cp(int counter) const {
    if (counter < 1 || counter > counter_count) throw std::out_of_range("counter index");
    return 3 + 2 * (std::uint32_t)(counter - 1);
}

std::uint32_t DimensionLayout::cm(int counter) const { return cp(counter) + 1; }

DimensionLayout DimensionLayout::for_counters(int counter_count) {
    DimensionLayout lay;
    lay.counter_count = counter_count;
    if (counter_count == 1) {
        lay.k = 8;
        lay.gc = 5;
        lay.x = 6;
        lay.y = 7;
        lay.names = {"ell", "r", "gs", "cp", "cm", "gc", "x", "y"};
    } else if (counter_count == 2) {
        lay.k = 10;
        lay.gc = 7;
        lay.x = 8;
        lay.y = 9;
        lay.names = {"ell", "r", "gs", "cp1", "cm1", "cp2", "cm2", "gc", "x", "y"};
    } else {
        throw std::invalid_argument("layout supports one or two counters");
    }
    return lay;
}

std::optional<DimensionLayout> DimensionLayout::from_graph(const GameGraph& g) {
    for (int counters : {1, 2}) {
        DimensionLayout lay = for_counters(counters);
        if (g.dimensions() == lay.k && g.dim_names() == lay.names) return lay;
    }
    return std::nullopt;
}

std::vector<std::int64_t> sim_loop_weights(const DimensionLayout& lay, SimKind kind, StepDir dir,
                                           int counter) {
    std::vector<std::int64_t> w(lay.k, 0);
    if (dir == StepDir::LeftToRight) {
        w[lay.r] = 1;
        w[lay.ell] = -1;
    } else if (dir == StepDir::RightToLeft) {
        w[lay.r] = -1;
        w[lay.ell] = 1;
    } else {
        throw std::invalid_argument("sim gadget needs a direction");
    }
    w[lay.gc] = -1;
    for (int j = 1; j <= lay.counter_count; ++j) {
        w[lay.cp(j)] = 1;
        w[lay.cm(j)] = 1;
    }
    if (kind == SimKind::Inc) {
        w[lay.cp(counter)] = 2;
        w[lay.cm(counter)] = 0;
    } else if (kind == SimKind::Dec) {
        w[lay.cp(counter)] = 0;
        w[lay.cm(counter)] = 2;
    }
    return w;
}

std::vector<std::int64_t> blame_loop_weights(const DimensionLayout& lay, GadgetKind blame_kind,
                                             int counter) {
    std::vector<std::int64_t> w(lay.k, 0);
    switch (blame_kind) {
        case GadgetKind::BlameLeftToRight:
            w[lay.r] = -1;
            w[lay.gs] = 1;
            break;
        case GadgetKind::BlameRightToLeft:
            w[lay.ell] = -1;
            w[lay.gs] = 1;
            break;
        case GadgetKind::BlameCounterPos:
            w[lay.cm(counter)] = -1;
            w[lay.gc] = 1;
            break;
        case GadgetKind::BlameCounterNeg:
            w[lay.cp(counter)] = -1;
            w[lay.gc] = 1;
            break;
        default: throw std::invalid_argument("not a blame gadget kind");
    }
    return w;
}

std::vector<std::int64_t> reset_loop_weights(const DimensionLayout& lay, VertexRole which) {
    std::vector<std::int64_t> w(lay.k, 0);
    w[lay.ell] = 1;
    w[lay.r] = 0;
    w[lay.gs] = -1;
    w[lay.gc] = -1;
    for (int j = 1; j <= lay.counter_count; ++j) {
        w[lay.cp(j)] = 1;
        w[lay.cm(j)] = 1;
    }
    if (which == VertexRole::ResetSecond) {
        w[lay.x] = -1;
        w[lay.y] = 1;
    } else if (which == VertexRole::ResetThird) {
        w[lay.x] = 1;
        w[lay.y] = -1;
    } else if (which != VertexRole::ResetFirst) {
        throw std::invalid_argument("not a reset vertex role");
    }
    return w;
}

std::vector<std::int64_t> final_loop_weights(const DimensionLayout& lay) {
    std::vector<std::int64_t> w(lay.k, 0);
    w[lay.x] = -1;
    return w;
}

namespace {

Condition atom_inf(std::uint32_t dim) {
    return Condition::atom(Atom{Atom::Kind::Inf, dim, Atom::Op::Ge, Rational(0)});
}

Condition atom_sup(std::uint32_t dim) {
    return Condition::atom(Atom{Atom::Kind::Sup, dim, Atom::Op::Ge, Rational(0)});
}

} // namespace

Condition build_condition(const DimensionLayout& lay) {
    Condition side = Condition::disj(
        Condition::conj(atom_inf(lay.ell), atom_inf(lay.r)), atom_sup(lay.gs));
    Condition counters = atom_inf(lay.cp(1));
    counters = Condition::conj(std::move(counters), atom_inf(lay.cm(1)));
    for (int j = 2; j <= lay.counter_count; ++j) {
        counters = Condition::conj(std::move(counters), atom_inf(lay.cp(j)));
        counters = Condition::conj(std::move(counters), atom_inf(lay.cm(j)));
    }
    Condition counter_block = Condition::disj(std::move(counters), atom_sup(lay.gc));
    Condition live = Condition::conj(atom_sup(lay.x), atom_sup(lay.y));
    return Condition::conj(Condition::conj(std::move(side), std::move(counter_block)),
                           std::move(live));
}

namespace {

/// Mutable accumulator the gadget constructors append to.
struct GameBuild {
    DimensionLayout lay;
    std::vector<Vertex> vertices;
    std::vector<Edge> edges;
    std::int32_t next_instance = 0;

    std::uint32_t add_vertex(Owner owner, std::string label, VertexTag tag) {
        vertices.push_back(Vertex{owner, std::move(label), std::move(tag)});
        return (std::uint32_t)vertices.size() - 1;
    }

    void add_edge(std::uint32_t src, std::uint32_t dst, std::vector<std::int64_t> w,
                  std::string tag) {
        edges.push_back(Edge{src, dst, std::move(w), std::move(tag)});
    }

    std::vector<std::int64_t> zero() const { return std::vector<std::int64_t>(lay.k, 0); }
};

struct SimGadget {
    std::uint32_t entry = 0;  // the vertex simulating the machine state
    std::uint32_t loop = 0;
    std::uint32_t side = 0;
};

SimGadget build_sim_gadget(GameBuild& b, SimKind kind, StepDir dir, int counter,
                           const std::string& state) {
    SimGadget g;
    std::int32_t inst = b.next_instance++;
    GadgetKind gk = kind == SimKind::Nop   ? GadgetKind::SimNop
                    : kind == SimKind::Inc ? GadgetKind::SimInc
                                           : GadgetKind::SimDec;
    const char* kn = kind == SimKind::Nop ? "nop" : kind == SimKind::Inc ? "inc" : "dec";
    g.loop = b.add_vertex(Owner::P1, std::string(kn) + "[" + state + "]",
                          VertexTag{gk, VertexRole::SimLoop, inst, state, counter, dir});
    g.side = b.add_vertex(Owner::P2, "side?[" + state + "]",
                          VertexTag{gk, VertexRole::SideCheck, inst, state, counter, dir});
    b.add_edge(g.loop, g.loop, sim_loop_weights(b.lay, kind, dir, counter), "loop");
    b.add_edge(g.loop, g.side, b.zero(), "exit");
    g.entry = g.loop;
    return g;
}

struct ZeroTestGadget {
    std::uint32_t declare = 0;
    std::uint32_t check_pos = 0;  // "counter > 0?" on the declared-zero branch
    SimGadget nop_leg;
    SimGadget dec_leg;
    std::uint32_t check_neg = 0;  // "counter < 0?" after the declared-positive leg
};

ZeroTestGadget build_zero_test(GameBuild& b, int counter, const std::string& state) {
    ZeroTestGadget z;
    std::int32_t inst = b.next_instance;  // shared by all member vertices
    z.declare = b.add_vertex(
        Owner::P1, "zt[" + state + "]",
        VertexTag{GadgetKind::ZeroTest, VertexRole::Declare, inst, state, counter,
                  StepDir::LeftToRight});
    z.check_pos = b.add_vertex(
        Owner::P2, "c>0?[" + state + "]",
        VertexTag{GadgetKind::ZeroTest, VertexRole::CounterCheckPos, inst, state, counter,
                  StepDir::LeftToRight});
    z.nop_leg = build_sim_gadget(b, SimKind::Nop, StepDir::LeftToRight, counter, state);
    z.dec_leg = build_sim_gadget(b, SimKind::Dec, StepDir::LeftToRight, counter, state);
    // fold the legs back into the shared instance
    for (std::uint32_t v : {z.nop_leg.loop, z.nop_leg.side, z.dec_leg.loop, z.dec_leg.side})
        b.vertices[v].tag.instance = inst;
    z.check_neg = b.add_vertex(
        Owner::P2, "c<0?[" + state + "]",
        VertexTag{GadgetKind::ZeroTest, VertexRole::CounterCheckNeg, inst, state, counter,
                  StepDir::LeftToRight});
    b.next_instance = inst + 1;
    b.add_edge(z.declare, z.check_pos, b.zero(), "declare-zero");
    b.add_edge(z.declare, z.dec_leg.loop, b.zero(), "declare-pos");
    b.add_edge(z.check_pos, z.nop_leg.loop, b.zero(), "ok");
    b.add_edge(z.dec_leg.side, z.check_neg, b.zero(), "ok");
    return z;
}

std::uint32_t build_blame_gadget(GameBuild& b, GadgetKind blame_kind, int counter) {
    std::int32_t inst = b.next_instance++;
    std::string label;
    switch (blame_kind) {
        case GadgetKind::BlameLeftToRight: label = "blame[lr]"; break;
        case GadgetKind::BlameRightToLeft: label = "blame[rl]"; break;
        case GadgetKind::BlameCounterPos: label = "blame[c" + std::to_string(counter) + ">0]"; break;
        case GadgetKind::BlameCounterNeg: label = "blame[c" + std::to_string(counter) + "<0]"; break;
        default: throw std::invalid_argument("not a blame gadget kind");
    }
    std::uint32_t v = b.add_vertex(
        Owner::P2, label, VertexTag{blame_kind, VertexRole::BlameLoop, inst, "", counter,
                                    StepDir::None});
    b.add_edge(v, v, blame_loop_weights(b.lay, blame_kind, counter), "loop");
    return v;
}

struct ResetGadget {
    std::uint32_t first = 0;
    std::uint32_t second = 0;
    std::uint32_t third = 0;
};

ResetGadget build_reset_gadget(GameBuild& b) {
    ResetGadget rg;
    std::int32_t inst = b.next_instance++;
    rg.first = b.add_vertex(Owner::P2, "reset.1",
                            VertexTag{GadgetKind::Reset, VertexRole::ResetFirst, inst, "", 0,
                                      StepDir::None});
    rg.second = b.add_vertex(Owner::P1, "reset.2",
                             VertexTag{GadgetKind::Reset, VertexRole::ResetSecond, inst, "", 0,
                                       StepDir::None});
    rg.third = b.add_vertex(Owner::P1, "reset.3",
                            VertexTag{GadgetKind::Reset, VertexRole::ResetThird, inst, "", 0,
                                      StepDir::None});
    b.add_edge(rg.first, rg.first, reset_loop_weights(b.lay, VertexRole::ResetFirst), "loop");
    b.add_edge(rg.first, rg.second, b.zero(), "advance");
    b.add_edge(rg.second, rg.second, reset_loop_weights(b.lay, VertexRole::ResetSecond), "loop");
    b.add_edge(rg.second, rg.third, b.zero(), "advance");
    b.add_edge(rg.third, rg.third, reset_loop_weights(b.lay, VertexRole::ResetThird), "loop");
    return rg;
}

} // namespace

ReductionOutput build_game(const TwoSidedMachine& m) {
    if (std::vector<std::string> bad = validate(m); !bad.empty())
        throw std::invalid_argument("invalid machine: " + bad.front());

    GameBuild b;
    b.lay = DimensionLayout::for_counters(m.counter_count);

    ResetGadget reset = build_reset_gadget(b);

    // final sink with the decaying liveness loop
    std::uint32_t qf = b.add_vertex(
        Owner::P1, m.final_state + "[final]",
        VertexTag{GadgetKind::FinalSink, VertexRole::Sink, b.next_instance++, m.final_state, 0,
                  StepDir::None});
    b.add_edge(qf, qf, final_loop_weights(b.lay), "loop");

    // one gadget instance per instruction, in declaration order
    std::map<std::string, std::uint32_t> entry;
    entry[m.final_state] = qf;
    struct Pending {
        const Instruction* ins;
        SimGadget sim;        // for nop/inc
        ZeroTestGadget test;  // for branches
    };
    std::map<std::string, Pending> pending;
    auto build_state = [&](const std::string& s) {
        if (s == m.final_state) return;
        const Instruction& ins = m.instructions.at(s);
        Pending p;
        p.ins = &ins;
        switch (ins.kind) {
            case Instruction::Kind::LRNop:
                p.sim = build_sim_gadget(b, SimKind::Nop, StepDir::LeftToRight, 1, s);
                break;
            case Instruction::Kind::RLNop:
                p.sim = build_sim_gadget(b, SimKind::Nop, StepDir::RightToLeft, 1, s);
                break;
            case Instruction::Kind::RLInc:
                p.sim = build_sim_gadget(b, SimKind::Inc, StepDir::RightToLeft, ins.counter, s);
                break;
            case Instruction::Kind::LRBranch:
                p.test = build_zero_test(b, ins.counter, s);
                break;
        }
        entry[s] = ins.kind == Instruction::Kind::LRBranch ? p.test.declare : p.sim.entry;
        pending[s] = p;
    };
    for (const auto& s : m.left_states) build_state(s);
    for (const auto& s : m.right_states) build_state(s);

    std::uint32_t blame_lr = build_blame_gadget(b, GadgetKind::BlameLeftToRight, 0);
    std::uint32_t blame_rl = build_blame_gadget(b, GadgetKind::BlameRightToLeft, 0);
    std::vector<std::uint32_t> blame_cpos, blame_cneg;
    for (int j = 1; j <= m.counter_count; ++j) {
        blame_cpos.push_back(build_blame_gadget(b, GadgetKind::BlameCounterPos, j));
        blame_cneg.push_back(build_blame_gadget(b, GadgetKind::BlameCounterNeg, j));
    }

    // cross-gadget wiring
    b.add_edge(reset.third, entry.at(m.initial), b.zero(), "fresh-sim");
    for (auto& [s, p] : pending) {
        const Instruction& ins = *p.ins;
        switch (ins.kind) {
            case Instruction::Kind::LRNop:
                b.add_edge(p.sim.side, blame_lr, b.zero(), "blame");
                b.add_edge(p.sim.side, entry.at(ins.target), b.zero(), "ok");
                break;
            case Instruction::Kind::RLNop:
            case Instruction::Kind::RLInc:
                b.add_edge(p.sim.side, blame_rl, b.zero(), "blame");
                b.add_edge(p.sim.side, entry.at(ins.target), b.zero(), "ok");
                break;
            case Instruction::Kind::LRBranch: {
                int j = ins.counter;
                b.add_edge(p.test.check_pos, blame_cpos[(std::size_t)j - 1], b.zero(), "blame");
                b.add_edge(p.test.nop_leg.side, blame_lr, b.zero(), "blame");
                b.add_edge(p.test.nop_leg.side, entry.at(ins.target), b.zero(), "ok");
                b.add_edge(p.test.dec_leg.side, blame_lr, b.zero(), "blame");
                b.add_edge(p.test.check_neg, blame_cneg[(std::size_t)j - 1], b.zero(), "blame");
                b.add_edge(p.test.check_neg, entry.at(ins.target_pos), b.zero(), "ok");
                break;
            }
        }
    }
    b.add_edge(blame_lr, reset.first, b.zero(), "reset");
    b.add_edge(blame_rl, reset.first, b.zero(), "reset");
    for (int j = 1; j <= m.counter_count; ++j) {
        b.add_edge(blame_cpos[(std::size_t)j - 1], reset.first, b.zero(), "reset");
        b.add_edge(blame_cneg[(std::size_t)j - 1], reset.first, b.zero(), "reset");
    }

    ReductionOutput out{
        GameGraph(b.lay.k, reset.first, b.lay.names, std::move(b.vertices), std::move(b.edges)),
        build_condition(b.lay), b.lay};
    return out;
}

} // namespace rmpg
