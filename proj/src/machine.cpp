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

#include "machine.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>
#include <stdexcept>

namespace rmpg {

bool TwoSidedMachine::is_left(const std::string& s) const {
    return std::find(left_states.begin(), left_states.end(), s) != left_states.end();
}

bool TwoSidedMachine::is_right(const std::string& s) const {
    return std::find(right_states.begin(), right_states.end(), s) != right_states.end();
}

Side TwoSidedMachine::side_of(const std::string& s) const {
    if (is_left(s)) return Side::Left;
    if (is_right(s)) return Side::Right;
    throw std::invalid_argument("unknown state '" + s + "'");
}

namespace {

std::vector<std::string> tokenize(const std::string& line) {
    std::vector<std::string> toks;
    std::string cur;
    for (char c : line) {
        if (c == '#') break;
        if (std::isspace((unsigned char)c)) {
            if (!cur.empty()) {
                toks.push_back(cur);
                cur.clear();
            }
        } else {
            cur.push_back(c);
        }
    }
    if (!cur.empty()) toks.push_back(cur);
    return toks;
}

// Accepts "c" (counter 1) or "cJ".
int parse_counter_ref(const std::string& tok, int line) {
    if (tok == "c") return 1;
    if (tok.size() == 2 && tok[0] == 'c' && (tok[1] == '1' || tok[1] == '2')) return tok[1] - '0';
    throw MachineParseError(line, "expected counter reference, got '" + tok + "'");
}

} // namespace

TwoSidedMachine parse_machine(const std::string& text) {
    TwoSidedMachine m;
    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    bool have_counters = false;
    while (std::getline(in, raw)) {
        ++lineno;
        std::vector<std::string> t = tokenize(raw);
        if (t.empty()) continue;
        if (t[0] == "counters:") {
            if (t.size() != 2 || (t[1] != "1" && t[1] != "2"))
                throw MachineParseError(lineno, "counters: expects 1 or 2");
            m.counter_count = t[1][0] - '0';
            have_counters = true;
            continue;
        }
        if (t[0] == "left" || t[0] == "right") {
            auto& states = t[0] == "left" ? m.left_states : m.right_states;
            for (std::size_t i = 1; i < t.size(); ++i) {
                if (m.has_state(t[i]))
                    throw MachineParseError(lineno, "state '" + t[i] + "' declared twice");
                states.push_back(t[i]);
            }
            continue;
        }
        if (t[0] == "init") {
            if (t.size() != 2) throw MachineParseError(lineno, "init expects one state");
            m.initial = t[1];
            continue;
        }
        if (t[0] == "final") {
            if (t.size() != 2) throw MachineParseError(lineno, "final expects one state");
            m.final_state = t[1];
            continue;
        }
        // instruction line: "<state>: ..."
        if (t[0].empty() || t[0].back() != ':')
            throw MachineParseError(lineno, "expected an instruction line");
        std::string state = t[0].substr(0, t[0].size() - 1);
        if (!m.has_state(state))
            throw MachineParseError(lineno, "unknown state '" + state + "'");
        if (m.instructions.count(state))
            throw MachineParseError(lineno, "duplicate instruction for '" + state + "'");
        bool left = m.is_left(state);
        Instruction ins;
        if (t.size() == 3 && t[1] == "goto") {
            ins.kind = left ? Instruction::Kind::LRNop : Instruction::Kind::RLNop;
            ins.target = t[2];
        } else if (t.size() == 5 && t[1] == "inc") {
            if (left)
                throw MachineParseError(lineno, "increment on a left state '" + state + "'");
            if (t[3] != "goto") throw MachineParseError(lineno, "expected 'goto'");
            ins.kind = Instruction::Kind::RLInc;
            ins.counter = parse_counter_ref(t[2], lineno);
            ins.target = t[4];
        } else if (t.size() == 5 && t[1] == "dec") {
            // Recognized so the misuse gets a precise message: standalone
            // decrements do not exist, only the positive branch of a test.
            throw MachineParseError(lineno, "decrement outside a zero test on '" + state + "'");
        } else if (t.size() == 9 && t[1] == "if" && t[3] == "goto" && t[5] == "else" &&
                   t[6] == "dec" && t[7] == "goto") {
            if (!left) throw MachineParseError(lineno, "zero test on a right state '" + state + "'");
            std::string cond = t[2];
            auto eq = cond.find("=0");
            if (eq == std::string::npos || eq + 2 != cond.size())
                throw MachineParseError(lineno, "expected 'cJ=0'");
            ins.kind = Instruction::Kind::LRBranch;
            ins.counter = parse_counter_ref(cond.substr(0, eq), lineno);
            ins.target = t[4];
            ins.target_pos = t[8];
        } else {
            throw MachineParseError(lineno, "unrecognized instruction form");
        }
        if (!m.has_state(ins.target))
            throw MachineParseError(lineno, "unknown target state '" + ins.target + "'");
        if (ins.kind == Instruction::Kind::LRBranch && !m.has_state(ins.target_pos))
            throw MachineParseError(lineno, "unknown target state '" + ins.target_pos + "'");
        m.instructions[state] = ins;
    }
    if (!have_counters) throw MachineParseError(0, "missing 'counters:' header");
    if (m.initial.empty()) throw MachineParseError(0, "missing 'init'");
    if (m.final_state.empty()) throw MachineParseError(0, "missing 'final'");
    return m;
}

std::string print_machine(const TwoSidedMachine& m) {
    std::ostringstream out;
    out << "counters: " << m.counter_count << "\n";
    out << "left";
    for (const auto& s : m.left_states) out << " " << s;
    out << "\nright";
    for (const auto& s : m.right_states) out << " " << s;
    out << "\ninit " << m.initial << "\nfinal " << m.final_state << "\n";
    auto cref = [&](int j) { return m.counter_count == 1 ? std::string("c") : "c" + std::to_string(j); };
    auto emit = [&](const std::string& s) {
        auto it = m.instructions.find(s);
        if (it == m.instructions.end()) return;
        const Instruction& ins = it->second;
        out << s << ": ";
        switch (ins.kind) {
            case Instruction::Kind::LRNop:
            case Instruction::Kind::RLNop: out << "goto " << ins.target; break;
            case Instruction::Kind::RLInc:
                out << "inc " << cref(ins.counter) << " goto " << ins.target;
                break;
            case Instruction::Kind::LRBranch:
                out << "if " << cref(ins.counter) << "=0 goto " << ins.target << " else dec goto "
                    << ins.target_pos;
                break;
        }
        out << "\n";
    };
    for (const auto& s : m.left_states) emit(s);
    for (const auto& s : m.right_states) emit(s);
    return out.str();
}

std::vector<std::string> validate(const TwoSidedMachine& m) {
    std::vector<std::string> bad;
    std::set<std::string> seen;
    for (const auto& s : m.left_states)
        if (!seen.insert(s).second) bad.push_back("state '" + s + "' declared twice");
    for (const auto& s : m.right_states)
        if (!seen.insert(s).second) bad.push_back("state '" + s + "' declared on both sides");
    if (m.counter_count != 1 && m.counter_count != 2) bad.push_back("counter count must be 1 or 2");
    if (!m.has_state(m.initial)) bad.push_back("initial state does not exist");
    else if (!m.is_left(m.initial)) bad.push_back("initial state must be a left state");
    if (!m.has_state(m.final_state)) bad.push_back("final state does not exist");
    else if (!m.is_left(m.final_state)) bad.push_back("final state must be a left state");
    for (const auto& [s, ins] : m.instructions) {
        if (!m.has_state(s)) {
            bad.push_back("instruction on unknown state '" + s + "'");
            continue;
        }
        if (s == m.final_state) bad.push_back("final state '" + s + "' must not carry an instruction");
        bool left = m.is_left(s);
        if (ins.is_left_instruction() != left)
            bad.push_back("instruction side mismatch on '" + s + "'");
        if (ins.counter < 1 || ins.counter > m.counter_count)
            bad.push_back("counter index out of range on '" + s + "'");
        auto check_target = [&](const std::string& t) {
            if (!m.has_state(t)) {
                bad.push_back("target '" + t + "' of '" + s + "' does not exist");
            } else if (left && !m.is_right(t)) {
                bad.push_back("target of left state '" + s + "' must be a right state");
            } else if (!left && !m.is_left(t)) {
                bad.push_back("target of right state '" + s + "' must be a left state");
            }
        };
        check_target(ins.target);
        if (ins.kind == Instruction::Kind::LRBranch) check_target(ins.target_pos);
    }
    for (const auto& s : m.left_states)
        if (s != m.final_state && !m.instructions.count(s))
            bad.push_back("state '" + s + "' has no instruction");
    for (const auto& s : m.right_states)
        if (!m.instructions.count(s)) bad.push_back("state '" + s + "' has no instruction");
    return bad;
}

MachineConfig step(const TwoSidedMachine& m, const MachineConfig& cfg) {
    if (cfg.state == m.final_state) throw std::logic_error("no step from the final state");
    auto it = m.instructions.find(cfg.state);
    if (it == m.instructions.end()) throw std::logic_error("state without instruction");
    const Instruction& ins = it->second;
    MachineConfig next = cfg;
    std::int64_t& c = next.counters[(std::size_t)ins.counter - 1];
    switch (ins.kind) {
        case Instruction::Kind::LRNop:
        case Instruction::Kind::RLNop: next.state = ins.target; break;
        case Instruction::Kind::RLInc:
            ++c;
            next.state = ins.target;
            break;
        case Instruction::Kind::LRBranch:
            if (c == 0) {
                next.state = ins.target;
            } else {
                --c;
                next.state = ins.target_pos;
            }
            break;
    }
    return next;
}

RunResult run(const TwoSidedMachine& m, std::int64_t max_steps) {
    RunResult res;
    MachineConfig cfg{m.initial, {0, 0}};
    std::map<MachineConfig, std::int64_t> seen;
    seen.emplace(cfg, 0);
    for (std::int64_t i = 0; i < max_steps; ++i) {
        if (cfg.state == m.final_state) break;
        cfg = step(m, cfg);
        res.trace.push_back(cfg);
        if (!res.cycle) {
            auto [it, fresh] = seen.emplace(cfg, i + 1);
            if (!fresh) res.cycle = {it->second, i + 1 - it->second};
        }
        if (cfg.state == m.final_state) {
            res.halted = true;
            res.steps_to_halt = i + 1;
            break;
        }
    }
    if (!res.halted && cfg.state == m.final_state) {
        // initial state was already final
        res.halted = true;
        res.steps_to_halt = 0;
    }
    return res;
}

RunResult run_standard(const StandardMachine& m, std::int64_t max_steps) {
    RunResult res;
    MachineConfig cfg{m.initial, {0, 0}};
    for (std::int64_t i = 0; i < max_steps; ++i) {
        const StandardInstruction& ins = m.instructions.at(cfg.state);
        if (ins.kind == StandardInstruction::Kind::Halt) {
            res.halted = true;
            res.steps_to_halt = i;
            return res;
        }
        std::int64_t& c = cfg.counters[(std::size_t)ins.counter - 1];
        if (ins.kind == StandardInstruction::Kind::Inc) {
            ++c;
            cfg.state = ins.target;
        } else if (c == 0) {
            cfg.state = ins.target;
        } else {
            --c;
            cfg.state = ins.target_pos;
        }
        res.trace.push_back(cfg);
    }
    if (max_steps >= 0 && m.instructions.at(cfg.state).kind == StandardInstruction::Kind::Halt) {
        res.halted = true;
        res.steps_to_halt = (std::int64_t)res.trace.size();
    }
    return res;
}

TwoSidedMachine convert_minsky(const StandardMachine& sm) {
    TwoSidedMachine m;
    m.counter_count = sm.counter_count;
    auto kind_of = [&](const std::string& s) { return sm.instructions.at(s).kind; };
    auto side_of = [&](const std::string& s) {
        return kind_of(s) == StandardInstruction::Kind::Inc ? Side::Right : Side::Left;
    };
    for (const auto& s : sm.states)
        (side_of(s) == Side::Left ? m.left_states : m.right_states).push_back(s);

    std::set<std::string> taken(sm.states.begin(), sm.states.end());
    std::map<std::string, std::string> bridges;  // target -> bridge state
    auto bridge_to = [&](const std::string& t) {
        auto it = bridges.find(t);
        if (it != bridges.end()) return it->second;
        std::string name = "via_" + t;
        while (taken.count(name)) name += "_";
        taken.insert(name);
        bridges[t] = name;
        Side bridge_side = side_of(t) == Side::Left ? Side::Right : Side::Left;
        (bridge_side == Side::Left ? m.left_states : m.right_states).push_back(name);
        Instruction nop;
        nop.kind = bridge_side == Side::Left ? Instruction::Kind::LRNop : Instruction::Kind::RLNop;
        nop.target = t;
        m.instructions[name] = nop;
        return name;
    };
    // A state on side sigma must target the opposite side; same-side targets
    // route through a bridge.
    auto route = [&](Side from, const std::string& t) {
        return side_of(t) == from ? bridge_to(t) : t;
    };

    std::string final_state;
    for (const auto& s : sm.states) {
        const StandardInstruction& ins = sm.instructions.at(s);
        switch (ins.kind) {
            case StandardInstruction::Kind::Halt:
                if (!final_state.empty())
                    throw std::invalid_argument("standard machine with several halt states");
                final_state = s;
                break;
            case StandardInstruction::Kind::Inc: {
                Instruction out;
                out.kind = Instruction::Kind::RLInc;
                out.counter = ins.counter;
                out.target = route(Side::Right, ins.target);
                m.instructions[s] = out;
                break;
            }
            case StandardInstruction::Kind::Branch: {
                Instruction out;
                out.kind = Instruction::Kind::LRBranch;
                out.counter = ins.counter;
                out.target = route(Side::Left, ins.target);
                out.target_pos = route(Side::Left, ins.target_pos);
                m.instructions[s] = out;
                break;
            }
        }
    }
    if (final_state.empty()) throw std::invalid_argument("standard machine has no halt state");
    m.final_state = final_state;
    if (side_of(sm.initial) == Side::Left) {
        m.initial = sm.initial;
    } else {
        // the run must start on the left; enter through a fresh no-op
        std::string name = "start";
        while (taken.count(name)) name += "_";
        taken.insert(name);
        m.left_states.push_back(name);
        Instruction nop;
        nop.kind = Instruction::Kind::LRNop;
        nop.target = sm.initial;
        m.instructions[name] = nop;
        m.initial = name;
    }
    return m;
}

} // namespace rmpg
