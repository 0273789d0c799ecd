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

#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace rmpg {

enum class Side : std::uint8_t { Left, Right };

/// Parse failure for the machine DSL, with the offending 1-based line.
struct MachineParseError : std::runtime_error {
    int line;
    MachineParseError(int line_, const std::string& what)
        : std::runtime_error("line " + std::to_string(line_) + ": " + what), line(line_) {}
};

/**
 * One instruction of a two-sided machine. Left states branch on a counter
 * (decrementing on the positive branch) or jump unchanged; right states
 * increment or jump unchanged. All targets are on the opposite side.
 */
struct Instruction {
    enum class Kind : std::uint8_t { LRBranch, LRNop, RLInc, RLNop };

    Kind kind = Kind::LRNop;
    int counter = 1;             // 1-based; meaningful for LRBranch / RLInc
    std::string target;          // LRNop/RLInc/RLNop target; LRBranch zero-target
    std::string target_pos;      // LRBranch positive-branch target

    bool is_left_instruction() const {
        return kind == Kind::LRBranch || kind == Kind::LRNop;
    }
};

/**
 * Deterministic counter machine whose control states split into a left and a
 * right set; control strictly alternates sides, decrements happen only on
 * left-to-right branches and increments only on right-to-left moves. One or
 * two counters, both starting at zero. The final state is a left state with
 * no instruction.
 */
struct TwoSidedMachine {
    std::vector<std::string> left_states;
    std::vector<std::string> right_states;
    std::map<std::string, Instruction> instructions;
    std::string initial;
    std::string final_state;
    int counter_count = 1;

    bool is_left(const std::string& s) const;
    bool is_right(const std::string& s) const;
    bool has_state(const std::string& s) const { return is_left(s) || is_right(s); }
    Side side_of(const std::string& s) const;
};

struct MachineConfig {
    std::string state;
    std::array<std::int64_t, 2> counters = {0, 0};

    auto operator<=>(const MachineConfig&) const = default;
};

struct RunResult {
    bool halted = false;
    std::optional<std::int64_t> steps_to_halt;
    std::vector<MachineConfig> trace;  // configs reached by executed steps; initial excluded
    // Set when a configuration repeats before halting: (first occurrence
    // step index, period).
    std::optional<std::pair<std::int64_t, std::int64_t>> cycle;
};

/// Parses the line-oriented machine DSL. Throws MachineParseError.
TwoSidedMachine parse_machine(const std::string& text);

/// Inverse of parse_machine up to whitespace and comments.
std::string print_machine(const TwoSidedMachine& m);

/// All well-formedness violations, empty when the machine is valid.
std::vector<std::string> validate(const TwoSidedMachine& m);

/// Deterministic successor configuration. Throws std::logic_error at the
/// final state.
MachineConfig step(const TwoSidedMachine& m, const MachineConfig& cfg);

/// Runs from (initial, zeros) for at most max_steps steps.
RunResult run(const TwoSidedMachine& m, std::int64_t max_steps);

/// Standard (not side-alternating) counter machine used as conversion input.
struct StandardInstruction {
    enum class Kind : std::uint8_t { Inc, Branch, Halt };
    Kind kind = Kind::Halt;
    int counter = 1;
    std::string target;       // Inc target; Branch zero-target
    std::string target_pos;   // Branch positive-branch target
};

struct StandardMachine {
    std::vector<std::string> states;
    std::map<std::string, StandardInstruction> instructions;
    std::string initial;
    int counter_count = 1;
};

/// Runs a standard machine from (initial, zeros); halts on a Halt state.
RunResult run_standard(const StandardMachine& m, std::int64_t max_steps);

/**
 * Rewrites a standard machine into a side-alternating one by inserting
 * no-op bridge states exactly where two same-side instructions would chain.
 * Halting is preserved; the step count grows by a factor of at most two.
 */
TwoSidedMachine convert_minsky(const StandardMachine& m);

} // namespace rmpg
