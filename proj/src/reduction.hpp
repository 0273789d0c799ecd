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

#include <optional>
#include <string>
#include <vector>

#include "condition.hpp"
#include "graph.hpp"
#include "machine.hpp"

namespace rmpg {

/**
 * Named dimensions of a compiled game. One counter uses eight dimensions
 * (ell, r, gs, cp, cm, gc, x, y); two counters use ten (the counter block
 * becomes cp1, cm1, cp2, cm2).
 */
struct DimensionLayout {
    int counter_count = 1;
    std::uint32_t k = 8;
    std::uint32_t ell = 0;
    std::uint32_t r = 1;
    std::uint32_t gs = 2;
    std::uint32_t gc = 5;
    std::uint32_t x = 6;
    std::uint32_t y = 7;
    std::vector<std::string> names;

    std::uint32_t cp(int counter) const;  // 1-based counter index
    std::uint32_t cm(int counter) const;

    static DimensionLayout for_counters(int counter_count);
    /// Recognizes a compiled graph's layout from its dimension names.
    static std::optional<DimensionLayout> from_graph(const GameGraph& g);
};

enum class SimKind : std::uint8_t { Nop, Inc, Dec };

/// Self-loop weight table of a simulation gadget. Left-to-right transitions
/// move weight from ell to r, right-to-left ones move it back; counters ride
/// along as paired cp/cm increments against the gc guard.
std::vector<std::int64_t> sim_loop_weights(const DimensionLayout& lay, SimKind kind, StepDir dir,
                                           int counter);

/// Self-loop weight table of a blame gadget.
std::vector<std::int64_t> blame_loop_weights(const DimensionLayout& lay, GadgetKind blame_kind,
                                             int counter);

/// Self-loop weight tables of the three reset vertices.
std::vector<std::int64_t> reset_loop_weights(const DimensionLayout& lay, VertexRole which);

/// Weight table of the final sink's self-loop (x decays).
std::vector<std::int64_t> final_loop_weights(const DimensionLayout& lay);

/// The winning condition: every threshold 0, guards excuse their block.
Condition build_condition(const DimensionLayout& lay);

struct ReductionOutput {
    GameGraph graph;
    Condition condition;
    DimensionLayout layout;
};

/// Compiles a valid machine into its game. Throws std::invalid_argument when
/// validate(m) reports violations.
ReductionOutput build_game(const TwoSidedMachine& m);

} // namespace rmpg
