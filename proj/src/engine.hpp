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
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "condition.hpp"
#include "graph.hpp"
#include "reduction.hpp"

namespace rmpg {

/// Machine bookkeeping replayed from the declared moves of the play. The
/// counters can go negative exactly when a positive branch was declared on a
/// zero counter.
struct MachineShadow {
    std::string state;
    std::array<std::int64_t, 2> counters = {0, 0};
    std::int64_t steps = 0;                      // completed steps this invocation
    std::array<std::int64_t, 2> incs = {0, 0};   // inc-gadget visits this invocation
    std::array<std::int64_t, 2> decs = {0, 0};
};

/// Data about the simulation invocation in progress.
struct SimInvocation {
    bool active = false;
    std::int64_t entry_round = 0;
    std::int64_t gs_abs = 0;  // |g_s| at entry; constant while simulating
    std::int64_t gc_abs = 0;  // |g_c| at entry
    MachineShadow shadow;
};

/// What happened on one advance of the tracker.
struct StepEvents {
    bool reset_entered = false;
    bool sim_entered = false;
    bool step_completed = false;
    bool phase_completed = false;  // a sim loop phase ended
    bool blame_entered = false;
    bool blame_exited = false;
    GadgetKind phase_kind = GadgetKind::None;
    StepDir phase_dir = StepDir::None;
    int phase_counter = 0;
    std::int64_t phase_loops = 0;
};

/**
 * Replays a play edge by edge, maintaining exact totals plus the gadget
 * bookkeeping both strategies and the monitors observe: declared machine
 * shadow, reset-visit count, loop-phase lengths, simulation invocations.
 * Works on any graph; gadget bookkeeping only engages on tagged vertices.
 */
class PlayTracker {
  public:
    explicit PlayTracker(const GameGraph& g);

    StepEvents advance(std::uint32_t edge_index);

    const GameGraph& graph() const { return *g_; }
    const std::optional<DimensionLayout>& layout() const { return layout_; }
    std::uint32_t vertex() const { return vertex_; }
    std::int64_t round() const { return round_; }
    const std::vector<std::int64_t>& totals() const { return totals_; }
    std::int64_t total(std::uint32_t dim) const { return totals_.at(dim); }
    int reset_visits() const { return reset_visits_; }
    std::int64_t loops_in_phase() const { return loops_in_phase_; }
    const SimInvocation& sim() const { return sim_; }

    /// Exact average of a dimension over the rounds played so far.
    Rational avg(std::uint32_t dim) const { return Rational(totals_.at(dim), round_); }

  private:
    const GameGraph* g_;
    std::optional<DimensionLayout> layout_;
    std::uint32_t vertex_;
    std::int64_t round_ = 0;
    std::vector<std::int64_t> totals_;
    int reset_visits_ = 0;
    std::int64_t loops_in_phase_ = 0;
    SimInvocation sim_;
};

/// A strategy picks an outgoing edge of the current vertex from the tracked
/// summary of the play. Instances are stateful and owned by one engine.
class Strategy {
  public:
    virtual ~Strategy() = default;
    virtual std::uint32_t choose(const PlayTracker& st) = 0;
    /// True when the strategy will take the current vertex's self-loop
    /// forever; lets the engine certify a lasso.
    virtual bool committed_to_self_loop(const PlayTracker&) const { return false; }
    virtual std::string name() const = 0;
};

struct PlayRecord {
    const GameGraph* graph = nullptr;
    std::vector<std::uint32_t> edges;
    std::int64_t horizon = 0;
    bool lasso = false;
    std::int64_t lasso_from = -1;  // first round of the captive tail (1-based)
    std::uint32_t lasso_vertex = 0;
    std::int64_t blame_count = 0;
    int reset_visits = 0;
};

/// Drives `horizon` rounds from the initial vertex, alternating control by
/// vertex owner. Throws std::runtime_error when a strategy returns an edge
/// that does not leave the current vertex.
PlayRecord run_play(const GameGraph& g, Strategy& p1, Strategy& p2, std::int64_t horizon);

struct OutcomeSummary {
    bool lasso = false;
    std::string lasso_label;
    std::optional<LimitVector> limits;          // exact, lasso plays only
    std::optional<bool> condition_holds;        // exact, lasso plays only
    std::optional<LimitVector> estimate;        // finite-horizon tail estimate otherwise
    std::optional<bool> condition_estimate;     // non-conclusive
    std::int64_t blame_count = 0;
    int reset_visits = 0;

    std::string text(const GameGraph& g) const;
};

/// Evaluates the condition exactly on a detected lasso tail, or reports the
/// finite-horizon estimate labeled non-conclusive. Throws std::domain_error
/// on an empty record.
OutcomeSummary summarize_outcome(const PlayRecord& rec, const Condition& condition);

/// One line per round: round, edge tag, and the totals at geometric
/// checkpoints and gadget boundaries.
std::string trace_to_jsonl(const PlayRecord& rec);

} // namespace rmpg
