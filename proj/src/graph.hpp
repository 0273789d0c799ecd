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

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rational.hpp"

namespace rmpg {

enum class Owner : std::uint8_t { P1, P2 };

/// Gadget classification carried on every vertex of a compiled game. Plain
/// hand-built graphs leave the kind at None.
enum class GadgetKind : std::uint8_t {
    None,
    Reset,
    SimNop,
    SimInc,
    SimDec,
    ZeroTest,
    BlameLeftToRight,  // punishes r
    BlameRightToLeft,  // punishes ell
    BlameCounterPos,   // punishes c-minus, fires on "declared zero but counter > 0"
    BlameCounterNeg,   // punishes c-plus, fires on "declared positive but counter was 0"
    FinalSink,
};

enum class VertexRole : std::uint8_t {
    None,
    ResetFirst,   // player-2 loop vertex of the reset gadget
    ResetSecond,  // first player-1 loop vertex
    ResetThird,   // second player-1 loop vertex
    SimLoop,
    SideCheck,
    Declare,          // zero-test branch point
    CounterCheckPos,  // "counter > 0?" referee vertex
    CounterCheckNeg,  // "counter < 0?" referee vertex
    BlameLoop,
    Sink,
};

/// Machine transition direction a sim gadget implements.
enum class StepDir : std::uint8_t { None, LeftToRight, RightToLeft };

struct VertexTag {
    GadgetKind kind = GadgetKind::None;
    VertexRole role = VertexRole::None;
    std::int32_t instance = -1;       // unique per gadget instance
    std::string machine_state;        // simulated state, when applicable
    std::int32_t counter = 0;         // 1-based counter index for counter gadgets, 0 otherwise
    StepDir dir = StepDir::None;
};

struct Vertex {
    Owner owner = Owner::P1;
    std::string label;
    VertexTag tag;
};

struct Edge {
    std::uint32_t src = 0;
    std::uint32_t dst = 0;
    std::vector<std::int64_t> weights;
    std::string tag;  // annotation: "loop", "exit", "ok", "blame", ...
};

/**
 * Finite two-player game graph with integer weight vectors on edges.
 * Immutable once built; sharing across threads is safe.
 */
class GameGraph {
  public:
    GameGraph() = default;
    GameGraph(std::uint32_t dimension_count, std::uint32_t initial_vertex,
              std::vector<std::string> dim_names, std::vector<Vertex> vertices,
              std::vector<Edge> edges);

    std::uint32_t dimensions() const { return k_; }
    std::uint32_t initial() const { return initial_; }
    const std::vector<std::string>& dim_names() const { return dim_names_; }
    const std::vector<Vertex>& vertices() const { return vertices_; }
    const std::vector<Edge>& edges() const { return edges_; }
    const Vertex& vertex(std::uint32_t v) const { return vertices_.at(v); }
    const Edge& edge(std::uint32_t e) const { return edges_.at(e); }
    /// Indices of edges leaving v.
    const std::vector<std::uint32_t>& out(std::uint32_t v) const { return out_.at(v); }

    /// Index of v's self-loop edge, if it has one.
    std::optional<std::uint32_t> self_loop(std::uint32_t v) const;

    /// Every vertex must have an outgoing edge and every weight vector length k.
    void check_well_formed() const;

  private:
    std::uint32_t k_ = 0;
    std::uint32_t initial_ = 0;
    std::vector<std::string> dim_names_;
    std::vector<Vertex> vertices_;
    std::vector<Edge> edges_;
    std::vector<std::vector<std::uint32_t>> out_;
};

/**
 * A finite path: a start vertex plus a sequence of edge indices. Totals are
 * maintained incrementally and are always exact integers.
 */
class PlayPrefix {
  public:
    explicit PlayPrefix(const GameGraph& g, std::uint32_t start);
    PlayPrefix(const GameGraph& g, std::uint32_t start, const std::vector<std::uint32_t>& edges);

    void push(std::uint32_t edge_index);

    const GameGraph& graph() const { return *g_; }
    std::uint32_t start() const { return start_; }
    std::uint32_t current() const { return current_; }
    std::int64_t length() const { return (std::int64_t)edges_.size(); }
    const std::vector<std::uint32_t>& edges() const { return edges_; }
    const std::vector<std::int64_t>& totals() const { return totals_; }

  private:
    const GameGraph* g_;
    std::uint32_t start_;
    std::uint32_t current_;
    std::vector<std::uint32_t> edges_;
    std::vector<std::int64_t> totals_;
};

/// Per-dimension limit-inferior / limit-superior averages of a play.
struct LimitVector {
    std::vector<Rational> inf_avg;
    std::vector<Rational> sup_avg;

    std::size_t dims() const { return inf_avg.size(); }
    void check() const;  // inf <= sup componentwise
};

/// Componentwise average of a nonempty prefix. Throws std::domain_error on an
/// empty prefix.
std::vector<Rational> avg_prefix(const PlayPrefix& prefix);

/**
 * Exact limits of the ultimately-periodic play stem.(cycle)^omega. The stem
 * may be empty; the cycle must be a nonempty closed path starting where the
 * stem ends. The limit is the cycle average in every dimension regardless of
 * the stem.
 */
LimitVector lasso_limits(const PlayPrefix& stem, const PlayPrefix& cycle);

struct LimitEstimate {
    // One entry per checkpoint: the exact average vector at that round.
    std::vector<std::int64_t> checkpoints;
    std::vector<std::vector<Rational>> averages;     // [checkpoint][dim]
    std::vector<Rational> running_min;               // per dim over the checkpoints
    std::vector<Rational> running_max;
};

/**
 * Finite-horizon estimate of the limit behaviour: averages at the given
 * (strictly increasing, 1-based) checkpoint rounds plus running min/max.
 * Checkpoints past the trace length are rejected.
 */
LimitEstimate estimate_limits(const PlayPrefix& trace, const std::vector<std::int64_t>& checkpoints);

/// Rounds 1, 2, 4, ... capped at horizon, always including horizon itself.
std::vector<std::int64_t> geometric_checkpoints(std::int64_t horizon);

/// Line-oriented JSON export/import of a graph (one object per line:
/// header, vertices, then edges). The optional condition line is handled by
/// the callers that know about conditions.
std::string graph_to_jsonl(const GameGraph& g, const std::string& condition_text = "");
GameGraph graph_from_jsonl(const std::string& text, std::string* condition_text = nullptr);

/// GraphViz export; gadget instances become clusters, weights become labels.
std::string graph_to_dot(const GameGraph& g);

} // namespace rmpg
