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

#include "graph.hpp"

#include <map>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace rmpg {

using nlohmann::json;

GameGraph::GameGraph(std::uint32_t dimension_count, std::uint32_t initial_vertex,
                     std::vector<std::string> dim_names, std::vector<Vertex> vertices,
                     std::vector<Edge> edges)
    : k_(dimension_count),
      initial_(initial_vertex),
      dim_names_(std::move(dim_names)),
      vertices_(std::move(vertices)),
      edges_(std::move(edges)) {
    out_.resize(vertices_.size());
    for (std::uint32_t e = 0; e < edges_.size(); ++e) {
        if (edges_[e].src >= vertices_.size() || edges_[e].dst >= vertices_.size())
            throw std::invalid_argument("edge endpoint out of range");
        out_[edges_[e].src].push_back(e);
    }
    check_well_formed();
}

std::optional<std::uint32_t> GameGraph::self_loop(std::uint32_t v) const {
    for (std::uint32_t e : out_.at(v))
        if (edges_[e].dst == v) return e;
    return std::nullopt;
}

void GameGraph::check_well_formed() const {
    if (initial_ >= vertices_.size()) throw std::invalid_argument("initial vertex out of range");
    if (!dim_names_.empty() && dim_names_.size() != k_)
        throw std::invalid_argument("dimension name count does not match k");
    for (std::uint32_t v = 0; v < vertices_.size(); ++v)
        if (out_[v].empty())
            throw std::invalid_argument("vertex " + std::to_string(v) + " has no outgoing edge");
    for (const Edge& e : edges_)
        if (e.weights.size() != k_)
            throw std::invalid_argument("edge weight vector length does not match k");
}

PlayPrefix::PlayPrefix(const GameGraph& g, std::uint32_t start)
    : g_(&g), start_(start), current_(start), totals_(g.dimensions(), 0) {
    if (start >= g.vertices().size()) throw std::invalid_argument("start vertex out of range");
}

PlayPrefix::PlayPrefix(const GameGraph& g, std::uint32_t start, const std::vector<std::uint32_t>& edges)
    : PlayPrefix(g, start) {
    for (std::uint32_t e : edges) push(e);
}

void PlayPrefix::push(std::uint32_t edge_index) {
    const Edge& e = g_->edge(edge_index);
    if (e.src != current_)
        throw std::invalid_argument("edge does not continue the path");
    edges_.push_back(edge_index);
    for (std::size_t d = 0; d < totals_.size(); ++d) totals_[d] += e.weights[d];
    current_ = e.dst;
}

void LimitVector::check() const {
    if (inf_avg.size() != sup_avg.size())
        throw std::invalid_argument("limit vector with mismatched components");
    for (std::size_t d = 0; d < inf_avg.size(); ++d)
        if (inf_avg[d] > sup_avg[d])
            throw std::invalid_argument("limit vector with inf above sup");
}

std::vector<Rational> avg_prefix(const PlayPrefix& prefix) {
    if (prefix.length() == 0) throw std::domain_error("average of an empty prefix");
    std::vector<Rational> avg;
    avg.reserve(prefix.totals().size());
    for (std::int64_t t : prefix.totals()) avg.push_back(Rational(t, prefix.length()));
    return avg;
}

LimitVector lasso_limits(const PlayPrefix& stem, const PlayPrefix& cycle) {
    if (cycle.length() < 1 || cycle.start() != cycle.current())
        throw std::invalid_argument("cycle is not a nonempty closed path");
    if (stem.current() != cycle.start())
        throw std::invalid_argument("stem does not end where the cycle begins");
    LimitVector lv;
    std::vector<Rational> avg = avg_prefix(cycle);
    lv.inf_avg = avg;
    lv.sup_avg = std::move(avg);
    return lv;
}

LimitEstimate estimate_limits(const PlayPrefix& trace, const std::vector<std::int64_t>& checkpoints) {
    LimitEstimate est;
    est.checkpoints = checkpoints;
    if (checkpoints.empty()) return est;
    for (std::size_t i = 0; i < checkpoints.size(); ++i) {
        std::int64_t c = checkpoints[i];
        if (c < 1 || c > trace.length()) throw std::out_of_range("checkpoint outside trace");
        if (i > 0 && checkpoints[i - 1] >= c)
            throw std::invalid_argument("checkpoints must be strictly increasing");
    }
    std::size_t k = trace.totals().size();
    std::vector<std::int64_t> totals(k, 0);
    std::size_t next = 0;
    for (std::int64_t round = 1; round <= trace.length() && next < checkpoints.size(); ++round) {
        const Edge& e = trace.graph().edge(trace.edges()[(std::size_t)round - 1]);
        for (std::size_t d = 0; d < k; ++d) totals[d] += e.weights[d];
        if (round == checkpoints[next]) {
            std::vector<Rational> avg;
            avg.reserve(k);
            for (std::size_t d = 0; d < k; ++d) avg.push_back(Rational(totals[d], round));
            if (est.running_min.empty()) {
                est.running_min = avg;
                est.running_max = avg;
            } else {
                for (std::size_t d = 0; d < k; ++d) {
                    if (avg[d] < est.running_min[d]) est.running_min[d] = avg[d];
                    if (avg[d] > est.running_max[d]) est.running_max[d] = avg[d];
                }
            }
            est.averages.push_back(std::move(avg));
            ++next;
        }
    }
    return est;
}

std::vector<std::int64_t> geometric_checkpoints(std::int64_t horizon) {
    std::vector<std::int64_t> cps;
    for (std::int64_t c = 1; c < horizon; c *= 2) cps.push_back(c);
    if (horizon >= 1) cps.push_back(horizon);
    return cps;
}

namespace {

const char* owner_name(Owner o) { return o == Owner::P1 ? "P1" : "P2"; }

Owner owner_from(const std::string& s) {
    if (s == "P1") return Owner::P1;
    if (s == "P2") return Owner::P2;
    throw std::invalid_argument("unknown owner '" + s + "'");
}

const std::map<GadgetKind, std::string> kKindNames = {
    {GadgetKind::None, "none"},
    {GadgetKind::Reset, "reset"},
    {GadgetKind::SimNop, "nop"},
    {GadgetKind::SimInc, "inc"},
    {GadgetKind::SimDec, "dec"},
    {GadgetKind::ZeroTest, "zero-test"},
    {GadgetKind::BlameLeftToRight, "blame-lr"},
    {GadgetKind::BlameRightToLeft, "blame-rl"},
    {GadgetKind::BlameCounterPos, "blame-cpos"},
    {GadgetKind::BlameCounterNeg, "blame-cneg"},
    {GadgetKind::FinalSink, "final"},
};

const std::map<VertexRole, std::string> kRoleNames = {
    {VertexRole::None, "none"},
    {VertexRole::ResetFirst, "reset-1"},
    {VertexRole::ResetSecond, "reset-2"},
    {VertexRole::ResetThird, "reset-3"},
    {VertexRole::SimLoop, "sim-loop"},
    {VertexRole::SideCheck, "side-check"},
    {VertexRole::Declare, "declare"},
    {VertexRole::CounterCheckPos, "check-cpos"},
    {VertexRole::CounterCheckNeg, "check-cneg"},
    {VertexRole::BlameLoop, "blame-loop"},
    {VertexRole::Sink, "sink"},
};

template <typename E>
E enum_from(const std::map<E, std::string>& names, const std::string& s) {
    for (const auto& [k, v] : names)
        if (v == s) return k;
    throw std::invalid_argument("unknown enum value '" + s + "'");
}

const char* dir_name(StepDir d) {
    switch (d) {
        case StepDir::LeftToRight: return "lr";
        case StepDir::RightToLeft: return "rl";
        default: return "none";
    }
}

StepDir dir_from(const std::string& s) {
    if (s == "lr") return StepDir::LeftToRight;
    if (s == "rl") return StepDir::RightToLeft;
    return StepDir::None;
}

} // namespace

std::string graph_to_jsonl(const GameGraph& g, const std::string& condition_text) {
    std::ostringstream out;
    json header = {{"type", "header"},
                   {"k", g.dimensions()},
                   {"initial", g.initial()},
                   {"dims", g.dim_names()}};
    out << header.dump() << "\n";
    if (!condition_text.empty())
        out << json{{"type", "condition"}, {"text", condition_text}}.dump() << "\n";
    for (std::uint32_t v = 0; v < g.vertices().size(); ++v) {
        const Vertex& vx = g.vertex(v);
        json j = {{"type", "vertex"},
                  {"id", v},
                  {"owner", owner_name(vx.owner)},
                  {"label", vx.label}};
        if (vx.tag.kind != GadgetKind::None) {
            j["tag"] = {{"kind", kKindNames.at(vx.tag.kind)},
                        {"role", kRoleNames.at(vx.tag.role)},
                        {"instance", vx.tag.instance},
                        {"state", vx.tag.machine_state},
                        {"counter", vx.tag.counter},
                        {"dir", dir_name(vx.tag.dir)}};
        }
        out << j.dump() << "\n";
    }
    for (const Edge& e : g.edges()) {
        json j = {{"type", "edge"},
                  {"src", e.src},
                  {"dst", e.dst},
                  {"weights", e.weights},
                  {"tag", e.tag}};
        out << j.dump() << "\n";
    }
    return out.str();
}

GameGraph graph_from_jsonl(const std::string& text, std::string* condition_text) {
    std::istringstream in(text);
    std::string line;
    std::uint32_t k = 0, initial = 0;
    std::vector<std::string> dims;
    std::map<std::uint32_t, Vertex> vertex_map;
    std::vector<Edge> edges;
    bool have_header = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        json j = json::parse(line);
        const std::string type = j.at("type");
        if (type == "header") {
            k = j.at("k");
            initial = j.at("initial");
            dims = j.value("dims", std::vector<std::string>{});
            have_header = true;
        } else if (type == "condition") {
            if (condition_text) *condition_text = j.at("text");
        } else if (type == "vertex") {
            Vertex v;
            v.owner = owner_from(j.at("owner"));
            v.label = j.value("label", "");
            if (j.contains("tag")) {
                const json& t = j["tag"];
                v.tag.kind = enum_from(kKindNames, t.at("kind"));
                v.tag.role = enum_from(kRoleNames, t.at("role"));
                v.tag.instance = t.value("instance", -1);
                v.tag.machine_state = t.value("state", "");
                v.tag.counter = t.value("counter", 0);
                v.tag.dir = dir_from(t.value("dir", "none"));
            }
            vertex_map[(std::uint32_t)j.at("id")] = std::move(v);
        } else if (type == "edge") {
            Edge e;
            e.src = j.at("src");
            e.dst = j.at("dst");
            e.weights = j.at("weights").get<std::vector<std::int64_t>>();
            e.tag = j.value("tag", "");
            edges.push_back(std::move(e));
        } else {
            throw std::invalid_argument("unknown record type '" + type + "'");
        }
    }
    if (!have_header) throw std::invalid_argument("graph stream has no header record");
    std::vector<Vertex> vertices(vertex_map.empty() ? 0 : vertex_map.rbegin()->first + 1);
    for (auto& [id, v] : vertex_map) vertices[id] = std::move(v);
    return GameGraph(k, initial, std::move(dims), std::move(vertices), std::move(edges));
}

std::string graph_to_dot(const GameGraph& g) {
    std::ostringstream out;
    out << "digraph game {\n  rankdir=LR;\n  node [fontsize=10];\n";
    // group vertices by gadget instance
    std::map<std::int32_t, std::vector<std::uint32_t>> clusters;
    std::vector<std::uint32_t> loose;
    for (std::uint32_t v = 0; v < g.vertices().size(); ++v) {
        if (g.vertex(v).tag.instance >= 0)
            clusters[g.vertex(v).tag.instance].push_back(v);
        else
            loose.push_back(v);
    }
    auto emit_vertex = [&](std::uint32_t v, const char* indent) {
        const Vertex& vx = g.vertex(v);
        out << indent << "v" << v << " [label=\"" << vx.label << "\", shape="
            << (vx.owner == Owner::P1 ? "circle" : "box") << "];\n";
    };
    for (const auto& [inst, members] : clusters) {
        out << "  subgraph cluster_" << inst << " {\n    style=dashed;\n";
        for (std::uint32_t v : members) emit_vertex(v, "    ");
        out << "  }\n";
    }
    for (std::uint32_t v : loose) emit_vertex(v, "  ");
    for (const Edge& e : g.edges()) {
        std::ostringstream lbl;
        if (!e.tag.empty()) lbl << e.tag;
        bool any = false;
        for (std::size_t d = 0; d < e.weights.size(); ++d)
            if (e.weights[d] != 0) {
                std::string dim = d < g.dim_names().size() ? g.dim_names()[d] : std::to_string(d);
                lbl << (any || !e.tag.empty() ? " " : "") << dim << "=" << e.weights[d];
                any = true;
            }
        out << "  v" << e.src << " -> v" << e.dst << " [label=\"" << lbl.str() << "\"];\n";
    }
    out << "}\n";
    return out.str();
}

} // namespace rmpg
