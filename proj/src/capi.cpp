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

#include "rmpg.h"

#include <cctype>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <memory>
#include <sstream>

#include "condition.hpp"
#include "engine.hpp"
#include "expr.hpp"
#include "machine.hpp"
#include "monitor.hpp"
#include "reduction.hpp"
#include "strategy.hpp"

namespace {

thread_local std::string g_last_error = "";

char* dup_string(const std::string& s) {
    char* out = (char*)std::malloc(s.size() + 1);
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

rmpg_status fail(rmpg_status code, const std::string& message) {
    g_last_error = message;
    return code;
}

struct GameData {
    rmpg::GameGraph graph;
    rmpg::Condition condition;
    std::string condition_text;
};

} // namespace

struct rmpg_machine {
    rmpg::TwoSidedMachine m;
};

struct rmpg_game {
    std::shared_ptr<const GameData> data;
};

struct rmpg_play {
    std::shared_ptr<const GameData> game;
    rmpg::PlayRecord rec;
    rmpg::OutcomeSummary summary;
};

extern "C" {

const char* rmpg_last_error(void) { return g_last_error.c_str(); }

void rmpg_string_free(char* s) { std::free(s); }

rmpg_status rmpg_machine_parse(const char* text, rmpg_machine** out) {
    if (!text || !out) return fail(RMPG_ERR_ARG, "null argument");
    try {
        auto* h = new rmpg_machine{rmpg::parse_machine(text)};
        *out = h;
        return RMPG_OK;
    } catch (const rmpg::MachineParseError& e) {
        return fail(RMPG_ERR_PARSE, e.what());
    } catch (const std::exception& e) {
        return fail(RMPG_ERR_INTERNAL, e.what());
    }
}

rmpg_status rmpg_machine_parse_file(const char* path, rmpg_machine** out) {
    if (!path || !out) return fail(RMPG_ERR_ARG, "null argument");
    std::ifstream in(path);
    if (!in) return fail(RMPG_ERR_IO, std::string("cannot open '") + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return rmpg_machine_parse(buf.str().c_str(), out);
}

rmpg_status rmpg_machine_validate(const rmpg_machine* m, int* ok, char** report) {
    if (!m || !ok) return fail(RMPG_ERR_ARG, "null argument");
    try {
        std::vector<std::string> bad = rmpg::validate(m->m);
        *ok = bad.empty() ? 1 : 0;
        if (report) {
            std::ostringstream out;
            for (const auto& b : bad) out << b << "\n";
            *report = dup_string(out.str());
        }
        return RMPG_OK;
    } catch (const std::exception& e) {
        return fail(RMPG_ERR_INTERNAL, e.what());
    }
}

rmpg_status rmpg_machine_print(const rmpg_machine* m, char** text) {
    if (!m || !text) return fail(RMPG_ERR_ARG, "null argument");
    *text = dup_string(rmpg::print_machine(m->m));
    return RMPG_OK;
}

void rmpg_machine_free(rmpg_machine* m) { delete m; }

rmpg_status rmpg_game_compile(const rmpg_machine* m, rmpg_game** out) {
    if (!m || !out) return fail(RMPG_ERR_ARG, "null argument");
    try {
        rmpg::ReductionOutput red = rmpg::build_game(m->m);
        auto data = std::make_shared<GameData>();
        data->condition_text = red.condition.str();
        data->graph = std::move(red.graph);
        data->condition = std::move(red.condition);
        *out = new rmpg_game{std::move(data)};
        return RMPG_OK;
    } catch (const std::invalid_argument& e) {
        return fail(RMPG_ERR_INVALID, e.what());
    } catch (const std::exception& e) {
        return fail(RMPG_ERR_INTERNAL, e.what());
    }
}

rmpg_status rmpg_game_load_file(const char* path, rmpg_game** out) {
    if (!path || !out) return fail(RMPG_ERR_ARG, "null argument");
    std::ifstream in(path);
    if (!in) return fail(RMPG_ERR_IO, std::string("cannot open '") + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    try {
        auto data = std::make_shared<GameData>();
        std::string cond_text;
        data->graph = rmpg::graph_from_jsonl(buf.str(), &cond_text);
        if (cond_text.empty())
            return fail(RMPG_ERR_PARSE, "graph stream carries no condition record");
        data->condition = rmpg::parse_condition(cond_text);
        data->condition_text = cond_text;
        *out = new rmpg_game{std::move(data)};
        return RMPG_OK;
    } catch (const std::exception& e) {
        return fail(RMPG_ERR_PARSE, e.what());
    }
}

rmpg_status rmpg_game_save_file(const rmpg_game* g, const char* path) {
    if (!g || !path) return fail(RMPG_ERR_ARG, "null argument");
    std::ofstream out(path);
    if (!out) return fail(RMPG_ERR_IO, std::string("cannot write '") + path + "'");
    out << rmpg::graph_to_jsonl(g->data->graph, g->data->condition_text);
    return out ? RMPG_OK : fail(RMPG_ERR_IO, "write failed");
}

rmpg_status rmpg_game_to_dot(const rmpg_game* g, char** dot) {
    if (!g || !dot) return fail(RMPG_ERR_ARG, "null argument");
    *dot = dup_string(rmpg::graph_to_dot(g->data->graph));
    return RMPG_OK;
}

rmpg_status rmpg_game_condition(const rmpg_game* g, char** condition_text) {
    if (!g || !condition_text) return fail(RMPG_ERR_ARG, "null argument");
    *condition_text = dup_string(g->data->condition_text);
    return RMPG_OK;
}

uint32_t rmpg_game_dimensions(const rmpg_game* g) { return g ? g->data->graph.dimensions() : 0; }

void rmpg_game_free(rmpg_game* g) { delete g; }

rmpg_status rmpg_simulate(const rmpg_game* g, const char* p1, const char* p2,
                          int64_t halt_bound, int64_t horizon, rmpg_play** out) {
    if (!g || !p1 || !p2 || !out) return fail(RMPG_ERR_ARG, "null argument");
    try {
        std::optional<int64_t> bound;
        if (halt_bound >= 0) bound = halt_bound;
        auto s1 = rmpg::make_strategy(p1, bound);
        auto s2 = rmpg::make_strategy(p2, bound);
        auto play = std::make_unique<rmpg_play>();
        play->game = g->data;
        play->rec = rmpg::run_play(g->data->graph, *s1, *s2, horizon);
        play->summary = rmpg::summarize_outcome(play->rec, g->data->condition);
        *out = play.release();
        return RMPG_OK;
    } catch (const std::invalid_argument& e) {
        return fail(RMPG_ERR_ARG, e.what());
    } catch (const std::exception& e) {
        return fail(RMPG_ERR_INTERNAL, e.what());
    }
}

rmpg_status rmpg_play_summary(const rmpg_play* p, char** text) {
    if (!p || !text) return fail(RMPG_ERR_ARG, "null argument");
    *text = dup_string(p->summary.text(p->game->graph));
    return RMPG_OK;
}

int rmpg_play_lasso(const rmpg_play* p) { return p && p->rec.lasso ? 1 : 0; }

int64_t rmpg_play_blames(const rmpg_play* p) { return p ? p->rec.blame_count : 0; }

int rmpg_play_condition_verdict(const rmpg_play* p) {
    if (!p) return -1;
    if (p->summary.condition_holds) return *p->summary.condition_holds ? 1 : 0;
    return -1;
}

rmpg_status rmpg_play_trace(const rmpg_play* p, char** jsonl) {
    if (!p || !jsonl) return fail(RMPG_ERR_ARG, "null argument");
    try {
        *jsonl = dup_string(rmpg::trace_to_jsonl(p->rec));
        return RMPG_OK;
    } catch (const std::exception& e) {
        return fail(RMPG_ERR_INTERNAL, e.what());
    }
}

void rmpg_play_free(rmpg_play* p) { delete p; }

rmpg_status rmpg_monitor(const rmpg_play* p, const char* checks, int64_t halt_bound,
                         int* all_pass, char** report) {
    if (!p || !checks || !all_pass) return fail(RMPG_ERR_ARG, "null argument");
    try {
        std::vector<std::string> ids;
        std::string cur;
        for (const char* c = checks;; ++c) {
            if (*c == ',' || *c == '\0') {
                if (!cur.empty()) ids.push_back(cur);
                cur.clear();
                if (*c == '\0') break;
            } else if (!std::isspace((unsigned char)*c)) {
                cur.push_back(*c);
            }
        }
        std::optional<rmpg::RefereeParams> params;
        if (halt_bound >= 0) params = rmpg::RefereeParams::for_bound(halt_bound);
        std::vector<rmpg::MonitorReport> reports = rmpg::run_monitors(p->rec, ids, params);
        *all_pass = 1;
        std::ostringstream out;
        for (const auto& r : reports) {
            if (!r.pass) *all_pass = 0;
            out << r.text() << "\n";
        }
        if (report) *report = dup_string(out.str());
        return RMPG_OK;
    } catch (const std::invalid_argument& e) {
        return fail(RMPG_ERR_ARG, e.what());
    } catch (const std::exception& e) {
        return fail(RMPG_ERR_INTERNAL, e.what());
    }
}

rmpg_status rmpg_expr_eval(const char* expr, const char* lv, char** value) {
    if (!expr || !lv || !value) return fail(RMPG_ERR_ARG, "null argument");
    try {
        rmpg::Expr e = rmpg::parse_expr(expr);
        std::istringstream in(lv);
        std::vector<rmpg::Rational> parts;
        std::string tok;
        while (in >> tok) parts.push_back(rmpg::Rational::parse(tok));
        if (parts.empty() || parts.size() % 2 != 0)
            return fail(RMPG_ERR_PARSE, "limit vector needs 2k rationals");
        std::size_t k = parts.size() / 2;
        rmpg::LimitVector v;
        v.inf_avg.assign(parts.begin(), parts.begin() + (std::ptrdiff_t)k);
        v.sup_avg.assign(parts.begin() + (std::ptrdiff_t)k, parts.end());
        v.check();
        *value = dup_string(rmpg::eval_expr(e, v).str());
        return RMPG_OK;
    } catch (const std::out_of_range& e) {
        return fail(RMPG_ERR_ARG, e.what());
    } catch (const std::exception& e) {
        return fail(RMPG_ERR_PARSE, e.what());
    }
}

} // extern "C"
