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

// Command-line front end over the shared-library C interface. Exit codes:
// 0 success, 1 domain failure (violations, failed checks, condition
// falsified), 2 usage or I/O errors.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "rmpg.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitDomain = 1;
constexpr int kExitUsage = 2;

int status_exit(rmpg_status st) {
    switch (st) {
        case RMPG_OK: return kExitOk;
        case RMPG_ERR_PARSE:
        case RMPG_ERR_INVALID: return kExitDomain;
        default: return kExitUsage;
    }
}

int complain(rmpg_status st) {
    std::cerr << "error: " << rmpg_last_error() << "\n";
    return status_exit(st);
}

struct StringOut {
    char* s = nullptr;
    ~StringOut() { rmpg_string_free(s); }
};

struct MachineHandle {
    rmpg_machine* m = nullptr;
    ~MachineHandle() { rmpg_machine_free(m); }
};

struct GameHandle {
    rmpg_game* g = nullptr;
    ~GameHandle() { rmpg_game_free(g); }
};

struct PlayHandle {
    rmpg_play* p = nullptr;
    ~PlayHandle() { rmpg_play_free(p); }
};

int cmd_validate(const std::string& machine_file) {
    MachineHandle m;
    if (rmpg_status st = rmpg_machine_parse_file(machine_file.c_str(), &m.m); st != RMPG_OK)
        return complain(st);
    int ok = 0;
    StringOut report;
    if (rmpg_status st = rmpg_machine_validate(m.m, &ok, &report.s); st != RMPG_OK)
        return complain(st);
    if (!ok) {
        std::cerr << report.s;
        return kExitDomain;
    }
    std::cout << "ok\n";
    return kExitOk;
}

int cmd_compile(const std::string& machine_file, const std::string& out_file,
                const std::string& dot_file) {
    MachineHandle m;
    if (rmpg_status st = rmpg_machine_parse_file(machine_file.c_str(), &m.m); st != RMPG_OK)
        return complain(st);
    GameHandle g;
    if (rmpg_status st = rmpg_game_compile(m.m, &g.g); st != RMPG_OK) return complain(st);
    if (rmpg_status st = rmpg_game_save_file(g.g, out_file.c_str()); st != RMPG_OK)
        return complain(st);
    if (!dot_file.empty()) {
        StringOut dot;
        if (rmpg_status st = rmpg_game_to_dot(g.g, &dot.s); st != RMPG_OK) return complain(st);
        std::ofstream out(dot_file);
        if (!out) {
            std::cerr << "error: cannot write '" << dot_file << "'\n";
            return kExitUsage;
        }
        out << dot.s;
    }
    StringOut cond;
    rmpg_game_condition(g.g, &cond.s);
    std::cout << "compiled: k=" << rmpg_game_dimensions(g.g) << " condition: " << cond.s << "\n";
    return kExitOk;
}

int cmd_simulate(const std::string& graph_file, const std::string& p1, const std::string& p2,
                 long long halt_bound, long long horizon, const std::string& trace_file) {
    GameHandle g;
    if (rmpg_status st = rmpg_game_load_file(graph_file.c_str(), &g.g); st != RMPG_OK)
        return complain(st);
    PlayHandle play;
    if (rmpg_status st = rmpg_simulate(g.g, p1.c_str(), p2.c_str(), halt_bound, horizon, &play.p);
        st != RMPG_OK)
        return complain(st);
    if (!trace_file.empty()) {
        StringOut trace;
        if (rmpg_status st = rmpg_play_trace(play.p, &trace.s); st != RMPG_OK)
            return complain(st);
        std::ofstream out(trace_file);
        if (!out) {
            std::cerr << "error: cannot write '" << trace_file << "'\n";
            return kExitUsage;
        }
        out << trace.s;
    }
    StringOut summary;
    rmpg_play_summary(play.p, &summary.s);
    std::cout << summary.s << "\n";
    return kExitOk;
}

int cmd_monitor(const std::string& graph_file, const std::string& p1, const std::string& p2,
                long long halt_bound, long long horizon, const std::string& checks) {
    GameHandle g;
    if (rmpg_status st = rmpg_game_load_file(graph_file.c_str(), &g.g); st != RMPG_OK)
        return complain(st);
    PlayHandle play;
    if (rmpg_status st = rmpg_simulate(g.g, p1.c_str(), p2.c_str(), halt_bound, horizon, &play.p);
        st != RMPG_OK)
        return complain(st);
    int all_pass = 0;
    StringOut report;
    if (rmpg_status st = rmpg_monitor(play.p, checks.c_str(), halt_bound, &all_pass, &report.s);
        st != RMPG_OK)
        return complain(st);
    std::cout << report.s;
    return all_pass ? kExitOk : kExitDomain;
}

int cmd_expr_eval(const std::string& expr_file, const std::string& lv) {
    std::ifstream in(expr_file);
    if (!in) {
        std::cerr << "error: cannot open '" << expr_file << "'\n";
        return kExitUsage;
    }
    std::stringstream buf;
    buf << in.rdbuf();
    StringOut value;
    if (rmpg_status st = rmpg_expr_eval(buf.str().c_str(), lv.c_str(), &value.s); st != RMPG_OK)
        return complain(st);
    std::cout << value.s << "\n";
    return kExitOk;
}

int cmd_export(const std::string& graph_file, const std::string& dot_file) {
    GameHandle g;
    if (rmpg_status st = rmpg_game_load_file(graph_file.c_str(), &g.g); st != RMPG_OK)
        return complain(st);
    StringOut dot;
    if (rmpg_status st = rmpg_game_to_dot(g.g, &dot.s); st != RMPG_OK) return complain(st);
    if (dot_file.empty() || dot_file == "-") {
        std::cout << dot.s;
    } else {
        std::ofstream out(dot_file);
        if (!out) {
            std::cerr << "error: cannot write '" << dot_file << "'\n";
            return kExitUsage;
        }
        out << dot.s;
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"rmpg: counter machines compiled into multidimensional mean-payoff games"};
    app.require_subcommand(1);

    std::string machine_file, graph_file, out_file, dot_file, trace_file;
    std::string p1 = "tau", p2 = "referee", checks = "L1,L2,L3,L4,L5,L6,L7", lv, expr_file;
    long long halt_bound = -1, horizon = 100000;

    auto* validate = app.add_subcommand("validate", "check a machine file");
    validate->add_option("machine", machine_file, "machine DSL file")->required();

    auto* compile = app.add_subcommand("compile", "compile a machine into a game");
    compile->add_option("machine", machine_file)->required();
    compile->add_option("--out", out_file, "graph output (JSON lines)")->required();
    compile->add_option("--dot", dot_file, "optional GraphViz output");

    auto* simulate = app.add_subcommand("simulate", "play two strategies against each other");
    simulate->add_option("graph", graph_file)->required();
    simulate->add_option("--p1", p1, "player-1 strategy spec");
    simulate->add_option("--p2", p2, "player-2 strategy spec");
    simulate->add_option("--halt-bound", halt_bound, "halt step bound N for the referee");
    simulate->add_option("--horizon", horizon, "rounds to play");
    simulate->add_option("--trace", trace_file, "trace output (JSON lines)");

    auto* monitor = app.add_subcommand("monitor", "simulate and run invariant checks");
    monitor->add_option("graph", graph_file)->required();
    monitor->add_option("--p1", p1);
    monitor->add_option("--p2", p2);
    monitor->add_option("--halt-bound", halt_bound);
    monitor->add_option("--horizon", horizon);
    monitor->add_option("--lemmas", checks, "comma-separated check ids L1..L7");

    auto* expr_eval = app.add_subcommand("expr-eval", "evaluate an expression on a limit vector");
    expr_eval->add_option("--expr", expr_file, "expression file")->required();
    expr_eval->add_option("--lv", lv, "2k rationals: inf components then sup")->required();

    auto* exp = app.add_subcommand("export", "render a compiled graph as GraphViz");
    exp->add_option("graph", graph_file)->required();
    exp->add_option("--dot", dot_file, "output file, '-' for stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    if (validate->parsed()) return cmd_validate(machine_file);
    if (compile->parsed()) return cmd_compile(machine_file, out_file, dot_file);
    if (simulate->parsed())
        return cmd_simulate(graph_file, p1, p2, halt_bound, horizon, trace_file);
    if (monitor->parsed()) return cmd_monitor(graph_file, p1, p2, halt_bound, horizon, checks);
    if (expr_eval->parsed()) return cmd_expr_eval(expr_file, lv);
    if (exp->parsed()) return cmd_export(graph_file, dot_file);
    return kExitUsage;
}
