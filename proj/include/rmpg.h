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

/*
 * C interface of the rmpg workbench: parse and validate two-sided counter
 * machines, compile them into multidimensional mean-payoff games, play the
 * built-in strategies against each other, and check the recorded plays
 * against the construction's invariants.
 *
 * All handles are opaque; every function that can fail returns an
 * rmpg_status and leaves a human-readable message in rmpg_last_error()
 * (thread-local). Strings returned through char** are heap-allocated and
 * must be released with rmpg_string_free().
 */

#ifndef RMPG_H
#define RMPG_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rmpg_status {
    RMPG_OK = 0,
    RMPG_ERR_PARSE = 1,    /* malformed machine/graph/expression text */
    RMPG_ERR_INVALID = 2,  /* well-formedness violations or failed checks */
    RMPG_ERR_ARG = 3,      /* bad argument, unknown strategy or check id */
    RMPG_ERR_IO = 4,
    RMPG_ERR_INTERNAL = 5
} rmpg_status;

typedef struct rmpg_machine rmpg_machine;
typedef struct rmpg_game rmpg_game;
typedef struct rmpg_play rmpg_play;

/* Message of the most recent failure on this thread; never NULL. */
const char* rmpg_last_error(void);
void rmpg_string_free(char* s);

/* ---- machines ---- */
rmpg_status rmpg_machine_parse(const char* text, rmpg_machine** out);
rmpg_status rmpg_machine_parse_file(const char* path, rmpg_machine** out);
/* *ok is 1 when the machine is well formed; otherwise *report (if non-NULL)
 * receives one violation per line. */
rmpg_status rmpg_machine_validate(const rmpg_machine* m, int* ok, char** report);
rmpg_status rmpg_machine_print(const rmpg_machine* m, char** text);
void rmpg_machine_free(rmpg_machine* m);

/* ---- compiled games ---- */
rmpg_status rmpg_game_compile(const rmpg_machine* m, rmpg_game** out);
rmpg_status rmpg_game_load_file(const char* path, rmpg_game** out);
rmpg_status rmpg_game_save_file(const rmpg_game* g, const char* path);
rmpg_status rmpg_game_to_dot(const rmpg_game* g, char** dot);
rmpg_status rmpg_game_condition(const rmpg_game* g, char** condition_text);
uint32_t rmpg_game_dimensions(const rmpg_game* g);
void rmpg_game_free(rmpg_game* g);

/* ---- plays ----
 * Strategy specs: "tau", "referee", "random:SEED",
 * "cheat:STEP:zero-when-positive", "cheat:STEP:positive-when-zero",
 * "cheat-loop:STEP:over", "cheat-loop:STEP:under", "never-blame",
 * "spurious:MODE", "mixed:SEED". The referee requires halt_bound > 10;
 * pass halt_bound < 0 when no bound is supplied. */
rmpg_status rmpg_simulate(const rmpg_game* g, const char* p1, const char* p2,
                          int64_t halt_bound, int64_t horizon, rmpg_play** out);
rmpg_status rmpg_play_summary(const rmpg_play* p, char** text);
/* 1 when the play ended captive in a certified self-loop. */
int rmpg_play_lasso(const rmpg_play* p);
int64_t rmpg_play_blames(const rmpg_play* p);
/* 1 condition holds exactly, 0 it fails exactly, -1 only an estimate. */
int rmpg_play_condition_verdict(const rmpg_play* p);
rmpg_status rmpg_play_trace(const rmpg_play* p, char** jsonl);
void rmpg_play_free(rmpg_play* p);

/* Runs the named checks ("L1".."L7", comma separated) on a recorded play.
 * L1..L5 need halt_bound. *all_pass is 1 when every non-vacuous check
 * passed; *report (if non-NULL) receives the full text. */
rmpg_status rmpg_monitor(const rmpg_play* p, const char* checks, int64_t halt_bound,
                         int* all_pass, char** report);

/* ---- expressions ----
 * expr: `infavg(i)`, `supavg(i)`, `min(...)`, `max(...)`, `sum(...)`,
 * `neg(...)`. lv: 2k whitespace-separated rationals (k inf then k sup
 * components). *value receives the exact rational result. */
rmpg_status rmpg_expr_eval(const char* expr, const char* lv, char** value);

#ifdef __cplusplus
}
#endif

#endif /* RMPG_H */
