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

#include <memory>
#include <optional>
#include <string>

#include "engine.hpp"
#include "rational.hpp"

namespace rmpg {

/**
 * Exact constants driving the referee, derived from the halt bound N of the
 * simulated machine. epsilon and delta_stated follow the construction's
 * closed forms; delta is the slightly smaller value the engine can certify
 * round by round once the zero-weight wiring moves between gadgets are
 * counted as rounds (the closed form assumes loop rounds only), and the
 * gamma thresholds are derived from it with the integer-rounding slack of
 * the blame loop counts folded in. min_guard is the guard magnitude the
 * referee establishes before leaving the reset gadget so that that slack
 * stays within budget.
 */
struct RefereeParams {
    std::int64_t halt_bound = 0;  // N, must exceed 10
    Rational epsilon;             // 1/(N+1)^2
    Rational delta_stated;        // 1/(1/2 + N(1+2*eps))
    Rational delta;               // 1/(2 + N(1+4*eps))
    Rational gamma_side;          // min((eps/2)/(1/delta+eps/2), (eps/8)/(1+1/delta))
    Rational gamma_counter;       // min(1/(20N), delta/9)
    std::int64_t min_guard = 0;   // 8*(N+1)^2

    static RefereeParams for_bound(std::int64_t halt_bound);
};

/// Player 1's honest simulation strategy: restore the reset invariants with
/// per-visit tolerance 1/(i+10), loop each sim gadget exactly |g_s| rounds,
/// declare zero tests truthfully, stay at the final sink forever.
std::unique_ptr<Strategy> make_tau();

/// Player 2's auditing strategy: establish the reset invariants, blame any
/// side or zero-test violation, run each blame loop for its prescribed
/// count, then hand the play back to reset.
std::unique_ptr<Strategy> make_referee(const RefereeParams& params);

/// Uniform choice among outgoing edges, deterministic per seed.
std::unique_ptr<Strategy> make_random(std::uint64_t seed);

/// Plays like tau but lies at one zero test of every invocation:
/// claim_zero_when_positive declares zero on a positive counter, otherwise
/// the strategy declares positive on a zero counter.
std::unique_ptr<Strategy> make_cheat_zero_test(std::int64_t step, bool claim_zero_when_positive);

/// Plays like tau but loops one sim phase per invocation for 2|g_s| rounds
/// (overshoot) or floor(|g_s|/2) rounds (undershoot).
std::unique_ptr<Strategy> make_cheat_loop(std::int64_t step, bool overshoot);

/// Adversarial player 2 that always answers "ok" and rushes through reset.
std::unique_ptr<Strategy> make_never_blame();

/// Adversarial player 2 that blames the first side check of every
/// invocation. mode selects the blame-loop length: 0 leaves immediately,
/// 1 loops for as many rounds as were played before entering, 2 loops until
/// the punished guard total reaches zero.
std::unique_ptr<Strategy> make_spurious_blame(int mode);

/// Adversarial player 2 mixing honest and spurious behaviour at random.
std::unique_ptr<Strategy> make_mixed_adversary(std::uint64_t seed);

/**
 * Parses a strategy spec: "tau", "referee", "random:SEED",
 * "cheat:STEP:zero-when-positive", "cheat:STEP:positive-when-zero",
 * "cheat-loop:STEP:over", "cheat-loop:STEP:under", "never-blame",
 * "spurious:MODE", "mixed:SEED". The referee requires a halt bound.
 */
std::unique_ptr<Strategy> make_strategy(const std::string& spec,
                                        std::optional<std::int64_t> halt_bound);

} // namespace rmpg
