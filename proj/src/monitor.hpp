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

#include "engine.hpp"
#include "strategy.hpp"

namespace rmpg {

/**
 * Runtime checks L1..L7 replay a recorded play against the construction's
 * invariants, each reporting every inequality instance exactly:
 *
 *   L1  guard decay: Avg(gs) <= -delta through the first N simulated steps.
 *   L2  side-blame payoff: the punished side average and both guards end
 *       at or below -gamma_side after a justified side blame.
 *   L3  loop band: every sim loop phase runs within |g_s|(1 +- 2 eps).
 *   L4  counter drift: cp/cm stay under their guard-coupled upper bounds.
 *   L5  counter-blame payoff: same as L2 for zero-test blames, gamma_counter.
 *   L6  honest-strategy lower bounds at every simulated step.
 *   L7  blame tradeoff: driving a punished average below -eps_i forces the
 *       matching guard average above -eps_i.
 *
 * A check is vacuous (applicable=false) when its hypotheses never arise in
 * the play; a failing check pinpoints the first violating round.
 */
struct CheckFailure {
    std::int64_t round = 0;
    std::string what;
};

struct MonitorReport {
    std::string id;
    std::string title;
    bool applicable = false;
    bool pass = true;
    std::int64_t checks = 0;
    std::optional<CheckFailure> first_failure;
    std::vector<std::string> notes;

    bool ok() const { return pass; }
    std::string text() const;
};

MonitorReport check_L1(const PlayRecord& rec, const RefereeParams& params);
MonitorReport check_L2(const PlayRecord& rec, const RefereeParams& params);
MonitorReport check_L3(const PlayRecord& rec, const RefereeParams& params);
MonitorReport check_L4(const PlayRecord& rec, const RefereeParams& params);
MonitorReport check_L5(const PlayRecord& rec, const RefereeParams& params);
MonitorReport check_L6(const PlayRecord& rec);
MonitorReport check_L7(const PlayRecord& rec);

/// Runs the requested checks ("L1".."L7"). L1..L5 need the referee params.
std::vector<MonitorReport> run_monitors(const PlayRecord& rec,
                                        const std::vector<std::string>& ids,
                                        const std::optional<RefereeParams>& params);

/**
 * Round-level tolerance invariant: from the anchor round on, at every round
 * either both side averages stay above -delta or the side guard does, and
 * the same for the counter block. The anchor is the entry round of the
 * first invocation whose visit tolerance 1/(i+10) is at most delta; when
 * the play never reaches that visit count the report instead finds the
 * earliest round from which the invariant holds through the horizon and
 * requires it to sit in the first half of the play.
 */
struct RoundInvariantReport {
    Rational delta;
    std::optional<std::int64_t> anchor_round;  // set when anchored on a visit count
    std::int64_t stable_from = 0;              // fallback anchor otherwise
    std::int64_t checked_rounds = 0;
    std::int64_t violations = 0;
    std::int64_t first_violation = -1;
    bool pass = false;

    std::string text() const;
};

RoundInvariantReport check_round_invariant(const PlayRecord& rec, const Rational& delta);

} // namespace rmpg
