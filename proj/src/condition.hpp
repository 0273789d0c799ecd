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
#include <string>

#include "graph.hpp"
#include "rational.hpp"

namespace rmpg {

/// One comparison of a limit average against a rational threshold.
struct Atom {
    enum class Kind : std::uint8_t { Inf, Sup };
    enum class Op : std::uint8_t { Ge, Gt, Le, Lt };

    Kind kind = Kind::Inf;
    std::uint32_t dim = 0;
    Op op = Op::Ge;
    Rational threshold;

    bool eval(const LimitVector& lv) const;
    std::string str(const std::vector<std::string>* dim_names = nullptr) const;
};

/**
 * Boolean formula over limit-average atoms. Trees keep explicit structure;
 * the text form gives & a tighter binding than | and ! the tightest.
 */
class Condition {
  public:
    enum class Type : std::uint8_t { Leaf, And, Or, Not };

    static Condition atom(Atom a);
    static Condition conj(Condition a, Condition b);
    static Condition disj(Condition a, Condition b);
    static Condition negate(Condition a);

    /// Defaults to the trivial atom `inf(0) >= 0`.
    Condition() = default;
    Condition(const Condition& o);
    Condition& operator=(const Condition& o);
    Condition(Condition&&) = default;
    Condition& operator=(Condition&&) = default;

    Type type() const { return type_; }
    const Atom& leaf() const { return atom_; }
    const Condition& left() const { return *left_; }
    const Condition& right() const { return *right_; }

    bool contains_not() const;
    /// Largest dimension index mentioned, or -1 for a formula with no atoms.
    std::int64_t max_dim() const;

    /// Structural equality.
    bool same_shape(const Condition& o) const;

    std::string str(const std::vector<std::string>* dim_names = nullptr) const;

  private:
    Type type_ = Type::Leaf;
    Atom atom_;
    std::unique_ptr<Condition> left_;
    std::unique_ptr<Condition> right_;  // null for Not
};

/// Pushes every negation to the leaves by flipping comparison operators and
/// dualizing And/Or. The result is Not-free and evaluates identically.
Condition normalize_positive(const Condition& cond);

/// Structural evaluation against exact limits. Throws std::out_of_range when
/// an atom's dimension exceeds the vector.
bool eval_condition(const Condition& cond, const LimitVector& lv);

/// Text grammar: `inf(i) >= q`, `sup(i) < q`, `&`, `|`, `!`, parentheses;
/// thresholds as integers or `a/b`.
Condition parse_condition(const std::string& text);

} // namespace rmpg
