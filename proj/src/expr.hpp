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
#include <vector>

#include "condition.hpp"
#include "graph.hpp"
#include "rational.hpp"
#include "reduction.hpp"

namespace rmpg {

/**
 * Quantitative limit-average expression: the closure of the per-dimension
 * InfAvg/SupAvg atoms under min, max, sum and numerical complement.
 */
class Expr {
  public:
    enum class Type : std::uint8_t { InfAvg, SupAvg, Min, Max, Sum, Neg };

    static Expr inf_avg(std::uint32_t dim);
    static Expr sup_avg(std::uint32_t dim);
    static Expr min_of(std::vector<Expr> children);
    static Expr max_of(std::vector<Expr> children);
    static Expr sum_of(std::vector<Expr> children);
    static Expr neg(Expr child);

    Type type() const { return type_; }
    std::uint32_t dim() const { return dim_; }
    const std::vector<Expr>& children() const { return children_; }

    std::string str(const std::vector<std::string>* dim_names = nullptr) const;

  private:
    Expr() = default;
    Type type_ = Type::InfAvg;
    std::uint32_t dim_ = 0;
    std::vector<Expr> children_;
};

/// Exact structural evaluation on a limit vector. Throws std::out_of_range
/// when an atom's dimension exceeds the vector.
Rational eval_expr(const Expr& e, const LimitVector& lv);

/// Grammar: `infavg(i)`, `supavg(i)`, `min(e,...)`, `max(e,...)`,
/// `sum(e,...)`, `neg(e)`.
Expr parse_expr(const std::string& text);

/**
 * The expression family mirroring the two-counter winning condition:
 * e1/e2/e3 cover the side, counter and liveness blocks, full = min of the
 * three, complement = -full. The condition holds iff full >= 0, and fails
 * iff complement > 0.
 */
struct ExpressionFamily {
    Expr e1;
    Expr e2;
    Expr e3;
    Expr full;
    Expr complement;
};

/// Requires the two-counter layout. Throws std::invalid_argument otherwise.
ExpressionFamily build_condition_expressions(const DimensionLayout& lay);

/// Evaluates both directions of the condition/expression correspondence on
/// one limit vector: first = (condition == (full >= 0)), second =
/// (!condition == (complement > 0)).
std::pair<bool, bool> check_equivalence(const LimitVector& lv, const DimensionLayout& lay);

} // namespace rmpg
