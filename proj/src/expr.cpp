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

#include "expr.hpp"

#include <cctype>
#include <sstream>
#include <stdexcept>

namespace rmpg {

Expr Expr::inf_avg(std::uint32_t dim) {
    Expr e;
    e.type_ = Type::InfAvg;
    e.dim_ = dim;
    return e;
}

Expr Expr::sup_avg(std::uint32_t dim) {
    Expr e;
    e.type_ = Type::SupAvg;
    e.dim_ = dim;
    return e;
}

Expr Expr::min_of(std::vector<Expr> children) {
    if (children.size() < 2) throw std::invalid_argument("min needs at least two operands");
    Expr e;
    e.type_ = Type::Min;
    e.children_ = std::move(children);
    return e;
}

Expr Expr::max_of(std::vector<Expr> children) {
    if (children.size() < 2) throw std::invalid_argument("max needs at least two operands");
    Expr e;
    e.type_ = Type::Max;
    e.children_ = std::move(children);
    return e;
}

Expr Expr::sum_of(std::vector<Expr> children) {
    if (children.size() < 2) throw std::invalid_argument("sum needs at least two operands");
    Expr e;
    e.type_ = Type::Sum;
    e.children_ = std::move(children);
    return e;
}

Expr Expr::neg(Expr child) {
    Expr e;
    e.type_ = Type::Neg;
    e.children_.push_back(std::move(child));
    return e;
}

std::string Expr::str(const std::vector<std::string>* dim_names) const {
    auto dim_str = [&](std::uint32_t d) {
        if (dim_names && d < dim_names->size()) return (*dim_names)[d];
        return std::to_string(d);
    };
    std::ostringstream out;
    switch (type_) {
        case Type::InfAvg: out << "infavg(" << dim_str(dim_) << ")"; break;
        case Type::SupAvg: out << "supavg(" << dim_str(dim_) << ")"; break;
        case Type::Neg: out << "neg(" << children_[0].str(dim_names) << ")"; break;
        default: {
            out << (type_ == Type::Min ? "min(" : type_ == Type::Max ? "max(" : "sum(");
            for (std::size_t i = 0; i < children_.size(); ++i) {
                if (i) out << ", ";
                out << children_[i].str(dim_names);
            }
            out << ")";
        }
    }
    return out.str();
}

Rational eval_expr(const Expr& e, const LimitVector& lv) {
    switch (e.type()) {
        case Expr::Type::InfAvg:
            if (e.dim() >= lv.dims()) throw std::out_of_range("expression dimension out of range");
            return lv.inf_avg[e.dim()];
        case Expr::Type::SupAvg:
            if (e.dim() >= lv.dims()) throw std::out_of_range("expression dimension out of range");
            return lv.sup_avg[e.dim()];
        case Expr::Type::Neg: return -eval_expr(e.children()[0], lv);
        case Expr::Type::Min: {
            Rational best = eval_expr(e.children()[0], lv);
            for (std::size_t i = 1; i < e.children().size(); ++i) {
                Rational v = eval_expr(e.children()[i], lv);
                if (v < best) best = v;
            }
            return best;
        }
        case Expr::Type::Max: {
            Rational best = eval_expr(e.children()[0], lv);
            for (std::size_t i = 1; i < e.children().size(); ++i) {
                Rational v = eval_expr(e.children()[i], lv);
                if (v > best) best = v;
            }
            return best;
        }
        case Expr::Type::Sum: {
            Rational total = eval_expr(e.children()[0], lv);
            for (std::size_t i = 1; i < e.children().size(); ++i)
                total += eval_expr(e.children()[i], lv);
            return total;
        }
    }
    throw std::logic_error("unreachable");
}

namespace {

struct ExprParser {
    const std::string& text;
    std::size_t pos = 0;

    explicit ExprParser(const std::string& t) : text(t) {}

    [[noreturn]] void fail(const std::string& what) {
        throw std::invalid_argument("expression parse error at offset " + std::to_string(pos) +
                                    ": " + what);
    }

    void skip_ws() {
        while (pos < text.size() && std::isspace((unsigned char)text[pos])) ++pos;
    }

    bool eat(char c) {
        skip_ws();
        if (pos < text.size() && text[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }

    std::string ident() {
        skip_ws();
        std::size_t start = pos;
        while (pos < text.size() && std::isalpha((unsigned char)text[pos])) ++pos;
        if (pos == start) fail("expected a name");
        return text.substr(start, pos - start);
    }

    std::uint32_t integer() {
        skip_ws();
        std::size_t start = pos;
        while (pos < text.size() && std::isdigit((unsigned char)text[pos])) ++pos;
        if (pos == start) fail("expected an integer");
        return (std::uint32_t)std::stoul(text.substr(start, pos - start));
    }

    Expr parse() {
        std::string name = ident();
        if (!eat('(')) fail("expected '('");
        if (name == "infavg" || name == "supavg") {
            std::uint32_t d = integer();
            if (!eat(')')) fail("expected ')'");
            return name == "infavg" ? Expr::inf_avg(d) : Expr::sup_avg(d);
        }
        if (name == "neg") {
            Expr child = parse();
            if (!eat(')')) fail("expected ')'");
            return Expr::neg(std::move(child));
        }
        if (name == "min" || name == "max" || name == "sum") {
            std::vector<Expr> children;
            children.push_back(parse());
            while (eat(',')) children.push_back(parse());
            if (!eat(')')) fail("expected ')'");
            if (name == "min") return Expr::min_of(std::move(children));
            if (name == "max") return Expr::max_of(std::move(children));
            return Expr::sum_of(std::move(children));
        }
        fail("unknown operator '" + name + "'");
    }
};

} // namespace

Expr parse_expr(const std::string& text) {
    ExprParser p(text);
    Expr e = p.parse();
    p.skip_ws();
    if (p.pos != text.size()) p.fail("trailing input");
    return e;
}

ExpressionFamily build_condition_expressions(const DimensionLayout& lay) {
    if (lay.counter_count != 2)
        throw std::invalid_argument("expression family needs the two-counter layout");
    Expr e1 = Expr::max_of(
        {Expr::min_of({Expr::inf_avg(lay.ell), Expr::inf_avg(lay.r)}), Expr::sup_avg(lay.gs)});
    Expr e2 = Expr::max_of({Expr::min_of({Expr::inf_avg(lay.cp(1)), Expr::inf_avg(lay.cm(1)),
                                          Expr::inf_avg(lay.cp(2)), Expr::inf_avg(lay.cm(2))}),
                            Expr::sup_avg(lay.gc)});
    Expr e3 = Expr::min_of({Expr::sup_avg(lay.x), Expr::sup_avg(lay.y)});
    Expr full = Expr::min_of({e1, e2, e3});
    Expr complement = Expr::neg(full);
    return ExpressionFamily{std::move(e1), std::move(e2), std::move(e3), std::move(full),
                            std::move(complement)};
}

std::pair<bool, bool> check_equivalence(const LimitVector& lv, const DimensionLayout& lay) {
    ExpressionFamily fam = build_condition_expressions(lay);
    Condition phi = build_condition(lay);
    bool holds = eval_condition(phi, lv);
    Rational full = eval_expr(fam.full, lv);
    Rational comp = eval_expr(fam.complement, lv);
    return {holds == (full >= Rational(0)), (!holds) == (comp > Rational(0))};
}

} // namespace rmpg
