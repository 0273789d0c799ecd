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

#include "condition.hpp"

#include <cctype>
#include <sstream>
#include <stdexcept>

namespace rmpg {

bool Atom::eval(const LimitVector& lv) const {
    if (dim >= lv.dims()) throw std::out_of_range("atom dimension out of range");
    const Rational& v = kind == Kind::Inf ? lv.inf_avg[dim] : lv.sup_avg[dim];
    switch (op) {
        case Op::Ge: return v >= threshold;
        case Op::Gt: return v > threshold;
        case Op::Le: return v <= threshold;
        case Op::Lt: return v < threshold;
    }
    return false;
}

std::string Atom::str(const std::vector<std::string>* dim_names) const {
    std::ostringstream out;
    out << (kind == Kind::Inf ? "inf(" : "sup(");
    if (dim_names && dim < dim_names->size())
        out << (*dim_names)[dim];
    else
        out << dim;
    out << ") ";
    switch (op) {
        case Op::Ge: out << ">="; break;
        case Op::Gt: out << ">"; break;
        case Op::Le: out << "<="; break;
        case Op::Lt: out << "<"; break;
    }
    out << " " << threshold.str();
    return out.str();
}

Condition Condition::atom(Atom a) {
    Condition c;
    c.type_ = Type::Leaf;
    c.atom_ = a;
    return c;
}

Condition Condition::conj(Condition a, Condition b) {
    Condition c;
    c.type_ = Type::And;
    c.left_ = std::make_unique<Condition>(std::move(a));
    c.right_ = std::make_unique<Condition>(std::move(b));
    return c;
}

Condition Condition::disj(Condition a, Condition b) {
    Condition c;
    c.type_ = Type::Or;
    c.left_ = std::make_unique<Condition>(std::move(a));
    c.right_ = std::make_unique<Condition>(std::move(b));
    return c;
}

Condition Condition::negate(Condition a) {
    Condition c;
    c.type_ = Type::Not;
    c.left_ = std::make_unique<Condition>(std::move(a));
    return c;
}

Condition::Condition(const Condition& o) : type_(o.type_), atom_(o.atom_) {
    if (o.left_) left_ = std::make_unique<Condition>(*o.left_);
    if (o.right_) right_ = std::make_unique<Condition>(*o.right_);
}

Condition& Condition::operator=(const Condition& o) {
    if (this != &o) {
        Condition copy(o);
        *this = std::move(copy);
    }
    return *this;
}

bool Condition::contains_not() const {
    switch (type_) {
        case Type::Leaf: return false;
        case Type::Not: return true;
        default: return left_->contains_not() || right_->contains_not();
    }
}

std::int64_t Condition::max_dim() const {
    switch (type_) {
        case Type::Leaf: return atom_.dim;
        case Type::Not: return left_->max_dim();
        default: return std::max(left_->max_dim(), right_->max_dim());
    }
}

bool Condition::same_shape(const Condition& o) const {
    if (type_ != o.type_) return false;
    switch (type_) {
        case Type::Leaf:
            return atom_.kind == o.atom_.kind && atom_.dim == o.atom_.dim &&
                   atom_.op == o.atom_.op && atom_.threshold == o.atom_.threshold;
        case Type::Not: return left_->same_shape(*o.left_);
        default: return left_->same_shape(*o.left_) && right_->same_shape(*o.right_);
    }
}

std::string Condition::str(const std::vector<std::string>* dim_names) const {
    switch (type_) {
        case Type::Leaf: return atom_.str(dim_names);
        case Type::Not: return "!(" + left_->str(dim_names) + ")";
        case Type::And:
            return "(" + left_->str(dim_names) + " & " + right_->str(dim_names) + ")";
        case Type::Or:
            return "(" + left_->str(dim_names) + " | " + right_->str(dim_names) + ")";
    }
    return "";
}

namespace {

Atom::Op flip(Atom::Op op) {
    switch (op) {
        case Atom::Op::Ge: return Atom::Op::Lt;
        case Atom::Op::Gt: return Atom::Op::Le;
        case Atom::Op::Le: return Atom::Op::Gt;
        case Atom::Op::Lt: return Atom::Op::Ge;
    }
    return Atom::Op::Ge;
}

Condition normalize(const Condition& c, bool negated) {
    switch (c.type()) {
        case Condition::Type::Leaf: {
            Atom a = c.leaf();
            if (negated) a.op = flip(a.op);
            return Condition::atom(a);
        }
        case Condition::Type::Not:
            return normalize(c.left(), !negated);
        case Condition::Type::And: {
            Condition l = normalize(c.left(), negated);
            Condition r = normalize(c.right(), negated);
            return negated ? Condition::disj(std::move(l), std::move(r))
                           : Condition::conj(std::move(l), std::move(r));
        }
        case Condition::Type::Or: {
            Condition l = normalize(c.left(), negated);
            Condition r = normalize(c.right(), negated);
            return negated ? Condition::conj(std::move(l), std::move(r))
                           : Condition::disj(std::move(l), std::move(r));
        }
    }
    throw std::logic_error("unreachable");
}

} // namespace

Condition normalize_positive(const Condition& cond) { return normalize(cond, false); }

bool eval_condition(const Condition& cond, const LimitVector& lv) {
    switch (cond.type()) {
        case Condition::Type::Leaf: return cond.leaf().eval(lv);
        case Condition::Type::Not: return !eval_condition(cond.left(), lv);
        case Condition::Type::And:
            return eval_condition(cond.left(), lv) && eval_condition(cond.right(), lv);
        case Condition::Type::Or:
            return eval_condition(cond.left(), lv) || eval_condition(cond.right(), lv);
    }
    throw std::logic_error("unreachable");
}

namespace {

// Recursive-descent parser. Precedence: ! over & over |.
struct CondParser {
    const std::string& text;
    std::size_t pos = 0;

    explicit CondParser(const std::string& t) : text(t) {}

    [[noreturn]] void fail(const std::string& what) {
        throw std::invalid_argument("condition parse error at offset " + std::to_string(pos) +
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

    bool eat_word(std::string_view w) {
        skip_ws();
        if (text.compare(pos, w.size(), w) == 0) {
            pos += w.size();
            return true;
        }
        return false;
    }

    Condition parse_or() {
        Condition c = parse_and();
        while (eat('|')) c = Condition::disj(std::move(c), parse_and());
        return c;
    }

    Condition parse_and() {
        Condition c = parse_unary();
        while (eat('&')) c = Condition::conj(std::move(c), parse_unary());
        return c;
    }

    Condition parse_unary() {
        if (eat('!')) return Condition::negate(parse_unary());
        if (eat('(')) {
            Condition c = parse_or();
            if (!eat(')')) fail("expected ')'");
            return c;
        }
        return parse_atom();
    }

    Condition parse_atom() {
        Atom a;
        if (eat_word("inf"))
            a.kind = Atom::Kind::Inf;
        else if (eat_word("sup"))
            a.kind = Atom::Kind::Sup;
        else
            fail("expected inf(...) or sup(...)");
        if (!eat('(')) fail("expected '('");
        a.dim = (std::uint32_t)parse_integer();
        if (!eat(')')) fail("expected ')'");
        skip_ws();
        if (eat_word(">="))
            a.op = Atom::Op::Ge;
        else if (eat_word("<="))
            a.op = Atom::Op::Le;
        else if (eat('>'))
            a.op = Atom::Op::Gt;
        else if (eat('<'))
            a.op = Atom::Op::Lt;
        else
            fail("expected comparison operator");
        a.threshold = parse_rational();
        return Condition::atom(a);
    }

    std::int64_t parse_integer() {
        skip_ws();
        std::size_t start = pos;
        if (pos < text.size() && (text[pos] == '-' || text[pos] == '+')) ++pos;
        while (pos < text.size() && std::isdigit((unsigned char)text[pos])) ++pos;
        if (pos == start) fail("expected integer");
        return std::stoll(text.substr(start, pos - start));
    }

    Rational parse_rational() {
        std::int64_t n = parse_integer();
        if (eat('/')) return Rational(n, parse_integer());
        return Rational(n);
    }
};

} // namespace

Condition parse_condition(const std::string& text) {
    CondParser p(text);
    Condition c = p.parse_or();
    p.skip_ws();
    if (p.pos != text.size()) p.fail("trailing input");
    return c;
}

} // namespace rmpg
