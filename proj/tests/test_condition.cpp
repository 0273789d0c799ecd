#include <doctest.h>

#include <random>

#include "condition.hpp"
#include "oracles.hpp"
#include "reduction.hpp"

using namespace rmpg;

namespace {

Atom inf_ge(std::uint32_t dim, Rational t = Rational(0)) {
    return Atom{Atom::Kind::Inf, dim, Atom::Op::Ge, t};
}

} // namespace

TEST_CASE("negated atoms flip their comparison") {
    Condition c = Condition::negate(Condition::atom(inf_ge(0)));
    Condition n = normalize_positive(c);
    CHECK(n.type() == Condition::Type::Leaf);
    CHECK(n.leaf().op == Atom::Op::Lt);
    CHECK(n.leaf().dim == 0);
    CHECK_FALSE(n.contains_not());
}

TEST_CASE("negation dualizes conjunction") {
    Condition c = Condition::negate(
        Condition::conj(Condition::atom(inf_ge(0)), Condition::atom(inf_ge(1))));
    Condition n = normalize_positive(c);
    CHECK(n.type() == Condition::Type::Or);
    CHECK(n.left().leaf().op == Atom::Op::Lt);
    CHECK(n.right().leaf().op == Atom::Op::Lt);
}

TEST_CASE("already-positive trees normalize to themselves") {
    Condition c = Condition::disj(
        Condition::conj(Condition::atom(inf_ge(0)), Condition::atom(inf_ge(1))),
        Condition::atom(Atom{Atom::Kind::Sup, 2, Atom::Op::Le, Rational(1, 3)}));
    CHECK(normalize_positive(c).same_shape(c));
}

TEST_CASE("evaluation reads the right limit component") {
    LimitVector lv;
    lv.inf_avg = {Rational(-2)};
    lv.sup_avg = {Rational(-1)};
    Condition sup_ge = Condition::atom(Atom{Atom::Kind::Sup, 0, Atom::Op::Ge, Rational(0)});
    CHECK_FALSE(eval_condition(sup_ge, lv));
    Condition sup_lt = Condition::atom(Atom{Atom::Kind::Sup, 0, Atom::Op::Lt, Rational(0)});
    CHECK(eval_condition(sup_lt, lv));
}

TEST_CASE("a nonnegative side guard satisfies the side block alone") {
    DimensionLayout lay = DimensionLayout::for_counters(1);
    Condition side = Condition::disj(
        Condition::conj(Condition::atom(inf_ge(lay.ell)), Condition::atom(inf_ge(lay.r))),
        Condition::atom(Atom{Atom::Kind::Sup, lay.gs, Atom::Op::Ge, Rational(0)}));
    std::mt19937_64 rng(3);
    for (int i = 0; i < 100; ++i) {
        LimitVector lv = tests::random_limit_vector(rng, lay.k);
        lv.sup_avg[lay.gs] = Rational(0);
        if (lv.inf_avg[lay.gs] > lv.sup_avg[lay.gs]) lv.inf_avg[lay.gs] = Rational(-1);
        CHECK(eval_condition(side, lv));
    }
}

TEST_CASE("dimension out of range is reported") {
    LimitVector lv;
    lv.inf_avg = {Rational(0)};
    lv.sup_avg = {Rational(0)};
    Condition c = Condition::atom(inf_ge(5));
    CHECK_THROWS_AS(eval_condition(c, lv), std::out_of_range);
}

TEST_CASE("normalization preserves the evaluation everywhere") {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 1200; ++i) {
        Condition c = tests::random_condition(rng, 4, 4);
        Condition n = normalize_positive(c);
        CHECK_FALSE(n.contains_not());
        LimitVector lv = tests::random_limit_vector(rng, 4);
        CHECK(eval_condition(c, lv) == eval_condition(n, lv));
    }
}

TEST_CASE("evaluator agrees with the brute-force oracle") {
    std::mt19937_64 rng(17);
    for (int i = 0; i < 1000; ++i) {
        Condition c = tests::random_condition(rng, 5, 6);
        LimitVector lv = tests::random_limit_vector(rng, 5);
        CHECK(eval_condition(c, lv) == tests::eval_condition_oracle(c, lv));
    }
}

TEST_CASE("condition text grammar") {
    Condition c = parse_condition("inf(0) >= 0 & inf(1) >= 0 | sup(2) >= 0");
    // & binds tighter than |
    CHECK(c.type() == Condition::Type::Or);
    CHECK(c.left().type() == Condition::Type::And);
    CHECK(c.right().leaf().kind == Atom::Kind::Sup);

    Condition d = parse_condition("!(inf(0) > 1/2) & (sup(1) < -3 | inf(2) <= 7/9)");
    CHECK(d.type() == Condition::Type::And);
    CHECK(d.left().type() == Condition::Type::Not);
    CHECK(d.left().left().leaf().threshold == Rational(1, 2));

    // round trip through str()
    Condition e = parse_condition(d.str());
    CHECK(e.same_shape(d));

    CHECK_THROWS_AS(parse_condition("inf(0) >="), std::invalid_argument);
    CHECK_THROWS_AS(parse_condition("inf(0) >= 0 &"), std::invalid_argument);
    CHECK_THROWS_AS(parse_condition("avg(0) >= 0"), std::invalid_argument);
    CHECK_THROWS_AS(parse_condition("inf(0) >= 0 extra"), std::invalid_argument);
}

TEST_CASE("random conditions round trip through the grammar") {
    std::mt19937_64 rng(23);
    for (int i = 0; i < 200; ++i) {
        Condition c = tests::random_condition(rng, 6, 4);
        Condition back = parse_condition(c.str());
        CHECK(back.same_shape(c));
    }
}
