#include <doctest.h>

#include <random>

#include "expr.hpp"
#include "oracles.hpp"

using namespace rmpg;

namespace {

LimitVector lv_of(std::vector<Rational> inf, std::vector<Rational> sup) {
    LimitVector lv;
    lv.inf_avg = std::move(inf);
    lv.sup_avg = std::move(sup);
    return lv;
}

} // namespace

TEST_CASE("a worked sum-max evaluation") {
    // infavg(1) + max(infavg(2), supavg(3)) at inf=(_,1,0,_), sup3=2
    Expr e = Expr::sum_of({Expr::inf_avg(1),
                           Expr::max_of({Expr::inf_avg(2), Expr::sup_avg(3)})});
    LimitVector lv = lv_of({Rational(0), Rational(1), Rational(0), Rational(0)},
                           {Rational(0), Rational(1), Rational(0), Rational(2)});
    CHECK(eval_expr(e, lv) == Rational(3));
}

TEST_CASE("double complement is the identity") {
    std::mt19937_64 rng(31);
    for (int i = 0; i < 100; ++i) {
        LimitVector lv = tests::random_limit_vector(rng, 4);
        Expr base = Expr::sum_of({Expr::inf_avg(0), Expr::sup_avg(3)});
        Expr twice = Expr::neg(Expr::neg(base));
        CHECK(eval_expr(base, lv) == eval_expr(twice, lv));
    }
}

TEST_CASE("min over equal children is that value") {
    LimitVector lv = lv_of({Rational(5, 7), Rational(5, 7)}, {Rational(5, 7), Rational(5, 7)});
    Expr e = Expr::min_of({Expr::inf_avg(0), Expr::inf_avg(1), Expr::sup_avg(0)});
    CHECK(eval_expr(e, lv) == Rational(5, 7));
}

TEST_CASE("complement swaps min and max") {
    std::mt19937_64 rng(37);
    for (int i = 0; i < 200; ++i) {
        LimitVector lv = tests::random_limit_vector(rng, 3);
        Expr a = Expr::neg(Expr::min_of({Expr::inf_avg(0), Expr::sup_avg(1)}));
        Expr b = Expr::max_of({Expr::neg(Expr::inf_avg(0)), Expr::neg(Expr::sup_avg(1))});
        CHECK(eval_expr(a, lv) == eval_expr(b, lv));
    }
}

TEST_CASE("expression atoms validate their dimension") {
    LimitVector lv = lv_of({Rational(0)}, {Rational(0)});
    CHECK_THROWS_AS(eval_expr(Expr::inf_avg(3), lv), std::out_of_range);
}

TEST_CASE("n-ary operators need two operands") {
    CHECK_THROWS_AS(Expr::min_of({Expr::inf_avg(0)}), std::invalid_argument);
    CHECK_THROWS_AS(Expr::sum_of({}), std::invalid_argument);
}

TEST_CASE("the condition expression family") {
    DimensionLayout lay = DimensionLayout::for_counters(2);
    ExpressionFamily fam = build_condition_expressions(lay);
    CHECK(fam.e3.str(&lay.names) == "min(supavg(x), supavg(y))");
    CHECK(fam.e2.str(&lay.names) ==
          "max(min(infavg(cp1), infavg(cm1), infavg(cp2), infavg(cm2)), supavg(gc))");
    CHECK(fam.e1.str(&lay.names) == "max(min(infavg(ell), infavg(r)), supavg(gs))");
    CHECK(fam.full.str(&lay.names) ==
          "min(" + fam.e1.str(&lay.names) + ", " + fam.e2.str(&lay.names) + ", " +
              fam.e3.str(&lay.names) + ")");

    CHECK_THROWS_AS(build_condition_expressions(DimensionLayout::for_counters(1)),
                    std::invalid_argument);

    std::mt19937_64 rng(41);
    for (int i = 0; i < 100; ++i) {
        LimitVector lv = tests::random_limit_vector(rng, lay.k);
        CHECK(eval_expr(fam.complement, lv) == -eval_expr(fam.full, lv));
    }
}

TEST_CASE("all-zero limits satisfy both sides of the correspondence") {
    DimensionLayout lay = DimensionLayout::for_counters(2);
    LimitVector lv = lv_of(std::vector<Rational>(lay.k, Rational(0)),
                           std::vector<Rational>(lay.k, Rational(0)));
    auto [fwd, bwd] = check_equivalence(lv, lay);
    CHECK(fwd);
    CHECK(bwd);
    ExpressionFamily fam = build_condition_expressions(lay);
    CHECK(eval_expr(fam.full, lv) == Rational(0));
    CHECK(eval_condition(build_condition(lay), lv));
}

TEST_CASE("a sunk liveness dimension falsifies the condition and flips the sign") {
    DimensionLayout lay = DimensionLayout::for_counters(2);
    LimitVector lv = lv_of(std::vector<Rational>(lay.k, Rational(0)),
                           std::vector<Rational>(lay.k, Rational(0)));
    lv.sup_avg[lay.x] = Rational(-1);
    lv.inf_avg[lay.x] = Rational(-1);
    ExpressionFamily fam = build_condition_expressions(lay);
    CHECK_FALSE(eval_condition(build_condition(lay), lv));
    CHECK(eval_expr(fam.full, lv) == Rational(-1));
    CHECK(eval_expr(fam.complement, lv) == Rational(1));
    auto [fwd, bwd] = check_equivalence(lv, lay);
    CHECK(fwd);
    CHECK(bwd);
}

TEST_CASE("the correspondence holds on a random sweep") {
    DimensionLayout lay = DimensionLayout::for_counters(2);
    std::mt19937_64 rng(43);
    for (int i = 0; i < 1000; ++i) {
        LimitVector lv = tests::random_limit_vector(rng, lay.k);
        auto [fwd, bwd] = check_equivalence(lv, lay);
        CHECK(fwd);
        CHECK(bwd);
    }
}

TEST_CASE("expression text grammar") {
    Expr e = parse_expr("sum(infavg(1), max(infavg(2), supavg(3)))");
    CHECK(e.type() == Expr::Type::Sum);
    CHECK(e.children()[1].type() == Expr::Type::Max);
    Expr n = parse_expr("neg(min(infavg(0), supavg(0)))");
    CHECK(n.type() == Expr::Type::Neg);
    // round trip
    CHECK(parse_expr(e.str()).str() == e.str());
    CHECK_THROWS_AS(parse_expr("avg(0)"), std::invalid_argument);
    CHECK_THROWS_AS(parse_expr("min(infavg(0))"), std::invalid_argument);
    CHECK_THROWS_AS(parse_expr("infavg(0) trailing"), std::invalid_argument);
}
