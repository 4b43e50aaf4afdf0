#include <doctest.h>

#include "cellparam/certify.hpp"
#include "cellparam/scalarfn.hpp"

using namespace cellparam;

namespace {

Poly parabola() {
    // w^2 - x
    Poly T(std::vector<std::string>{"x", "w"});
    T.add_term({0, 2}, Rational(1));
    T.add_term({1, 0}, Rational(-1));
    return T;
}

} // namespace

TEST_CASE("sqrt branch: values, signs, derivatives") {
    ScalarFn f = ScalarFn::from_branch(parabola(), AlgebraicNumber(Rational(1, 4)),
                                       AlgebraicNumber(Rational(1)), Rational(1, 2),
                                       Interval(Rational(1, 2), Rational(1)));
    AlgebraicNumber v = f.value_at(Rational(1, 2)); // sqrt(1/2)
    CHECK(v.compare_rational(Rational(7, 10)) > 0);
    CHECK(v.compare_rational(Rational(71, 100)) < 0);
    CHECK(f.value_at(Rational(9, 16)) == AlgebraicNumber(Rational(3, 4)));

    // f' = 1/(2 sqrt x) > 0
    auto d1 = f.derivative_form(1);
    CHECK(f.sign_along(d1.num, Rational(1, 2)) > 0);
    // f'' < 0: numerator sign is negative along the branch
    auto d2 = f.derivative_form(2);
    CHECK(f.sign_along(d2.num, Rational(1, 2)) < 0);
    // f' - 1 has no zero in (1/4, 1): f'(x) = 1 only at x = 1/4
    // numerator of f' - 1: N1 - D1 where f' = N1/Tw^2
    // use zero candidates of N1^2 - D1^2 instead: |f'| = 1 locus
    Poly diff = d1.num * d1.num - d1.den * d1.den;
    auto zeros = f.zero_candidates_along(diff);
    CHECK(zeros.empty());
}

TEST_CASE("sqrt branch: endpoint limits and inverse") {
    ScalarFn f = ScalarFn::from_branch(parabola(), AlgebraicNumber(Rational(1, 4)),
                                       AlgebraicNumber(Rational(1)), Rational(1, 2),
                                       Interval(Rational(1, 2), Rational(1)));
    CHECK(f.limit_at_lo() == AlgebraicNumber(Rational(1, 2)));
    CHECK(f.limit_at_hi() == AlgebraicNumber(Rational(1)));

    ScalarFn g = f.inverse(); // x = w^2 over (1/2, 1)
    CHECK(g.value_at(Rational(3, 4)) == AlgebraicNumber(Rational(9, 16)));
}

TEST_CASE("full sqrt branch is delineable over (0,1)") {
    // lc and disc roots sit at x = 0, outside the open domain
    ScalarFn f = ScalarFn::from_branch(parabola(), AlgebraicNumber(Rational(0)),
                                       AlgebraicNumber(Rational(1)), Rational(1, 4),
                                       Interval(Rational(1, 4), Rational(3, 4)));
    CHECK(f.value_at(Rational(1, 4)) == AlgebraicNumber(Rational(1, 2)));
    // |f'| = 1 exactly at x = 1/4
    auto d1 = f.derivative_form(1);
    Poly diff = d1.num * d1.num - d1.den * d1.den;
    auto zeros = f.zero_candidates_along(diff);
    REQUIRE(zeros.size() == 1);
    CHECK(zeros[0] == AlgebraicNumber(Rational(1, 4)));
}

TEST_CASE("composition with t^2 polynomializes the cusp branch") {
    // w^2 = x^3 upper branch over (0, 4/9); composing with x = (4/9) t^2
    Poly T(std::vector<std::string>{"x", "w"});
    T.add_term({0, 2}, Rational(1));
    T.add_term({3, 0}, Rational(-1));
    ScalarFn f = ScalarFn::from_branch(T, AlgebraicNumber(Rational(0)),
                                       AlgebraicNumber(Rational(4, 9)), Rational(1, 4),
                                       Interval(Rational(1, 16), Rational(1, 4)));
    UPoly q{Rational(0), Rational(0), Rational(4, 9)}; // (4/9) t^2
    ScalarFn g = f.compose_poly(q, AlgebraicNumber(Rational(0)), AlgebraicNumber(Rational(1)));
    // g(t) = (4/9)^{3/2} t^3 = (8/27) t^3
    CHECK(g.value_at(Rational(1, 2)) == AlgebraicNumber(Rational(8, 27) * Rational(1, 8)));
    ExprPtr e = g.to_expr();
    auto p = e->to_poly(1);
    REQUIRE(p); // branch simplified to an exact polynomial
    Certificate c = certify_norm(e, BasicCell::full(1), 2);
    CHECK(c.verdict == Verdict::Pass);
}

TEST_CASE("to_expr produces a usable guard for the interior branch") {
    ScalarFn f = ScalarFn::from_branch(parabola(), AlgebraicNumber(Rational(1, 4)),
                                       AlgebraicNumber(Rational(1)), Rational(1, 2),
                                       Interval(Rational(1, 2), Rational(1)));
    ExprPtr e = f.to_expr();
    Interval r = expr_range(e, Box{Interval(Rational(1, 4), Rational(1))});
    CHECK(r.lo <= Rational(1, 2));
    CHECK(r.hi >= Rational(1));
    CHECK(r.lo >= Rational(1, 4));
    CHECK(r.hi <= Rational(3, 2));
}

TEST_CASE("monotone partition data for x(1-x)") {
    // polynomial variant: f' = 1 - 2x vanishes at 1/2
    UPoly p{Rational(0), Rational(1), Rational(-1)};
    ScalarFn f = ScalarFn::from_poly(p, AlgebraicNumber(Rational(0)), AlgebraicNumber(Rational(1)));
    auto d1 = f.derivative_form(1);
    auto zeros = f.zero_candidates_along(d1.num);
    REQUIRE(zeros.size() == 1);
    CHECK(zeros[0] == AlgebraicNumber(Rational(1, 2)));
}
