#include <doctest.h>

#include "cellparam/algebraic.hpp"
#include "cellparam/poly.hpp"
#include "cellparam/rational.hpp"
#include "cellparam/resultant.hpp"
#include "cellparam/upoly.hpp"

#include "oracles.hpp"

#include <random>

using namespace cellparam;

namespace {

Poly xy_poly() { return Poly(std::vector<std::string>{"x", "y"}); }

Poly make_xy(std::initializer_list<std::tuple<unsigned, unsigned, Rational>> ts) {
    Poly p = xy_poly();
    for (const auto& [i, j, c] : ts) p.add_term({i, j}, c);
    return p;
}

} // namespace

TEST_CASE("rational canonical form and parsing") {
    Rational a(2, 4);
    CHECK(a.num() == 1);
    CHECK(a.den() == 2);
    Rational b(-3, -6);
    CHECK(b == Rational(1, 2));
    CHECK(Rational(3, -6).den() > 0);
    CHECK(Rational::parse("-7/21") == Rational(-1, 3));
    CHECK(Rational::parse("42") == Rational(42));
    CHECK_THROWS_AS(Rational::parse("1/0"), std::invalid_argument);
    CHECK_THROWS_AS(Rational::parse("x"), std::invalid_argument);
    CHECK(Rational(5, 3).str() == "5/3");
    CHECK(Rational(-4, 2).str() == "-2");
}

TEST_CASE("rational dyadic rounding brackets the value") {
    Rational v(1, 3);
    Rational lo = v.floor_dyadic(10), hi = v.ceil_dyadic(10);
    CHECK(lo <= v);
    CHECK(v <= hi);
    CHECK(hi - lo <= Rational(1, 1024));
    CHECK(Rational(3, 4).floor_dyadic(2) == Rational(3, 4));
}

TEST_CASE("best_rational_in finds the simplest rational") {
    CHECK(best_rational_in(Rational(1, 3), Rational(1, 2)) == Rational(1, 2));
    CHECK(best_rational_in(Rational(-1, 10), Rational(1, 10)) == Rational(0));
    CHECK(best_rational_in(Rational(41, 100), Rational(43, 100)) == Rational(3, 7));
    CHECK(best_rational_in(Rational(7, 2), Rational(9, 2)) == Rational(4));
}

TEST_CASE("poly derivative: spec examples") {
    // d/dx (x^2 y) = 2xy ; d/dy (x^2 y) = x^2
    Poly p = make_xy({{2, 1, Rational(1)}});
    CHECK(p.derivative(0) == make_xy({{1, 1, Rational(2)}}));
    CHECK(p.derivative(1) == make_xy({{2, 0, Rational(1)}}));
    // d/dx (xy - e) with e a third variable
    Poly q(std::vector<std::string>{"x", "y", "e"});
    q.add_term({1, 1, 0}, Rational(1));
    q.add_term({0, 0, 1}, Rational(-1));
    Poly dq = q.derivative(0);
    Poly want(std::vector<std::string>{"x", "y", "e"});
    want.add_term({0, 1, 0}, Rational(1));
    CHECK(dq == want);
    CHECK_THROWS(p.derivative(5));
}

TEST_CASE("poly exact division") {
    Poly a = make_xy({{1, 0, Rational(1)}, {0, 1, Rational(1)}});  // x + y
    Poly b = make_xy({{1, 0, Rational(1)}, {0, 1, Rational(-1)}}); // x - y
    Poly prod = a * b;
    CHECK(prod.divide_exact(a) == b);
    CHECK(prod.divide_exact(b) == a);
    Poly one = make_xy({{0, 0, Rational(1)}});
    CHECK_THROWS_AS((a + one).divide_exact(b), std::domain_error);
}

TEST_CASE("resultants: frozen examples under the documented convention") {
    size_t yvar = 1;
    // res_y(y^2 - x, y) = -x
    Poly p = make_xy({{0, 2, Rational(1)}, {1, 0, Rational(-1)}});
    Poly q = make_xy({{0, 1, Rational(1)}});
    CHECK(poly_resultant(p, q, yvar) == make_xy({{1, 0, Rational(-1)}}));

    // res_y(xy - t, y - 1): vars (x, t, y); equals t - x with p-rows-first
    // Sylvester ordering (the transposed convention gives x - t)
    Poly p2(std::vector<std::string>{"x", "t", "y"});
    p2.add_term({1, 0, 1}, Rational(1));
    p2.add_term({0, 1, 0}, Rational(-1));
    Poly q2(std::vector<std::string>{"x", "t", "y"});
    q2.add_term({0, 0, 1}, Rational(1));
    q2.add_term({0, 0, 0}, Rational(-1));
    Poly r2 = poly_resultant(p2, q2, 2);
    Poly want(std::vector<std::string>{"x", "t", "y"});
    want.add_term({0, 1, 0}, Rational(1));
    want.add_term({1, 0, 0}, Rational(-1));
    CHECK(r2 == want);

    // disc_y(y^2 - x) = -4x under disc = res(p, p')/lc
    CHECK(poly_discriminant(p, yvar) == make_xy({{1, 0, Rational(-4)}}));

    CHECK_THROWS_AS(poly_resultant(make_xy({{1, 0, Rational(1)}}),
                                   make_xy({{1, 0, Rational(1)}}), yvar),
                    std::domain_error);
}

TEST_CASE("resultant vanishes exactly at common-root parameters") {
    // common-root oracle: gcd of the specialized univariate polynomials
    std::mt19937_64 rng(7);
    int checked = 0;
    for (int it = 0; it < 40; ++it) {
        Poly p = oracles::random_poly2(rng, 2, 4);
        Poly q = oracles::random_poly2(rng, 2, 4);
        if (p.degree(1) < 1 || q.degree(1) < 1) continue;
        Poly res = poly_resultant(p, q, 1);
        for (int xi = -2; xi <= 2; ++xi) {
            Rational x0(xi, 2);
            Poly rp = res.substitute(0, x0);
            Rational rv = rp.constant_value();
            auto pu = p.substitute(0, x0).to_univariate(1);
            auto qu = q.substitute(0, x0).to_univariate(1);
            REQUIRE(pu);
            REQUIRE(qu);
            bool lc_drop = (up_degree(*pu) < p.degree(1)) && (up_degree(*qu) < q.degree(1));
            bool share = false;
            if (!up_is_zero(*pu) && !up_is_zero(*qu)) {
                UPoly g = up_gcd(*pu, *qu);
                share = up_degree(g) >= 1;
            } else {
                share = true;
            }
            bool expect_zero = share || lc_drop;
            CHECK(rv.is_zero() == expect_zero);
            ++checked;
        }
    }
    CHECK(checked > 50);
}

TEST_CASE("isolate_real_roots: spec examples") {
    // x^2 - 2 on (0,2): one interval containing sqrt(2)
    UPoly p{Rational(-2), Rational(0), Rational(1)};
    auto r = isolate_real_roots(p, Rational(0), Rational(2));
    REQUIRE(r.size() == 1);
    CHECK(r[0].lo < Rational(141422, 100000));
    CHECK(r[0].hi > Rational(141421, 100000));

    // x(x-1/2)(x-1) on (0,1): only the root 1/2 lies inside the open range
    UPoly q = up_mul(up_mul(UPoly{Rational(0), Rational(1)}, UPoly{Rational(-1, 2), Rational(1)}),
                     UPoly{Rational(-1), Rational(1)});
    auto r2 = isolate_real_roots(q, Rational(0), Rational(1));
    REQUIRE(r2.size() == 1);
    CHECK(r2[0].lo < Rational(1, 2));
    CHECK(r2[0].hi > Rational(1, 2));
}

TEST_CASE("isolation count matches Sturm and grid oracles on random polynomials") {
    std::mt19937_64 rng(12345);
    Rational lo(-12), hi(12);
    for (int it = 0; it < 1000; ++it) {
        UPoly p = oracles::random_upoly(rng, 8, 10);
        if (up_sign_at(p, lo) == 0 || up_sign_at(p, hi) == 0) continue;
        auto isolated = isolate_real_roots(p, lo, hi);
        int sturm = oracles::sturm_count(p, lo, hi);
        CHECK(static_cast<int>(isolated.size()) == sturm);
        // intervals are disjoint and sorted
        for (size_t i = 0; i + 1 < isolated.size(); ++i)
            CHECK(isolated[i].hi <= isolated[i + 1].lo);
    }
}

TEST_CASE("grid sign-change oracle agrees on well-separated cases") {
    // spacing-safe cases where a fine grid resolves every root
    UPoly p{Rational(-6), Rational(11), Rational(-6), Rational(1)}; // (x-1)(x-2)(x-3)
    CHECK(oracles::grid_sign_changes(p, Rational(0), Rational(4), 100000) == 3);
    CHECK(static_cast<int>(isolate_real_roots(p, Rational(0), Rational(4)).size()) == 3);

    std::mt19937_64 rng(99);
    for (int it = 0; it < 5; ++it) {
        UPoly q = oracles::random_upoly(rng, 8, 10);
        if (up_sign_at(q, Rational(-12)) == 0 || up_sign_at(q, Rational(12)) == 0) continue;
        int grid = oracles::grid_sign_changes(q, Rational(-12), Rational(12), 1000000);
        int isol = static_cast<int>(isolate_real_roots(q, Rational(-12), Rational(12)).size());
        CHECK(grid == isol);
    }
}

TEST_CASE("refine_root narrows onto the root") {
    UPoly p{Rational(-2), Rational(0), Rational(1)};
    auto r = isolate_real_roots(p, Rational(0), Rational(2));
    REQUIRE(r.size() == 1);
    Rational w = Rational(1, Integer(1) << 100); // ~1e-30
    auto fine = refine_root(r[0], w);
    CHECK(fine.width() <= w);
    // high-precision Newton oracle for sqrt(2)
    Rational x(3, 2);
    for (int i = 0; i < 9; ++i) x = (x + Rational(2) / x) * Rational(1, 2);
    CHECK(fine.lo <= x);
    CHECK(x <= fine.hi);

    auto same = refine_root(fine, Rational(1));
    CHECK(same.width() <= fine.width());

    // rational root of 2x - 1
    UPoly lin{Rational(-1), Rational(2)};
    auto rl = isolate_real_roots(lin, Rational(0), Rational(1));
    REQUIRE(rl.size() == 1);
    auto rf = refine_root(rl[0], Rational(1, 1000000));
    CHECK(rf.lo < Rational(1, 2));
    CHECK(Rational(1, 2) < rf.hi);
}

TEST_CASE("algebraic numbers: comparison and rational detection") {
    UPoly p{Rational(-2), Rational(0), Rational(1)}; // x^2 - 2
    AlgebraicNumber s2 = AlgebraicNumber::root_in(p, Rational(0), Rational(2));
    CHECK(!s2.is_rational());
    AlgebraicNumber neg = AlgebraicNumber::root_in(p, Rational(-2), Rational(0));
    CHECK(neg < s2);
    CHECK(s2.compare(s2) == 0);
    CHECK(s2.compare_rational(Rational(1)) > 0);
    CHECK(s2.compare_rational(Rational(3, 2)) < 0);

    // the same number reached through two defining polynomials
    UPoly q{Rational(4), Rational(0), Rational(-4), Rational(0), Rational(1)}; // (x^2-2)^2
    AlgebraicNumber s2b = AlgebraicNumber::root_in(q, Rational(1), Rational(3, 2));
    CHECK(s2.compare(s2b) == 0);

    UPoly halfp{Rational(-1), Rational(2)};
    AlgebraicNumber half = AlgebraicNumber::root_in(halfp, Rational(0), Rational(1));
    CHECK(half.is_rational());
    CHECK(half.rational_value() == Rational(1, 2));
}

TEST_CASE("sign_at: spec examples") {
    UPoly def{Rational(-2), Rational(0), Rational(1)};
    AlgebraicNumber s2 = AlgebraicNumber::root_in(def, Rational(0), Rational(2));

    Poly p1(std::vector<std::string>{"x"});
    p1.add_term({2}, Rational(1));
    p1.add_term({0}, Rational(-2));
    CHECK(sign_at(p1, {s2}) == 0);

    Poly p2(std::vector<std::string>{"x"});
    p2.add_term({1}, Rational(1));
    p2.add_term({0}, Rational(-1));
    CHECK(sign_at(p2, {s2}) == 1);

    Poly p3 = make_xy({{1, 1, Rational(1)}, {0, 0, Rational(-1, 4)}});
    CHECK(sign_at(p3, {AlgebraicNumber(Rational(1, 2)), AlgebraicNumber(Rational(1, 2))}) == 0);
}

TEST_CASE("sign_at is multiplicative") {
    std::mt19937_64 rng(4242);
    UPoly def{Rational(-3), Rational(0), Rational(1)};
    AlgebraicNumber s3 = AlgebraicNumber::root_in(def, Rational(0), Rational(2));
    for (int it = 0; it < 50; ++it) {
        Poly p = oracles::random_poly2(rng, 2, 5, {"x"});
        Poly q = oracles::random_poly2(rng, 2, 5, {"x"});
        int sp = sign_at(p, {s3});
        int sq = sign_at(q, {s3});
        CHECK(sign_at(p * q, {s3}) == sp * sq);
    }
}

TEST_CASE("sign_at with two algebraic coordinates") {
    UPoly def2{Rational(-2), Rational(0), Rational(1)};
    UPoly def3{Rational(-3), Rational(0), Rational(1)};
    AlgebraicNumber s2 = AlgebraicNumber::root_in(def2, Rational(0), Rational(2));
    AlgebraicNumber s3 = AlgebraicNumber::root_in(def3, Rational(0), Rational(2));
    // x^2 * y^2 - 6 vanishes at (sqrt2, sqrt3)
    Poly p = make_xy({{2, 2, Rational(1)}, {0, 0, Rational(-6)}});
    CHECK(sign_at(p, {s2, s3}) == 0);
    Poly q = make_xy({{2, 2, Rational(1)}, {0, 0, Rational(-5)}});
    CHECK(sign_at(q, {s2, s3}) == 1);
    Poly r = make_xy({{1, 1, Rational(1)}, {0, 0, Rational(-3)}});
    CHECK(sign_at(r, {s2, s3}) == -1); // sqrt6 < 3
}
