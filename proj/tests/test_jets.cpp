#include <doctest.h>

#include "cellparam/expr.hpp"
#include "cellparam/jets.hpp"

#include "oracles.hpp"

#include <random>

using namespace cellparam;

namespace {

Interval unit() { return Interval(Rational(0), Rational(1)); }

// upper branch of w^2 = x over x in [lo, hi] (0 < lo)
ExprPtr sqrt_branch(const Rational& lo, const Rational& hi) {
    Poly p(std::vector<std::string>{"u", "w"});
    p.add_term({0, 2}, Rational(1));
    p.add_term({1, 0}, Rational(-1));
    // w ranges over [sqrt(lo), sqrt(hi)]; a padded rational guard suffices
    Rational wlo = lo * Rational(9, 10);
    while (wlo * wlo > lo) wlo = wlo * Rational(9, 10);
    Rational whi = hi;
    while (whi * whi <= hi) whi += Rational(1, 8);
    return Expr::root_of(p, 0, Box{Interval(lo, hi)}, Interval(wlo, whi), {Expr::variable(1)});
}

// exact normalized derivative D^a p / a! of a polynomial at a rational point
Rational exact_normalized_derivative(const Poly& p, const MultiIndex& a,
                                     const std::vector<Rational>& pt) {
    Poly d = p;
    Rational fact(1);
    for (size_t v = 0; v < a.size(); ++v)
        for (unsigned k = 0; k < a[v]; ++k) {
            d = d.derivative(v);
            fact *= Rational(static_cast<int>(k) + 1);
        }
    return d.evaluate(pt) / fact;
}

} // namespace

TEST_CASE("jet of x^2 over [0,1]") {
    ExprPtr e = Expr::pow(Expr::variable(1), 2);
    JetEnclosure j = jet_eval(e, Box{unit()}, 2);
    CHECK(j.coeff({0}).contains(Rational(1, 4))); // value range
    CHECK(j.coeff({0}).lo == Rational(0));
    CHECK(j.coeff({0}).hi == Rational(1));
    CHECK(j.coeff({1}).lo == Rational(0)); // 2x over [0,1]
    CHECK(j.coeff({1}).hi == Rational(2));
    CHECK(j.coeff({2}).lo == Rational(1)); // exactly [1,1]
    CHECK(j.coeff({2}).hi == Rational(1));
}

TEST_CASE("jet of order 0 encloses the range") {
    ExprPtr e = Expr::sub(Expr::mul(Expr::variable(1), Expr::variable(2)), Expr::constant(Rational(1, 4)));
    JetEnclosure j = jet_eval(e, Box{unit(), unit()}, 0);
    CHECK(j.coeff({0, 0}).contains(Rational(-1, 4)));
    CHECK(j.coeff({0, 0}).contains(Rational(3, 4)));
}

TEST_CASE("jet of sqrt branch over [1/4, 1]") {
    ExprPtr e = sqrt_branch(Rational(1, 4), Rational(1));
    JetEnclosure j = jet_eval(e, Box{Interval(Rational(1, 4), Rational(1))}, 2);
    // first normalized coefficient encloses 1/(2 sqrt x) over [1/4, 1] = [1/2, 1]
    CHECK(j.coeff({1}).lo <= Rational(1, 2));
    CHECK(j.coeff({1}).hi >= Rational(1));
    CHECK(j.coeff({1}).lo >= Rational(1, 4));     // sane lower bound
    CHECK(j.coeff({1}).hi <= Rational(2));        // sane upper bound
    // value range [1/2, 1]
    CHECK(j.coeff({0}).lo <= Rational(1, 2));
    CHECK(j.coeff({0}).hi >= Rational(1));
}

TEST_CASE("implicit branch jet: trivial branch w = x") {
    Poly p(std::vector<std::string>{"u", "w"});
    p.add_term({0, 1}, Rational(1));
    p.add_term({1, 0}, Rational(-1));
    Interval dom(Rational(1, 8), Rational(7, 8));
    JetEnclosure xj = JetEnclosure::variable(1, 3, 0, dom);
    JetEnclosure y = implicit_branch_jet(p, Box{dom}, Interval(Rational(0), Rational(1)), {xj}, 3);
    CHECK(y.coeff({0}).contains(dom));
    CHECK(y.coeff({1}).contains(Rational(1)));
    CHECK(y.coeff({1}).width() <= Rational(1, 1000));
    CHECK(y.coeff({2}).contains(Rational(0)));
    CHECK(y.coeff({2}).mag() <= Rational(1, 1000));
}

TEST_CASE("implicit branch jet: y' of sqrt over [1/4, 1]") {
    Poly p(std::vector<std::string>{"u", "w"});
    p.add_term({0, 2}, Rational(1));
    p.add_term({1, 0}, Rational(-1));
    Interval dom(Rational(1, 4), Rational(1));
    JetEnclosure xj = JetEnclosure::variable(1, 1, 0, dom);
    JetEnclosure y = implicit_branch_jet(p, Box{dom}, Interval(Rational(2, 5), Rational(11, 10)), {xj}, 1);
    CHECK(y.coeff({1}).lo <= Rational(1, 2));
    CHECK(y.coeff({1}).hi >= Rational(1));
    CHECK(y.coeff({1}).hi <= Rational(3, 2));
}

TEST_CASE("implicit branch jet vs finite differences for y^3 + y = x") {
    Poly p(std::vector<std::string>{"u", "w"});
    p.add_term({0, 3}, Rational(1));
    p.add_term({0, 1}, Rational(1));
    p.add_term({1, 0}, Rational(-1));
    // branch value by direct high-precision refinement
    auto branch_at = [&](const Rational& x) {
        UPoly q{-x, Rational(1), Rational(0), Rational(1)};
        auto rs = isolate_real_roots(q, Rational(-1), Rational(2));
        REQUIRE(rs.size() == 1);
        auto fine = refine_root(rs[0], Rational(1, Integer(1) << 120));
        return fine.mid();
    };
    Rational h(1, 1000000);
    for (int i = 1; i <= 20; ++i) {
        Rational x(i, 21);
        Rational fd1 = (branch_at(x + h) - branch_at(x - h)) / (Rational(2) * h);
        Rational fd2 = (branch_at(x + h) - Rational(2) * branch_at(x) + branch_at(x - h)) / (h * h);
        ExprPtr e = Expr::root_of(p, 0, Box{Interval(Rational(0), Rational(1))},
                                  Interval(Rational(-1), Rational(1)), {Expr::variable(1)});
        JetEnclosure j = jet_eval(e, Box{Interval(x, x)}, 2);
        Rational slack(1, 1000000); // FD truncation error margin
        CHECK(j.coeff({1}).lo - slack <= fd1);
        CHECK(fd1 <= j.coeff({1}).hi + slack);
        Rational d2 = fd2 * Rational(1, 2); // normalized
        CHECK(j.coeff({2}).lo - slack <= d2);
        CHECK(d2 <= j.coeff({2}).hi + slack);
    }
}

TEST_CASE("containment: 200 random polynomial jets contain midpoint derivatives") {
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<int> denum(1, 8);
    for (int it = 0; it < 200; ++it) {
        Poly p = oracles::random_poly2(rng, 5, 6);
        if (p.is_zero()) continue;
        ExprPtr e = expr_from_poly(p);
        int lo1 = denum(rng), lo2 = denum(rng);
        Box box{Interval(Rational(lo1, 16), Rational(lo1 + 3, 16)),
                Interval(Rational(lo2, 16), Rational(lo2 + 5, 16))};
        int r = 1 + (it % 4);
        JetEnclosure j = jet_eval(e, box, r);
        std::vector<Rational> mid{box[0].mid(), box[1].mid()};
        for (const auto& a : j.table().indices()) {
            Rational want = exact_normalized_derivative(p, a, mid);
            CHECK(j.coeff(a).contains(want));
        }
    }
}

TEST_CASE("monotone refinement: child hulls nest into the parent") {
    std::mt19937_64 rng(555);
    for (int it = 0; it < 20; ++it) {
        Poly p = oracles::random_poly2(rng, 4, 5);
        if (p.is_zero()) continue;
        ExprPtr e = expr_from_poly(p);
        Box box{Interval(Rational(1, 8), Rational(5, 8)), Interval(Rational(1, 4), Rational(3, 4))};
        JetEnclosure parent = jet_eval(e, box, 3);
        Rational m = box[0].mid();
        Box left = box, right = box;
        left[0] = Interval(box[0].lo, m);
        right[0] = Interval(m, box[0].hi);
        JetEnclosure jl = jet_eval(e, left, 3), jr = jet_eval(e, right, 3);
        for (size_t i = 0; i < parent.coeffs().size(); ++i) {
            Interval hull = Interval::hull(jl.coeffs()[i], jr.coeffs()[i]);
            CHECK(parent.coeffs()[i].contains(hull));
        }
    }
    // and across a branch node
    ExprPtr e = sqrt_branch(Rational(1, 4), Rational(1));
    Box box{Interval(Rational(1, 4), Rational(1))};
    JetEnclosure parent = jet_eval(e, box, 2);
    Box left{Interval(Rational(1, 4), Rational(5, 8))}, right{Interval(Rational(5, 8), Rational(1))};
    JetEnclosure jl = jet_eval(e, left, 2), jr = jet_eval(e, right, 2);
    for (size_t i = 0; i < parent.coeffs().size(); ++i) {
        Interval hull = Interval::hull(jl.coeffs()[i], jr.coeffs()[i]);
        CHECK(parent.coeffs()[i].contains(hull));
    }
}

TEST_CASE("order cap raises OrderTooLarge") {
    ExprPtr e = Expr::variable(1);
    CHECK_THROWS_AS(jet_eval(e, Box{unit()}, 9), OrderTooLarge);
}

TEST_CASE("guard violation surfaces when the box escapes the guard") {
    ExprPtr e = sqrt_branch(Rational(1, 4), Rational(1, 2));
    CHECK_THROWS_AS(jet_eval(e, Box{Interval(Rational(1, 8), Rational(1))}, 1), GuardViolation);
}
