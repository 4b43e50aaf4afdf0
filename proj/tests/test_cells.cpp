#include <doctest.h>

#include "cellparam/cellular_ops.hpp"
#include "cellparam/certify.hpp"

#include "oracles.hpp"

#include <random>

using namespace cellparam;

namespace {

CellularMap map1(ExprPtr c) {
    CellularMap m;
    m.domain = BasicCell::full(1);
    m.coords = {std::move(c)};
    return m;
}

CellularMap identity2() {
    CellularMap m;
    m.domain = BasicCell::full(2);
    m.coords = {Expr::variable(1), Expr::variable(2)};
    return m;
}

} // namespace

TEST_CASE("check_cellular accepts x^2 and rejects swaps and bumps") {
    CHECK(check_cellular(map1(Expr::pow(Expr::variable(1), 2))).ok());

    CellularMap swapped;
    swapped.domain = BasicCell::full(2);
    swapped.coords = {Expr::variable(2), Expr::variable(1)};
    auto res = check_cellular(swapped);
    CHECK(res.verdict == Verdict::Fail);
    CHECK(res.report.find("triangular") != std::string::npos);

    // x(1-x) is not monotone
    ExprPtr bump = Expr::mul(Expr::variable(1), Expr::sub(Expr::constant(Rational(1)), Expr::variable(1)));
    auto res2 = check_cellular(map1(bump));
    CHECK(res2.verdict == Verdict::Fail);
}

TEST_CASE("compose_cellular: identity and squares") {
    CellularMap id = identity2();
    CellularMap inner;
    inner.domain = BasicCell::full(2);
    inner.coords = {Expr::pow(Expr::variable(1), 2),
                    Expr::mul(Expr::variable(1), Expr::variable(2))};
    CellularMap c = compose_cellular(id, inner);
    CHECK(c.coords[0]->str() == inner.coords[0]->str());
    CHECK(c.coords[1]->str() == inner.coords[1]->str());

    // t -> t^2 composed with x -> x^2 gives t^4
    CellularMap sq = map1(Expr::pow(Expr::variable(1), 2));
    CellularMap four = compose_cellular(sq, sq);
    auto p = four.coords[0]->to_poly(1);
    REQUIRE(p);
    Poly want(std::vector<std::string>{"x1"});
    want.add_term({4}, Rational(1));
    CHECK(*p == want);
}

TEST_CASE("composition of random affine grid maps stays cellular") {
    std::mt19937_64 rng(31);
    std::uniform_int_distribution<int> kd(2, 4);
    for (int it = 0; it < 20; ++it) {
        int k1 = kd(rng), j1 = std::uniform_int_distribution<int>(0, k1 - 1)(rng);
        int k2 = kd(rng), j2 = std::uniform_int_distribution<int>(0, k2 - 1)(rng);
        CellularMap a = map1(Expr::mul(Expr::constant(Rational(1, k1)),
                                       Expr::add(Expr::constant(Rational(j1)), Expr::variable(1))));
        CellularMap b = map1(Expr::mul(Expr::constant(Rational(1, k2)),
                                       Expr::add(Expr::constant(Rational(j2)), Expr::variable(1))));
        CellularMap c = compose_cellular(a, b);
        CHECK(check_cellular(c).ok());
    }
}

TEST_CASE("linear_subdivision of the identity in two pieces") {
    CellularMap id = map1(Expr::variable(1));
    auto pieces = linear_subdivision(id, 2);
    REQUIRE(pieces.size() == 2);
    auto p0 = pieces[0].coords[0]->to_poly(1);
    auto p1 = pieces[1].coords[0]->to_poly(1);
    REQUIRE(p0);
    REQUIRE(p1);
    Poly half(std::vector<std::string>{"x1"});
    half.add_term({1}, Rational(1, 2));
    Poly shifted = half;
    shifted.add_term({0}, Rational(1, 2));
    CHECK(*p0 == half);
    CHECK(*p1 == shifted);

    CHECK(linear_subdivision(id, 1).size() == 1);

    auto pieces2 = linear_subdivision(identity2(), 3);
    CHECK(pieces2.size() == 9);
}

TEST_CASE("subdivision discharges the norm bound of (2/3)x^3") {
    // ||(2/3) x^3||_2 = 2 via the second normalized coefficient 2x
    ExprPtr f = Expr::mul(Expr::constant(Rational(2, 3)), Expr::pow(Expr::variable(1), 3));
    auto [bound, cert] = measure_norm(f, BasicCell::full(1), 2);
    CHECK(bound.hi == Rational(2));
    CHECK(bound.lo == Rational(2));

    CellularMap id = map1(Expr::variable(1));
    for (const auto& piece : linear_subdivision(id, 2)) {
        ExprPtr composed = expr_substitute(f, piece.coords);
        Certificate c = certify_norm(composed, BasicCell::full(1), 2);
        CHECK(c.verdict == Verdict::Pass);
    }
}

TEST_CASE("invert_point on monotone maps") {
    CellularMap sq = map1(Expr::pow(Expr::variable(1), 2));
    Rational tol(1, 1 << 20);
    auto pre = invert_point(sq, {Rational(1, 4)}, tol);
    REQUIRE(pre);
    CHECK((*pre)[0].contains(Rational(1, 2)));
    CHECK((*pre)[0].width() <= tol);

    CellularMap id = identity2();
    auto pre2 = invert_point(id, {Rational(1, 3), Rational(2, 3)}, tol);
    REQUIRE(pre2);
    CHECK((*pre2)[0].contains(Rational(1, 3)));
    CHECK((*pre2)[1].contains(Rational(2, 3)));

    CHECK(!invert_point(sq, {Rational(4)}, tol));
}

TEST_CASE("invert_point round trip on random interior points") {
    std::mt19937_64 rng(77);
    CellularMap m;
    m.domain = BasicCell::full(2);
    // (x1^2, (x1 x2 + x2)/2): cellular, nontrivial in both coordinates
    m.coords = {Expr::pow(Expr::variable(1), 2),
                Expr::mul(Expr::constant(Rational(1, 2)),
                          Expr::mul(Expr::add(Expr::variable(1), Expr::constant(Rational(1))),
                                    Expr::variable(2)))};
    REQUIRE(check_cellular(m).ok());
    Rational tol(1, 1 << 16);
    for (int it = 0; it < 100; ++it) {
        Rational t1(std::uniform_int_distribution<int>(1, 62)(rng), 64);
        Rational t2(std::uniform_int_distribution<int>(1, 62)(rng), 64);
        std::vector<Rational> image{t1 * t1, (t1 + Rational(1)) * t2 * Rational(1, 2)};
        auto pre = invert_point(m, image, tol);
        REQUIRE(pre);
        CHECK((*pre)[0].contains(t1));
        CHECK((*pre)[1].contains(t2));
    }
}

TEST_CASE("certify_norm: spec examples") {
    // e = x: bounds exactly [1,1] at orders 0 and 1, 0 above
    Certificate c1 = certify_norm(Expr::variable(1), BasicCell::full(1), 3);
    CHECK(c1.verdict == Verdict::Pass);
    CHECK(c1.norm_upper() == Rational(1));

    // e = 2x at r = 1: fail with witness enclosure [2,2] at order 1
    ExprPtr two_x = Expr::mul(Expr::constant(Rational(2)), Expr::variable(1));
    Certificate c2 = certify_norm(two_x, BasicCell::full(1), 1);
    CHECK(c2.verdict == Verdict::Fail);
    CHECK(c2.witness_index == MultiIndex{1});
    CHECK(c2.witness_enclosure.lo == Rational(2));
    CHECK(c2.witness_enclosure.hi == Rational(2));

    // sqrt on (1/4, 1) rescaled onto I: ||.||_2 = 1 exactly (sup attained at
    // the left endpoint), decided by the exact corner test
    Poly p(std::vector<std::string>{"u", "w"});
    p.add_term({0, 2}, Rational(1));
    p.add_term({1, 0}, Rational(-1));
    // u = (1/4)(1 + 3x)/... : affine x -> 1/4 + (3/4) x pushed into the branch
    ExprPtr aff = Expr::add(Expr::constant(Rational(1, 4)),
                            Expr::mul(Expr::constant(Rational(3, 4)), Expr::variable(1)));
    ExprPtr e = Expr::root_of(p, 0, Box{Interval(Rational(1, 4), Rational(1))},
                              Interval(Rational(2, 5), Rational(11, 10)), {aff});
    Certificate c3 = certify_norm(e, BasicCell::full(1), 1);
    CHECK(c3.verdict == Verdict::Pass);
}

TEST_CASE("certify_norm soundness spot check") {
    // whenever Pass, finite differences at interior points stay below 1+eps
    ExprPtr f = Expr::mul(Expr::constant(Rational(1, 2)), Expr::pow(Expr::variable(1), 2));
    Certificate c = certify_norm(f, BasicCell::full(1), 2);
    REQUIRE(c.verdict == Verdict::Pass);
    auto poly = f->to_poly(1);
    REQUIRE(poly);
    std::mt19937_64 rng(11);
    Rational h(1, 1 << 20);
    for (int i = 0; i < 100; ++i) {
        Rational x(std::uniform_int_distribution<int>(100, 900)(rng), 1000);
        Rational fd = (poly->evaluate({x + h}) - poly->evaluate({x - h})) / (Rational(2) * h);
        CHECK(fd.abs() <= Rational(1) + Rational(1, 1000000));
    }
}

TEST_CASE("certify_norm witness validity") {
    // re-evaluating the witness box independently reproduces the excess
    ExprPtr g = Expr::mul(Expr::constant(Rational(3)), Expr::pow(Expr::variable(1), 2));
    Certificate c = certify_norm(g, BasicCell::full(1), 2);
    REQUIRE(c.verdict == Verdict::Fail);
    JetEnclosure j = jet_eval(g, c.witness_box, 2);
    CHECK(j.coeff(c.witness_index).mig() > Rational(1));
}

TEST_CASE("certificates serialize deterministically") {
    ExprPtr f = Expr::variable(1);
    Certificate a = certify_norm(f, BasicCell::full(1), 2);
    Certificate b = certify_norm(f, BasicCell::full(1), 2);
    CHECK(a.to_sexpr().str() == b.to_sexpr().str());
    CHECK(a.digest() == b.digest());
}
