#include "cellparam/algebraic.hpp"
#include "cellparam/interval.hpp"
#include "cellparam/resultant.hpp"

#include <sstream>
#include <stdexcept>

namespace cellparam {

namespace {

// One bisection step of an isolating interval.
IsolatingInterval refine_step(const IsolatingInterval& iso) {
    return refine_root(iso, iso.width() * Rational(3, 4));
}

// Cauchy root bound: every real root of p lies in (-B, B).
Rational cauchy_bound(const UPoly& p) {
    Rational m(0);
    Rational lead = p.back().abs();
    for (size_t i = 0; i + 1 < p.size(); ++i) m = max(m, p[i].abs());
    return Rational(1) + m / lead;
}

} // namespace

AlgebraicNumber AlgebraicNumber::root_in(const UPoly& p, const Rational& lo, const Rational& hi) {
    UPoly q = up_squarefree(p);
    auto roots = isolate_real_roots(q, lo, hi);
    if (roots.size() != 1)
        throw std::logic_error("AlgebraicNumber::root_in: interval is not isolating");
    // cheap rational-root detection
    IsolatingInterval cur = roots[0];
    for (int round = 0; round < 6; ++round) {
        Rational cand = best_rational_in(cur.lo, cur.hi);
        if (up_sign_at(q, cand) == 0) return AlgebraicNumber(cand);
        cur = refine_root(cur, cur.width() * Rational(1, 1 << 16));
    }
    AlgebraicNumber a;
    a.rational_ = false;
    a.poly_ = q;
    a.lo_ = roots[0].lo;
    a.hi_ = roots[0].hi;
    return a;
}

AlgebraicNumber AlgebraicNumber::root_index(const UPoly& p, int k, const Rational& lo,
                                            const Rational& hi) {
    auto roots = isolate_real_roots(p, lo, hi);
    if (k < 0 || static_cast<size_t>(k) >= roots.size())
        throw std::out_of_range("AlgebraicNumber::root_index");
    return root_in(p, roots[static_cast<size_t>(k)].lo, roots[static_cast<size_t>(k)].hi);
}

const Rational& AlgebraicNumber::rational_value() const {
    if (!rational_) throw std::logic_error("AlgebraicNumber: not rational");
    return value_;
}

std::pair<Rational, Rational> AlgebraicNumber::enclosure(const Rational& width) const {
    if (rational_) return {value_, value_};
    IsolatingInterval r = refine_root(iso(), width);
    return {r.lo, r.hi};
}

std::pair<Rational, Rational> AlgebraicNumber::enclosure() const {
    if (rational_) return {value_, value_};
    return {lo_, hi_};
}

int AlgebraicNumber::sign() const {
    if (rational_) return value_.sign();
    if (lo_.sign() > 0) return 1;
    if (hi_.sign() < 0) return -1;
    if (up_sign_at(poly_, Rational(0)) == 0) return 0; // the isolated root is 0 itself
    IsolatingInterval cur = iso();
    while (cur.lo.sign() <= 0 && cur.hi.sign() >= 0) cur = refine_step(cur);
    return cur.lo.sign() > 0 ? 1 : -1;
}

int AlgebraicNumber::sign_of_upoly_at(const UPoly& f_in) const {
    UPoly f = f_in;
    up_trim(f);
    if (f.empty()) return 0;
    if (rational_) return up_sign_at(f, value_);
    if (up_degree(f) == 0) return f[0].sign();

    UPoly g = up_gcd(f, poly_);
    if (up_degree(g) >= 1) {
        auto [h, rem] = up_divrem(poly_, g);
        if (!rem.empty()) throw std::logic_error("sign_of_upoly_at: gcd division not exact");
        // the number is a root of exactly one of g, h
        IsolatingInterval cur = iso();
        while (true) {
            bool g_in = !isolate_real_roots(g, cur.lo, cur.hi).empty();
            if (!g_in) break; // not a root of f
            if (up_degree(h) < 1 || isolate_real_roots(h, cur.lo, cur.hi).empty())
                return 0; // root of g, hence of f
            cur = refine_step(cur);
        }
    }
    // f(alpha) != 0: refine until no roots of f remain inside, then test sign
    UPoly fs = up_squarefree(f);
    IsolatingInterval cur = iso();
    while (!isolate_real_roots(fs, cur.lo, cur.hi).empty()) cur = refine_step(cur);
    int s = up_sign_at(f, cur.mid());
    if (s == 0) throw std::logic_error("sign_of_upoly_at: unexpected zero at midpoint");
    return s;
}

int AlgebraicNumber::compare_rational(const Rational& q) const {
    if (rational_) return value_ < q ? -1 : (value_ == q ? 0 : 1);
    UPoly f{-q, Rational(1)};
    return sign_of_upoly_at(f);
}

int AlgebraicNumber::compare(const AlgebraicNumber& o) const {
    if (rational_ && o.rational_) return value_ < o.value_ ? -1 : (value_ == o.value_ ? 0 : 1);
    if (rational_) return -o.compare_rational(value_);
    if (o.rational_) return compare_rational(o.value_);

    UPoly g = up_gcd(poly_, o.poly_);
    IsolatingInterval a = iso(), b = o.iso();
    for (int round = 0; round < 512; ++round) {
        if (a.hi <= b.lo || b.hi <= a.lo) {
            // disjoint up to touching; a touching endpoint is not a root of
            // either defining polynomial, so the order is strict
            return a.hi <= b.lo ? -1 : 1;
        }
        if (up_degree(g) >= 1 && sign_of_upoly_at(g) == 0 && o.sign_of_upoly_at(g) == 0) {
            // both are roots of g: equal iff they nest into the same
            // isolating interval of g
            Rational bound = max(cauchy_bound(g), max(a.hi.abs(), b.hi.abs()) + Rational(1));
            auto groots = isolate_real_roots(g, -bound, bound);
            while (true) {
                int ia = -1, ib = -1;
                for (size_t i = 0; i < groots.size(); ++i) {
                    if (groots[i].lo <= a.lo && a.hi <= groots[i].hi) ia = static_cast<int>(i);
                    if (groots[i].lo <= b.lo && b.hi <= groots[i].hi) ib = static_cast<int>(i);
                }
                if (ia >= 0 && ib >= 0) {
                    if (ia == ib) return 0;
                    return ia < ib ? -1 : 1;
                }
                a = refine_step(a);
                b = refine_step(b);
            }
        }
        a = refine_step(a);
        b = refine_step(b);
    }
    throw std::logic_error("AlgebraicNumber::compare: failed to separate");
}

double AlgebraicNumber::to_double() const {
    if (rational_) return value_.to_double();
    auto [l, h] = enclosure(Rational(1, Integer(1) << 60));
    return ((l + h) * Rational(1, 2)).to_double();
}

std::string AlgebraicNumber::str() const {
    if (rational_) return value_.str();
    std::ostringstream os;
    os << "root(";
    for (size_t i = 0; i < poly_.size(); ++i) {
        if (i) os << " ";
        os << poly_[i];
    }
    os << "; " << lo_ << ", " << hi_ << ")";
    return os.str();
}

namespace {

Interval alg_interval(const AlgebraicNumber& a, const Rational& width) {
    auto [l, h] = a.enclosure(width);
    return Interval(l, h);
}

} // namespace

bool bivariate_is_zero(const Poly& p, const AlgebraicNumber& a, const AlgebraicNumber& b) {
    if (p.arity() != 2) throw std::invalid_argument("bivariate_is_zero: arity");
    if (a.is_rational()) {
        Poly sub = p.substitute(0, a.rational_value());
        auto u = sub.to_univariate(1);
        if (!u) throw std::logic_error("bivariate_is_zero: substitution failed");
        return b.sign_of_upoly_at(*u) == 0;
    }
    if (b.is_rational()) {
        Poly sub = p.substitute(1, b.rational_value());
        auto u = sub.to_univariate(0);
        if (!u) throw std::logic_error("bivariate_is_zero: substitution failed");
        return a.sign_of_upoly_at(*u) == 0;
    }

    // Both irrational. First check whether p(a, .) vanishes identically:
    // the gcd of p's y-coefficients (polynomials in x) vanishing at a.
    auto ycoeffs = p.coefficients_wrt(1);
    UPoly common;
    for (const auto& c : ycoeffs) {
        auto u = c.to_univariate(0);
        if (!u) throw std::logic_error("bivariate_is_zero: coefficient not univariate");
        common = up_gcd(common, *u);
    }
    if (up_degree(common) >= 1 && a.sign_of_upoly_at(common) == 0) return true;

    // Iterated resultants: the value v = p(a, b) is a root of
    //   W(z) = res_y(B(y), res_x(A(x), z - p(x, y))),
    // so v = 0 exactly when v's refinable enclosure nests into the
    // isolating interval of W's root at 0.
    std::vector<std::string> v3{"x", "y", "z"};
    Poly P3(v3);
    P3.add_term({0, 0, 1}, Rational(1));
    for (const auto& [e, c] : p.terms()) P3.add_term({e[0], e[1], 0}, -c);
    Poly A3 = Poly::from_univariate(v3, 0, a.defining());
    Poly B3 = Poly::from_univariate(v3, 1, b.defining());

    Poly R1 = poly_resultant(A3, P3, 0); // in (y, z)
    // strip the y-content so the second resultant cannot collapse
    {
        auto zc = R1.coefficients_wrt(2);
        UPoly ycontent;
        bool ok = true;
        for (const auto& c : zc) {
            auto u = c.to_univariate(1);
            if (!u) { ok = false; break; }
            ycontent = up_gcd(ycontent, *u);
        }
        if (ok && up_degree(ycontent) >= 1) {
            if (b.sign_of_upoly_at(ycontent) == 0)
                throw std::runtime_error("bivariate_is_zero: degenerate content configuration");
            R1 = R1.divide_exact(Poly::from_univariate(v3, 1, ycontent));
        }
    }
    Poly R2 = poly_resultant(B3, R1, 1); // in z
    auto W = R2.to_univariate(2);
    if (!W || up_is_zero(*W)) throw std::runtime_error("bivariate_is_zero: degenerate resultant");
    UPoly Ws = up_squarefree(*W);
    if (up_sign_at(Ws, Rational(0)) != 0) return false; // 0 is not a root of W

    // isolating radius of the root 0 of Ws
    Rational bound = cauchy_bound(Ws);
    Rational delta = bound;
    for (const auto& r : isolate_real_roots(Ws, -bound, bound)) {
        if (r.lo.sign() < 0 && r.hi.sign() > 0) continue; // the zero root itself
        if (r.lo.sign() >= 0) { delta = min(delta, r.lo); break; }
        delta = min(delta, -r.hi);
    }
    if (delta.sign() <= 0) throw std::logic_error("bivariate_is_zero: bad isolation radius");

    Rational w(1, Integer(1) << 16);
    for (int round = 0; round < 16; ++round, w = w * w) {
        Interval J = interval_eval(p, Box{alg_interval(a, w), alg_interval(b, w)});
        if (!J.contains_zero()) return false;
        if (-delta < J.lo && J.hi < delta) return true; // nests into the 0-root's interval
    }
    throw std::runtime_error("bivariate_is_zero: refinement budget exhausted");
}

int sign_at(const Poly& p, const std::vector<AlgebraicNumber>& point) {
    if (point.size() != p.arity()) throw std::invalid_argument("sign_at: point arity");
    // substitute rational coordinates
    Poly cur = p;
    std::vector<size_t> alg_idx;
    for (size_t i = 0; i < point.size(); ++i) {
        if (point[i].is_rational()) cur = cur.substitute(i, point[i].rational_value());
        else alg_idx.push_back(i);
    }
    if (alg_idx.empty()) {
        std::vector<Rational> pt(p.arity(), Rational(0));
        return cur.evaluate(pt).sign();
    }
    if (alg_idx.size() == 1) {
        auto u = cur.to_univariate(alg_idx[0]);
        if (!u) throw std::logic_error("sign_at: residual polynomial not univariate");
        return point[alg_idx[0]].sign_of_upoly_at(*u);
    }
    if (alg_idx.size() != 2) throw std::runtime_error("sign_at: more than two algebraic coordinates");

    const AlgebraicNumber& a = point[alg_idx[0]];
    const AlgebraicNumber& b = point[alg_idx[1]];
    // collapse to the two active variables
    Poly p2(std::vector<std::string>{"x", "y"});
    for (const auto& [e, c] : cur.terms()) {
        Poly::Exponents e2{e[alg_idx[0]], e[alg_idx[1]]};
        p2.add_term(e2, c);
    }
    Rational w(1, Integer(1) << 16);
    for (int round = 0; round < 6; ++round, w = w * w) {
        Interval J = interval_eval(p2, Box{alg_interval(a, w), alg_interval(b, w)});
        int s = J.definite_sign();
        if (s != 0) return s;
        if (round >= 1 && bivariate_is_zero(p2, a, b)) return 0;
    }
    throw std::runtime_error("sign_at: could not decide sign");
}

} // namespace cellparam
