#include "cellparam/scalarfn.hpp"
#include "cellparam/resultant.hpp"
#include "cellparam/upoly.hpp"

#include <sstream>

namespace cellparam {

namespace {

const std::vector<std::string> XW{"x", "w"};

// content of T with respect to w: gcd of the w-coefficients (univariate in x)
UPoly content_w(const Poly& T) {
    UPoly c;
    for (const auto& coeff : T.coefficients_wrt(1)) {
        auto u = coeff.to_univariate(0);
        if (!u) throw std::logic_error("content_w: coefficient not univariate");
        c = up_gcd(c, *u);
    }
    return c;
}

Poly lift_x(const UPoly& u) { return Poly::from_univariate(XW, 0, u); }

// pseudo-remainder of A by B in w
Poly prem_w(const Poly& A, const Poly& B) {
    int da = A.degree(1), db = B.degree(1);
    if (da < db) return A;
    Poly lcB = B.leading_coefficient_wrt(1);
    Poly R = A;
    for (int k = 0; k <= da - db; ++k) {
        int dr = R.degree(1);
        if (dr < db) break;
        Poly lcR = R.leading_coefficient_wrt(1);
        // R <- lcB * R - lcR * w^(dr-db) * B
        Poly shift(XW);
        shift.add_term({0, static_cast<unsigned>(dr - db)}, Rational(1));
        R = R * lcB - B * shift * lcR;
    }
    return R;
}

Poly primitive_w(const Poly& T) {
    if (T.is_zero()) return T;
    UPoly c = content_w(T);
    if (up_degree(c) < 1) return T.primitive_normalized();
    return T.divide_exact(lift_x(c)).primitive_normalized();
}

// gcd with respect to w over Q(x) (primitive PRS), returned primitive
Poly bi_gcd_w(Poly A, Poly B) {
    if (A.is_zero()) return primitive_w(B);
    if (B.is_zero()) return primitive_w(A);
    A = primitive_w(A);
    B = primitive_w(B);
    if (A.degree(1) < B.degree(1)) std::swap(A, B);
    while (!B.is_zero() && B.degree(1) >= 1) {
        Poly R = primitive_w(prem_w(A, B));
        A = std::move(B);
        B = std::move(R);
        if (!B.is_zero() && B.degree(1) >= A.degree(1) && A.degree(1) >= 1)
            throw std::logic_error("bi_gcd_w: degree did not drop");
    }
    if (B.is_zero()) return A;
    return Poly::constant(XW, Rational(1)); // coprime up to content
}

// square-free part with respect to w
Poly squarefree_w(const Poly& T) {
    Poly P = primitive_w(T);
    if (P.degree(1) <= 1) return P;
    Poly g = bi_gcd_w(P, P.derivative(1));
    if (g.degree(1) < 1) return P;
    return P.divide_exact(g).primitive_normalized();
}

Rational rational_inside(const AlgebraicNumber& lo, const AlgebraicNumber& hi) {
    Rational w(1, 16);
    for (int round = 0; round < 300; ++round, w = w * Rational(1, 16)) {
        auto [ll, lh] = lo.enclosure(w);
        auto [hl, hh] = hi.enclosure(w);
        if (lh < hl) return best_rational_in(lh, hl);
    }
    throw std::logic_error("rational_inside: endpoints did not separate");
}

} // namespace

ScalarFn ScalarFn::from_poly(const UPoly& p, const AlgebraicNumber& lo, const AlgebraicNumber& hi) {
    if (!(lo.compare(hi) < 0)) throw std::invalid_argument("ScalarFn: empty domain");
    ScalarFn f;
    f.poly_ = p;
    up_trim(*f.poly_);
    f.lo_ = lo;
    f.hi_ = hi;
    f.anchor_ = rational_inside(lo, hi);
    return f;
}

ScalarFn ScalarFn::from_const(const Rational& c, const AlgebraicNumber& lo,
                              const AlgebraicNumber& hi) {
    UPoly p{c};
    up_trim(p);
    return from_poly(p, lo, hi);
}

ScalarFn ScalarFn::from_branch(Poly T, const AlgebraicNumber& lo, const AlgebraicNumber& hi,
                               const Rational& anchor, const Interval& w_at_anchor) {
    if (!(lo.compare(hi) < 0)) throw std::invalid_argument("ScalarFn: empty domain");
    if (T.arity() != 2) T = T.with_vars(XW);
    ScalarFn f;
    f.T_ = squarefree_w(T.with_vars(XW));
    if (f.T_.degree(1) < 1) throw std::invalid_argument("ScalarFn: constraint constant in w");
    f.lo_ = lo;
    f.hi_ = hi;
    f.anchor_ = anchor;
    if (lo.compare_rational(anchor) >= 0 || hi.compare_rational(anchor) <= 0)
        throw std::invalid_argument("ScalarFn: anchor outside domain");

    // delineability: no vertical content, leading-coefficient, or
    // discriminant roots strictly inside the domain
    UPoly cw = content_w(f.T_);
    UPoly bad = cw;
    {
        auto lc = f.T_.leading_coefficient_wrt(1).to_univariate(0);
        if (!lc) throw std::logic_error("ScalarFn: bad leading coefficient");
        if (up_degree(*lc) >= 1) bad = up_is_zero(bad) ? *lc : up_mul(bad, *lc);
        Poly disc = poly_discriminant(f.T_, 1);
        auto du = disc.to_univariate(0);
        if (du && up_degree(*du) >= 1) bad = up_is_zero(bad) ? *du : up_mul(bad, *du);
    }
    if (!up_is_zero(bad) && up_degree(bad) >= 1) {
        Rational blo = min(lo.enclosure().first, Rational(0)) - Rational(1);
        Rational bhi = max(hi.enclosure().second, Rational(1)) + Rational(1);
        for (const auto& iso : isolate_real_roots(bad, blo, bhi)) {
            AlgebraicNumber root = AlgebraicNumber::root_in(bad, iso.lo, iso.hi);
            if (lo.compare(root) < 0 && root.compare(hi) < 0)
                throw std::invalid_argument("ScalarFn: constraint not delineable over the domain");
        }
    }

    // branch index at the anchor
    UPoly fiber = f.fiber_at(anchor);
    if (up_is_zero(fiber)) throw std::invalid_argument("ScalarFn: fiber vanishes at anchor");
    Rational bound(1);
    for (const auto& c : fiber) bound = max(bound, c.abs());
    bound = Rational(1) + bound / fiber.back().abs();
    auto roots = isolate_real_roots(fiber, -bound, bound);
    int idx = -1;
    for (size_t i = 0; i < roots.size(); ++i) {
        IsolatingInterval cur = roots[i];
        // refine until decidable against the anchor window
        for (int round = 0; round < 64; ++round) {
            if (w_at_anchor.lo <= cur.lo && cur.hi <= w_at_anchor.hi) {
                idx = static_cast<int>(i);
                break;
            }
            if (cur.hi <= w_at_anchor.lo || cur.lo >= w_at_anchor.hi) break;
            cur = refine_root(cur, cur.width() * Rational(1, 4));
        }
        if (idx >= 0) break;
    }
    if (idx < 0) throw std::invalid_argument("ScalarFn: anchor window does not select a branch");
    f.branch_index_ = idx;
    return f;
}

UPoly ScalarFn::fiber_at(const Rational& x) const {
    Poly sub = T_.substitute(0, x);
    auto u = sub.to_univariate(1);
    if (!u) throw std::logic_error("ScalarFn::fiber_at: fiber not univariate");
    return *u;
}

ScalarFn::DerivForm ScalarFn::derivative_form(int s) const {
    if (s < 0) throw std::invalid_argument("derivative_form: negative order");
    if (is_poly()) {
        UPoly d = *poly_;
        for (int i = 0; i < s; ++i) d = up_derivative(d);
        return DerivForm{Poly::from_univariate(XW, 0, d), Poly::constant(XW, Rational(1))};
    }
    if (deriv_cache_.empty()) {
        // f^(0) = w / 1
        deriv_cache_.push_back(DerivForm{Poly::variable(XW, 1), Poly::constant(XW, Rational(1))});
    }
    while (static_cast<int>(deriv_cache_.size()) <= s) {
        const DerivForm& prev = deriv_cache_.back();
        Poly Tw = T_.derivative(1);
        Poly Tx = T_.derivative(0);
        // f^(s) = N_s / Tw^(2s); with w' = -Tx/Tw:
        //   N_{s+1} = (dN/dx * Tw - dN/dw * Tx) * Tw - 2s * N * (dTw/dx * Tw - dTw/dw * Tx)
        // over Tw^(2s+2). The even denominator power keeps its sign positive
        // along the branch, so sign(f^(s)) = sign(N_s) there.
        int k = 2 * (static_cast<int>(deriv_cache_.size()) - 1);
        Poly Nt = (prev.num.derivative(0) * Tw - prev.num.derivative(1) * Tx) * Tw;
        if (k > 0) {
            Poly Twt = Tw.derivative(0) * Tw - Tw.derivative(1) * Tx;
            Nt = Nt - prev.num * Twt * Rational(k);
        }
        deriv_cache_.push_back(DerivForm{Nt, prev.den * Tw * Tw});
    }
    return deriv_cache_[static_cast<size_t>(s)];
}

AlgebraicNumber ScalarFn::value_at(const Rational& x) const {
    if (lo_.compare_rational(x) >= 0 || hi_.compare_rational(x) <= 0)
        throw std::domain_error("ScalarFn::value_at: point outside the open domain");
    if (is_poly()) return AlgebraicNumber(up_eval(*poly_, x));
    UPoly fiber = fiber_at(x);
    Rational bound(1);
    for (const auto& c : fiber) bound = max(bound, c.abs());
    bound = Rational(1) + bound / fiber.back().abs();
    return AlgebraicNumber::root_index(fiber, branch_index_, -bound, bound);
}

Interval ScalarFn::value_enclosure(const Rational& x, unsigned bits) const {
    AlgebraicNumber v = value_at(x);
    auto [l, h] = v.enclosure(Rational(1, Integer(1) << bits));
    return Interval(l, h);
}

int ScalarFn::sign_along(const Poly& N, const Rational& x) const {
    AlgebraicNumber v = value_at(x);
    Poly sub = N.with_vars(XW).substitute(0, x);
    auto u = sub.to_univariate(1);
    if (!u) throw std::logic_error("sign_along: residual not univariate");
    return v.sign_of_upoly_at(*u);
}

std::vector<AlgebraicNumber> ScalarFn::zero_candidates_along(const Poly& N_in) const {
    Poly N = N_in.with_vars(XW);
    std::vector<AlgebraicNumber> out;
    UPoly elim;
    if (is_poly()) {
        // N(x, p(x))
        Poly px = Poly::from_univariate(XW, 0, *poly_);
        Poly sub = N.substitute(1, px);
        auto u = sub.to_univariate(0);
        if (!u) throw std::logic_error("zero_candidates_along: not univariate");
        elim = *u;
    } else {
        if (N.is_zero()) return out;
        if (N.degree(1) < 1) {
            auto u = N.to_univariate(0);
            if (!u) throw std::logic_error("zero_candidates_along: bad numerator");
            elim = *u;
        } else {
            Poly h = T_;
            Poly g = bi_gcd_w(N, T_);
            if (g.degree(1) >= 1) h = T_.divide_exact(g).primitive_normalized();
            if (h.degree(1) < 1) return out; // branch inside the common factor
            Poly res = poly_resultant(N, h, 1);
            auto u = res.to_univariate(0);
            if (!u) throw std::logic_error("zero_candidates_along: resultant not univariate");
            elim = *u;
        }
    }
    if (up_is_zero(elim)) return out;
    if (up_degree(elim) < 1) return out;
    auto [llo, lhi] = lo_.enclosure();
    auto [hlo, hhi] = hi_.enclosure();
    for (const auto& iso : isolate_real_roots(elim, llo - Rational(1), hhi + Rational(1))) {
        AlgebraicNumber root = AlgebraicNumber::root_in(elim, iso.lo, iso.hi);
        if (lo_.compare(root) < 0 && root.compare(hi_) < 0) out.push_back(root);
    }
    return out;
}

AlgebraicNumber ScalarFn::limit_at_lo() const {
    if (is_poly()) {
        // continuous extension: evaluate the polynomial at the endpoint
        if (lo_.is_rational()) return AlgebraicNumber(up_eval(*poly_, lo_.rational_value()));
        // p(lo) for algebraic lo via the exact expression machinery
        ExprPtr acc = Expr::constant(Rational(0));
        ExprPtr xv = Expr::constant(lo_);
        for (size_t k = poly_->size(); k-- > 0;)
            acc = Expr::add(Expr::mul(acc, xv), Expr::constant((*poly_)[k]));
        auto v = expr_eval_exact(acc, {});
        if (!v) throw std::logic_error("limit_at_lo: evaluation failed");
        return *v;
    }
    // roots of the endpoint fiber, matched against branch values nearby
    UPoly wdef;
    if (lo_.is_rational()) {
        wdef = fiber_at(lo_.rational_value());
    } else {
        Poly defx = Poly::from_univariate(XW, 0, lo_.defining());
        Poly res = poly_resultant(defx, T_, 0);
        auto u = res.to_univariate(1);
        if (!u) throw std::logic_error("limit_at_lo: resultant not univariate");
        wdef = *u;
    }
    if (up_is_zero(wdef)) throw std::logic_error("limit_at_lo: degenerate endpoint fiber");
    UPoly wdef_sq = up_squarefree(wdef);
    Rational bound(1);
    for (const auto& c : wdef_sq) bound = max(bound, c.abs());
    bound = Rational(1) + bound / wdef_sq.back().abs();
    auto roots = isolate_real_roots(wdef_sq, -bound, bound);
    // approach the endpoint from inside until the value nests into exactly
    // one isolating interval
    Rational probe_gap(1, 4);
    for (int round = 0; round < 200; ++round, probe_gap = probe_gap * Rational(1, 4)) {
        auto [llo, lhi] = lo_.enclosure(probe_gap * Rational(1, 8));
        Rational x = lhi + probe_gap;
        // ensure the probe stays inside the domain
        if (hi_.compare_rational(x) <= 0) continue;
        Interval v = value_enclosure(x, 16 + static_cast<unsigned>(4 * round));
        int hits = 0, hit = -1;
        for (size_t i = 0; i < roots.size(); ++i) {
            IsolatingInterval ri = refine_root(roots[i], probe_gap);
            // allow margin: the value converges to one root as x -> lo
            Interval win(ri.lo - probe_gap * Rational(4), ri.hi + probe_gap * Rational(4));
            if (win.contains(v)) {
                ++hits;
                hit = static_cast<int>(i);
            }
        }
        if (hits == 1)
            return AlgebraicNumber::root_in(wdef_sq, roots[static_cast<size_t>(hit)].lo,
                                            roots[static_cast<size_t>(hit)].hi);
    }
    throw std::logic_error("limit_at_lo: limit did not stabilize");
}

AlgebraicNumber ScalarFn::limit_at_hi() const {
    if (is_poly()) {
        if (hi_.is_rational()) return AlgebraicNumber(up_eval(*poly_, hi_.rational_value()));
        ExprPtr acc = Expr::constant(Rational(0));
        ExprPtr xv = Expr::constant(hi_);
        for (size_t k = poly_->size(); k-- > 0;)
            acc = Expr::add(Expr::mul(acc, xv), Expr::constant((*poly_)[k]));
        auto v = expr_eval_exact(acc, {});
        if (!v) throw std::logic_error("limit_at_hi: evaluation failed");
        return *v;
    }
    UPoly wdef;
    if (hi_.is_rational()) {
        wdef = fiber_at(hi_.rational_value());
    } else {
        Poly defx = Poly::from_univariate(XW, 0, hi_.defining());
        Poly res = poly_resultant(defx, T_, 0);
        auto u = res.to_univariate(1);
        if (!u) throw std::logic_error("limit_at_hi: resultant not univariate");
        wdef = *u;
    }
    if (up_is_zero(wdef)) throw std::logic_error("limit_at_hi: degenerate endpoint fiber");
    UPoly wdef_sq = up_squarefree(wdef);
    Rational bound(1);
    for (const auto& c : wdef_sq) bound = max(bound, c.abs());
    bound = Rational(1) + bound / wdef_sq.back().abs();
    auto roots = isolate_real_roots(wdef_sq, -bound, bound);
    Rational probe_gap(1, 4);
    for (int round = 0; round < 200; ++round, probe_gap = probe_gap * Rational(1, 4)) {
        auto [hlo, hhi] = hi_.enclosure(probe_gap * Rational(1, 8));
        Rational x = hlo - probe_gap;
        if (lo_.compare_rational(x) >= 0) continue;
        Interval v = value_enclosure(x, 16 + static_cast<unsigned>(4 * round));
        int hits = 0, hit = -1;
        for (size_t i = 0; i < roots.size(); ++i) {
            IsolatingInterval ri = refine_root(roots[i], probe_gap);
            Interval win(ri.lo - probe_gap * Rational(4), ri.hi + probe_gap * Rational(4));
            if (win.contains(v)) {
                ++hits;
                hit = static_cast<int>(i);
            }
        }
        if (hits == 1)
            return AlgebraicNumber::root_in(wdef_sq, roots[static_cast<size_t>(hit)].lo,
                                            roots[static_cast<size_t>(hit)].hi);
    }
    throw std::logic_error("limit_at_hi: limit did not stabilize");
}

Interval ScalarFn::value_range(unsigned bits) const {
    Rational w(1, Integer(1) << bits);
    auto enc = [&](const AlgebraicNumber& v) {
        auto [l, h] = v.enclosure(w);
        return Interval(l, h);
    };
    Interval out = Interval::hull(enc(limit_at_lo()), enc(limit_at_hi()));
    if (!is_poly()) {
        // interior extrema: zeros of f' along the branch, sampled at a
        // nearby interior rational point
        DerivForm d1 = derivative_form(1);
        for (const auto& x : zero_candidates_along(d1.num)) {
            auto [xl, xh] = x.enclosure(w);
            Rational xm = best_rational_in(xl, xh);
            if (lo_.compare_rational(xm) < 0 && hi_.compare_rational(xm) > 0)
                out = Interval::hull(out, value_enclosure(xm, bits));
        }
    } else {
        UPoly d = up_derivative(*poly_);
        if (!up_is_zero(d)) {
            auto [llo, lhi] = lo_.enclosure();
            auto [hlo, hhi] = hi_.enclosure();
            for (const auto& iso : isolate_real_roots(d, llo - Rational(1), hhi + Rational(1))) {
                AlgebraicNumber root = AlgebraicNumber::root_in(d, iso.lo, iso.hi);
                if (lo_.compare(root) < 0 && root.compare(hi_) < 0) {
                    auto [xl, xh] = root.enclosure(w);
                    Interval vals = Interval::hull(Interval(up_eval(*poly_, xl)),
                                                   Interval(up_eval(*poly_, xh)));
                    out = Interval::hull(out, vals);
                }
            }
        }
    }
    return out;
}

ExprPtr ScalarFn::to_expr(const Rational& margin) const {
    if (is_poly()) {
        UPoly p = *poly_;
        ExprPtr xv = Expr::variable(1);
        ExprPtr acc = Expr::constant(Rational(0));
        for (size_t k = p.size(); k-- > 0;) acc = Expr::add(Expr::mul(acc, xv), Expr::constant(p[k]));
        return acc;
    }
    auto [llo, lhi] = lo_.enclosure(margin);
    auto [hlo, hhi] = hi_.enclosure(margin);
    Box args_closed{Interval(llo, hhi)};
    Box args_inset{Interval(min(lhi + margin, hlo), max(hlo - margin, lhi))};

    // guard window search around sampled branch values
    Interval hullv = value_enclosure(anchor_, 32);
    for (int k = 1; k <= 7; ++k) {
        Rational x = lhi + (hlo - lhi) * Rational(k, 8);
        if (lo_.compare_rational(x) < 0 && hi_.compare_rational(x) > 0)
            hullv = Interval::hull(hullv, value_enclosure(x, 32));
    }
    try {
        hullv = Interval::hull(hullv, Interval(limit_at_lo().enclosure(Rational(1, 1024)).first,
                                               limit_at_lo().enclosure(Rational(1, 1024)).second));
        hullv = Interval::hull(hullv, Interval(limit_at_hi().enclosure(Rational(1, 1024)).first,
                                               limit_at_hi().enclosure(Rational(1, 1024)).second));
    } catch (const std::exception&) {
        // endpoint limits may be expensive to stabilize; sampling suffices
    }
    Rational base_pad = hullv.width() * Rational(1, 8) + Rational(1, 1 << 10);
    for (int attempt = 0; attempt < 10; ++attempt) {
        Rational pad = base_pad * Rational(1, Integer(1) << (2 * attempt));
        Interval guard_w(hullv.lo - pad, hullv.hi + pad);
        for (const Box& gargs : {args_closed, args_inset}) {
            try {
                return Expr::root_of(T_, branch_index_, gargs, guard_w, {Expr::variable(1)});
            } catch (const GuardViolation&) {
            }
        }
    }
    throw GuardViolation("ScalarFn::to_expr: no admissible guard window found");
}

ScalarFn ScalarFn::compose_poly(const UPoly& q, const AlgebraicNumber& tlo,
                                const AlgebraicNumber& thi) const {
    if (is_poly()) {
        // p(q(t))
        UPoly acc;
        for (size_t k = poly_->size(); k-- > 0;) {
            acc = up_mul(acc, q);
            if (acc.empty()) acc.push_back((*poly_)[k]);
            else acc[0] += (*poly_)[k];
            up_trim(acc);
        }
        return from_poly(acc, tlo, thi);
    }
    Poly qx = Poly::from_univariate(XW, 0, q);
    Poly Tq = T_.substitute(0, qx);
    Rational anchor = rational_inside(tlo, thi);
    Rational xq = up_eval(q, anchor);
    AlgebraicNumber v = value_at(xq);
    auto [vl, vh] = v.enclosure(Rational(1, Integer(1) << 24));
    // widen until it is isolating in the new fiber
    Poly sub = Tq.substitute(0, anchor);
    auto fiber = sub.to_univariate(1);
    if (!fiber || up_is_zero(*fiber)) throw std::logic_error("compose_poly: degenerate fiber");
    Rational pad = (vh - vl) + Rational(1, Integer(1) << 24);
    for (int k = 0; k < 12; ++k) {
        Interval win(vl - pad, vh + pad);
        if (up_sign_at(*fiber, win.lo) != 0 && up_sign_at(*fiber, win.hi) != 0) {
            auto rs = isolate_real_roots(*fiber, win.lo, win.hi);
            if (rs.size() == 1) return from_branch(Tq, tlo, thi, anchor, win);
        }
        pad = pad * Rational(1, 4);
    }
    throw std::logic_error("compose_poly: could not isolate the composed branch");
}

ScalarFn ScalarFn::inverse() const {
    AlgebraicNumber va = limit_at_lo(), vb = limit_at_hi();
    int cmp = va.compare(vb);
    if (cmp == 0) throw std::domain_error("ScalarFn::inverse: function is not injective");
    const AlgebraicNumber& wlo = cmp < 0 ? va : vb;
    const AlgebraicNumber& whi = cmp < 0 ? vb : va;
    Rational anchor = rational_inside(wlo, whi);

    Poly Tsw(XW);
    if (is_poly()) {
        // w = p(x) becomes p(w') - x' = 0 with (x', w') = (w, x)
        for (size_t k = 0; k < poly_->size(); ++k) {
            if ((*poly_)[k].is_zero()) continue;
            Tsw.add_term({0, static_cast<unsigned>(k)}, (*poly_)[k]);
        }
        Tsw.add_term({1, 0}, Rational(-1));
    } else {
        for (const auto& [e, c] : T_.terms()) Tsw.add_term({e[1], e[0]}, c);
    }
    // the x-value with f(x) = anchor: unique by injectivity
    Poly sub = Tsw.substitute(0, anchor);
    auto fiber = sub.to_univariate(1);
    if (!fiber || up_is_zero(*fiber)) throw std::logic_error("inverse: degenerate fiber");
    auto [dlo, dl2] = lo_.enclosure(Rational(1, 1 << 20));
    auto [dh1, dhi] = hi_.enclosure(Rational(1, 1 << 20));
    auto rs = isolate_real_roots(*fiber, dlo, dhi);
    std::vector<IsolatingInterval> inside;
    for (const auto& r : rs) {
        AlgebraicNumber root = AlgebraicNumber::root_in(*fiber, r.lo, r.hi);
        if (lo_.compare(root) < 0 && root.compare(hi_) < 0) inside.push_back(r);
    }
    if (inside.size() != 1) throw std::domain_error("ScalarFn::inverse: branch is not injective");
    return from_branch(Tsw, wlo, whi, anchor, Interval(inside[0].lo, inside[0].hi));
}

std::string ScalarFn::str() const {
    std::ostringstream os;
    if (is_poly()) {
        os << "poly[";
        for (size_t i = 0; i < poly_->size(); ++i) os << (i ? " " : "") << (*poly_)[i];
        os << "]";
    } else {
        os << "branch[" << T_.str() << "; #" << branch_index_ << "]";
    }
    os << " on (" << lo_.str() << ", " << hi_.str() << ")";
    return os.str();
}

} // namespace cellparam
