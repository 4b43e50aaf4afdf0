#include "cellparam/expr.hpp"
#include "cellparam/resultant.hpp"

#include <algorithm>
#include <sstream>

namespace cellparam {

namespace {

std::vector<std::string> default_vars(int n) {
    std::vector<std::string> v;
    v.reserve(static_cast<size_t>(n));
    for (int i = 1; i <= n; ++i) v.push_back("x" + std::to_string(i));
    return v;
}

struct ExprNode : Expr {};

std::shared_ptr<Expr> new_node(Expr::Kind k) {
    auto p = std::make_shared<ExprNode>();
    p->kind = k;
    return p;
}

} // namespace

ExprPtr Expr::constant(const Rational& c) {
    auto e = new_node(Kind::Const);
    e->cval = c;
    return e;
}

ExprPtr Expr::variable(int index) {
    if (index < 1) throw std::invalid_argument("Expr::variable: indices are 1-based");
    auto e = new_node(Kind::Var);
    e->var = index;
    return e;
}

ExprPtr Expr::add(ExprPtr x, ExprPtr y) {
    if (x->is_const() && y->is_const()) return constant(x->cval + y->cval);
    if (x->is_const() && x->cval.is_zero()) return y;
    if (y->is_const() && y->cval.is_zero()) return x;
    auto e = new_node(Kind::Add);
    e->a = std::move(x);
    e->b = std::move(y);
    return e;
}

ExprPtr Expr::sub(ExprPtr x, ExprPtr y) {
    if (x->is_const() && y->is_const()) return constant(x->cval - y->cval);
    if (y->is_const() && y->cval.is_zero()) return x;
    auto e = new_node(Kind::Sub);
    e->a = std::move(x);
    e->b = std::move(y);
    return e;
}

ExprPtr Expr::mul(ExprPtr x, ExprPtr y) {
    if (x->is_const() && y->is_const()) return constant(x->cval * y->cval);
    if (x->is_const()) {
        if (x->cval.is_zero()) return constant(Rational(0));
        if (x->cval == Rational(1)) return y;
    }
    if (y->is_const()) {
        if (y->cval.is_zero()) return constant(Rational(0));
        if (y->cval == Rational(1)) return x;
    }
    auto e = new_node(Kind::Mul);
    e->a = std::move(x);
    e->b = std::move(y);
    return e;
}

ExprPtr Expr::pow(ExprPtr x, unsigned p) {
    if (p == 0) return constant(Rational(1));
    if (p == 1) return x;
    if (x->is_const()) return constant(x->cval.pow(p));
    auto e = new_node(Kind::Pow);
    e->a = std::move(x);
    e->exponent = p;
    return e;
}

int Expr::arity() const {
    switch (kind) {
        case Kind::Const: return 0;
        case Kind::Var: return var;
        case Kind::Add:
        case Kind::Sub:
        case Kind::Mul: return std::max(a->arity(), b->arity());
        case Kind::Pow: return a->arity();
        case Kind::RootOf: {
            int m = 0;
            for (const auto& arg : args) m = std::max(m, arg->arity());
            return m;
        }
    }
    return 0;
}

std::optional<Poly> Expr::to_poly(int arity_hint) const {
    int n = std::max(arity_hint, arity());
    auto vars = default_vars(n);
    switch (kind) {
        case Kind::Const: return Poly::constant(vars, cval);
        case Kind::Var: return Poly::variable(vars, static_cast<size_t>(var - 1));
        case Kind::Add: {
            auto pa = a->to_poly(n), pb = b->to_poly(n);
            if (!pa || !pb) return std::nullopt;
            return *pa + *pb;
        }
        case Kind::Sub: {
            auto pa = a->to_poly(n), pb = b->to_poly(n);
            if (!pa || !pb) return std::nullopt;
            return *pa - *pb;
        }
        case Kind::Mul: {
            auto pa = a->to_poly(n), pb = b->to_poly(n);
            if (!pa || !pb) return std::nullopt;
            return *pa * *pb;
        }
        case Kind::Pow: {
            auto pa = a->to_poly(n);
            if (!pa) return std::nullopt;
            return pa->pow(exponent);
        }
        case Kind::RootOf: return std::nullopt;
    }
    return std::nullopt;
}

std::string Expr::str() const {
    std::ostringstream os;
    switch (kind) {
        case Kind::Const: os << "(const " << cval << ")"; break;
        case Kind::Var: os << "(var " << var << ")"; break;
        case Kind::Add: os << "(+ " << a->str() << " " << b->str() << ")"; break;
        case Kind::Sub: os << "(- " << a->str() << " " << b->str() << ")"; break;
        case Kind::Mul: os << "(* " << a->str() << " " << b->str() << ")"; break;
        case Kind::Pow: os << "(pow " << a->str() << " " << exponent << ")"; break;
        case Kind::RootOf: {
            os << "(rootof (poly (vars";
            for (const auto& v : rpoly.vars()) os << " " << v;
            os << ")";
            for (const auto& [e, c] : rpoly.terms()) {
                os << " (term " << c << " (";
                bool first = true;
                for (size_t i = 0; i < e.size(); ++i) {
                    if (e[i] == 0) continue;
                    if (!first) os << " ";
                    os << "(" << rpoly.vars()[i] << " " << e[i] << ")";
                    first = false;
                }
                os << "))";
            }
            os << ") " << branch << " (";
            for (const auto& g : guard_args) os << "(" << g.lo << " " << g.hi << ") ";
            os << "(" << guard_w.lo << " " << guard_w.hi << "))";
            for (const auto& arg : args) os << " " << arg->str();
            os << ")";
            break;
        }
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// guard verification and branch simplification
// ---------------------------------------------------------------------------

bool poly_nonvanishing_on(const Poly& p, const Box& box, int depth) {
    Interval v = interval_eval(p, box);
    if (v.definite_sign() != 0) return true;
    if (depth <= 0) return false;
    size_t widest = 0;
    for (size_t i = 1; i < box.size(); ++i)
        if (box[i].width() > box[widest].width()) widest = i;
    if (box[widest].width().is_zero()) return false;
    Rational m = box[widest].mid();
    Box lo_box = box, hi_box = box;
    lo_box[widest] = Interval(box[widest].lo, m);
    hi_box[widest] = Interval(m, box[widest].hi);
    return poly_nonvanishing_on(p, lo_box, depth - 1) &&
           poly_nonvanishing_on(p, hi_box, depth - 1);
}

namespace {

// Power-series Newton solution of Q(x, w) = 0 around (c, w0) in the single
// variable `xvar`; returns the coefficients of a polynomial branch (in x)
// when the series terminates within the degree cap.
std::optional<UPoly> polynomial_branch_series(const Poly& Q, size_t xvar, size_t wvar,
                                              const Rational& c, const Rational& w0,
                                              int degree_cap) {
    const size_t N = static_cast<size_t>(degree_cap) + 2;
    auto trunc = [&](UPoly& s) {
        if (s.size() > N) s.resize(N);
        up_trim(s);
    };
    auto smul = [&](const UPoly& u, const UPoly& v) {
        UPoly r = up_mul(u, v);
        trunc(r);
        return r;
    };
    auto sinv = [&](const UPoly& u) -> std::optional<UPoly> {
        if (u.empty() || u[0].is_zero()) return std::nullopt;
        UPoly q(N, Rational(0));
        Rational inv0 = u[0].reciprocal();
        q[0] = inv0;
        for (size_t k = 1; k < N; ++k) {
            Rational acc(0);
            for (size_t j = 1; j <= k && j < u.size(); ++j) acc += u[j] * q[k - j];
            q[k] = -acc * inv0;
        }
        up_trim(q);
        return q;
    };
    auto wcoeffs = Q.coefficients_wrt(wvar);
    std::vector<UPoly> cs;
    for (const auto& co : wcoeffs) {
        auto u = co.to_univariate(xvar);
        if (!u) return std::nullopt;
        cs.push_back(up_compose_affine(*u, c, Rational(1))); // u(c + t)
    }
    auto eval_series = [&](const std::vector<UPoly>& coeffs, const UPoly& w) {
        UPoly acc;
        for (size_t k = coeffs.size(); k-- > 0;) {
            acc = smul(acc, w);
            acc = up_add(acc, coeffs[k]);
            trunc(acc);
        }
        return acc;
    };
    std::vector<UPoly> dcs;
    for (size_t k = 1; k < cs.size(); ++k)
        dcs.push_back(up_scale(cs[k], Rational(static_cast<int>(k))));

    UPoly w{w0};
    for (int it = 0; it < 30; ++it) {
        UPoly qv = eval_series(cs, w);
        if (qv.empty()) break;
        UPoly dv = eval_series(dcs, w);
        auto dinv = sinv(dv);
        if (!dinv) return std::nullopt;
        UPoly delta = smul(qv, *dinv);
        if (delta.empty()) break;
        w = up_sub(w, delta);
        trunc(w);
    }
    if (!eval_series(cs, w).empty()) return std::nullopt; // did not converge in-cap
    return up_compose_affine(w, -c, Rational(1));          // shift back t = x - c
}

// Builds the composite polynomial Q(x1..xn, w) = p(args(x), w) when every
// argument is polynomial; nullopt otherwise.
std::optional<Poly> composite_defining(const Poly& p, const std::vector<ExprPtr>& args, int ar) {
    const size_t m = args.size();
    std::vector<Poly> aps;
    for (const auto& arg : args) {
        auto ap = arg->to_poly(ar);
        if (!ap) return std::nullopt;
        aps.push_back(*ap);
    }
    auto qvars = default_vars(ar);
    qvars.push_back("w");
    Poly Q(qvars);
    for (const auto& [e, coeff] : p.terms()) {
        Poly term = Poly::constant(qvars, coeff);
        for (size_t i = 0; i < m; ++i) {
            if (e[i] == 0) continue;
            Poly lifted(qvars);
            for (const auto& [ae, ac] : aps[i].terms()) {
                Poly::Exponents le(ae);
                le.push_back(0);
                lifted.add_term(le, ac);
            }
            term = term * lifted.pow(e[i]);
        }
        if (e[m] > 0) {
            Poly::Exponents we(static_cast<size_t>(ar) + 1, 0);
            we[static_cast<size_t>(ar)] = e[m];
            Poly wpow(qvars);
            wpow.add_term(we, Rational(1));
            term = term * wpow;
        }
        Q = Q + term;
    }
    return Q;
}

// Attempts to replace the branch by an exact polynomial h. Everything in
// this project lives over basic cells inside the unit box, so containment
// of h's values in the (closed) w-guard is verified over [0,1]^n.
std::optional<ExprPtr> try_polynomial_branch(const Poly& p, const std::vector<ExprPtr>& args,
                                             const Interval& guard_w) {
    const size_t m = args.size();
    if (m == 0) return std::nullopt;
    int ar = 0;
    for (const auto& arg : args) ar = std::max(ar, arg->arity());
    auto Qopt = composite_defining(p, args, ar);
    if (!Qopt) return std::nullopt;
    const Poly& Q = *Qopt;
    const size_t wvar = static_cast<size_t>(ar);

    int active = -1;
    for (int i = 0; i < ar; ++i) {
        if (Q.depends_on(static_cast<size_t>(i))) {
            if (active >= 0) return std::nullopt; // more than one active variable
            active = i;
        }
    }

    // pin the branch at an interior rational point
    std::vector<Rational> xc(static_cast<size_t>(ar), Rational(0));
    if (active >= 0) xc[static_cast<size_t>(active)] = Rational(1, 2);
    Poly Qc = Q;
    for (int i = 0; i < ar; ++i) Qc = Qc.substitute(static_cast<size_t>(i), xc[static_cast<size_t>(i)]);
    auto u0 = Qc.to_univariate(wvar);
    if (!u0 || up_is_zero(*u0)) return std::nullopt;
    std::vector<IsolatingInterval> rs0;
    try {
        rs0 = isolate_real_roots(*u0, guard_w.lo, guard_w.hi);
    } catch (const std::exception&) {
        return std::nullopt;
    }
    if (rs0.size() != 1) return std::nullopt;
    auto rr = up_rational_roots_in(*u0, guard_w.lo, guard_w.hi);
    if (rr.size() != 1) return std::nullopt;
    Rational w0 = rr[0];

    UPoly h;
    if (active < 0) {
        h = UPoly{w0};
    } else {
        int cap = std::max(Q.degree(static_cast<size_t>(active)), 1) + Q.total_degree();
        auto hs = polynomial_branch_series(Q, static_cast<size_t>(active), wvar,
                                           Rational(1, 2), w0, cap);
        if (!hs) return std::nullopt;
        h = *hs;
    }

    // exact identity Q(x, h(x)) == 0
    Poly hp = Poly::from_univariate(Q.vars(), static_cast<size_t>(std::max(active, 0)), h);
    Poly check = Q.substitute(wvar, hp);
    if (!check.is_zero()) return std::nullopt;

    // containment of h's values in the closed guard over the unit box
    if (active >= 0) {
        UPoly hu = h;
        Interval range(Rational(0));
        {
            Interval acc(Rational(0));
            Interval T(Rational(0), Rational(1));
            for (size_t i = hu.size(); i-- > 0;) acc = acc * T + Interval(hu[i]);
            range = acc;
        }
        if (!(guard_w.lo <= range.lo && range.hi <= guard_w.hi)) return std::nullopt;

        // no branch crossing inside (0,1): R = Q / (w - h) must not vanish
        // along w = h(x) in the open interior
        Poly wminus = Poly::variable(Q.vars(), wvar) - hp;
        Poly R(Q.vars());
        try {
            R = Q.divide_exact(wminus);
        } catch (const std::exception&) {
            return std::nullopt;
        }
        Poly D = R.substitute(wvar, hp);
        auto du = D.to_univariate(static_cast<size_t>(active));
        if (!du) return std::nullopt;
        if (up_is_zero(*du)) return std::nullopt; // double contact everywhere
        if (!isolate_real_roots(*du, Rational(0), Rational(1)).empty()) return std::nullopt;
    }

    // build h as an Expr in the active variable
    ExprPtr xv = active < 0 ? Expr::constant(Rational(0)) : Expr::variable(active + 1);
    ExprPtr acc = Expr::constant(Rational(0));
    for (size_t k = h.size(); k-- > 0;) acc = Expr::add(Expr::mul(acc, xv), Expr::constant(h[k]));
    return acc;
}

} // namespace

ExprPtr Expr::root_of(Poly p, int branch_index, Box guard_args, Interval guard_w,
                      std::vector<ExprPtr> args) {
    const size_t m = args.size();
    if (p.arity() != m + 1)
        throw std::invalid_argument("Expr::root_of: defining polynomial arity mismatch");
    if (guard_args.size() != m)
        throw std::invalid_argument("Expr::root_of: guard box arity mismatch");
    const size_t wvar = m;

    // exact simplifications first; both verify themselves independently of
    // the guard conditions (which can legitimately fail on box closures for
    // branches that are singular at a cell boundary)
    if (m > 0) {
        bool const_args = true;
        std::vector<Rational> cargs;
        for (const auto& arg : args) {
            if (arg->is_const()) cargs.push_back(arg->cval);
            else { const_args = false; break; }
        }
        if (const_args) {
            Poly q = p;
            for (size_t i = 0; i < m; ++i) q = q.substitute(i, cargs[i]);
            auto u = q.to_univariate(wvar);
            if (u && !up_is_zero(*u)) {
                auto rs = isolate_real_roots(*u, guard_w.lo, guard_w.hi);
                if (rs.size() == 1)
                    return Expr::constant(AlgebraicNumber::root_in(*u, rs[0].lo, rs[0].hi));
            }
        }
        if (auto simplified = try_polynomial_branch(p, args, guard_w)) return *simplified;
    }

    // guard condition (i): dp/dw nonvanishing over guard_args x guard_w
    Box full = guard_args;
    full.push_back(guard_w);
    if (!poly_nonvanishing_on(p.derivative(wvar), full, 14))
        throw GuardViolation("root_of: derivative in branch variable may vanish on guard box");
    // guard condition (ii): the branch cannot cross the w-guard boundary
    if (m > 0) {
        Box at_lo = guard_args, at_hi = guard_args;
        at_lo.push_back(Interval(guard_w.lo));
        at_hi.push_back(Interval(guard_w.hi));
        if (!poly_nonvanishing_on(p, at_lo, 14) || !poly_nonvanishing_on(p, at_hi, 14))
            throw GuardViolation("root_of: branch may cross the w-guard boundary");
    } else {
        auto u = p.to_univariate(0);
        if (!u || up_is_zero(*u)) throw GuardViolation("root_of: degenerate defining polynomial");
        if (up_sign_at(*u, guard_w.lo) == 0 || up_sign_at(*u, guard_w.hi) == 0)
            throw GuardViolation("root_of: guard endpoint is a root");
    }
    // guard condition (iii): exactly one root at the guard center
    std::vector<Rational> center;
    for (const auto& g : guard_args) center.push_back(g.mid());
    Poly at_center = p;
    for (size_t i = 0; i < m; ++i) at_center = at_center.substitute(i, center[i]);
    auto uc = at_center.to_univariate(wvar);
    if (!uc || up_is_zero(*uc)) throw GuardViolation("root_of: center fiber is degenerate");
    if (isolate_real_roots(*uc, guard_w.lo, guard_w.hi).size() != 1)
        throw GuardViolation("root_of: center fiber does not isolate one root");

    auto e = new_node(Kind::RootOf);
    e->rpoly = std::move(p);
    e->branch = branch_index;
    e->guard_args = std::move(guard_args);
    e->guard_w = guard_w;
    e->args = std::move(args);
    return e;
}

ExprPtr Expr::root_branch(Poly p, Box guard_args, Interval guard_w, std::vector<ExprPtr> args) {
    const size_t m = args.size();
    std::vector<Rational> center;
    for (const auto& g : guard_args) center.push_back(g.mid());
    Poly at_center = p;
    for (size_t i = 0; i < m; ++i) at_center = at_center.substitute(i, center[i]);
    auto uc = at_center.to_univariate(m);
    if (!uc || up_is_zero(*uc)) throw GuardViolation("root_branch: degenerate center fiber");
    Rational bound(1);
    for (const auto& c : *uc) bound = max(bound, c.abs());
    bound = Rational(1) + bound / uc->back().abs();
    auto all = isolate_real_roots(*uc, -bound, bound);
    int idx = -1;
    for (size_t i = 0; i < all.size(); ++i) {
        if (guard_w.lo <= all[i].lo && all[i].hi <= guard_w.hi) { idx = static_cast<int>(i); break; }
    }
    if (idx < 0) {
        for (size_t i = 0; i < all.size(); ++i)
            if (Interval(all[i].lo, all[i].hi).intersects(guard_w)) { idx = static_cast<int>(i); break; }
    }
    if (idx < 0) throw GuardViolation("root_branch: no root inside guard");
    return root_of(std::move(p), idx, std::move(guard_args), guard_w, std::move(args));
}

ExprPtr Expr::constant(const AlgebraicNumber& v) {
    if (v.is_rational()) return constant(v.rational_value());
    const UPoly& d = v.defining();
    UPoly dp = up_derivative(d);
    // refine until the derivative is sign-definite on the enclosure (the
    // root is simple, so this terminates)
    Rational w(1, 16);
    std::pair<Rational, Rational> enc = v.enclosure();
    while (true) {
        Interval iv(enc.first, enc.second);
        Interval dv(Rational(0));
        {
            Interval acc(Rational(0));
            for (size_t i = dp.size(); i-- > 0;) acc = acc * iv + Interval(dp[i]);
            dv = acc;
        }
        if (dv.definite_sign() != 0) break;
        w = w * Rational(1, 256);
        enc = v.enclosure(w);
    }
    Poly p = Poly::from_univariate({"w"}, 0, d);
    auto e = new_node(Kind::RootOf);
    e->rpoly = std::move(p);
    e->branch = 0;
    e->guard_w = Interval(enc.first, enc.second);
    return e;
}

ExprPtr Expr::reciprocal(ExprPtr x, const Interval& range_of_x) {
    if (range_of_x.contains_zero())
        throw std::invalid_argument("Expr::reciprocal: range contains zero");
    if (x->is_const()) return constant(x->cval.reciprocal());
    Poly p(std::vector<std::string>{"u", "w"});
    p.add_term({1, 1}, Rational(1));
    p.add_term({0, 0}, Rational(-1));
    Interval wr = range_of_x.reciprocal();
    Rational pad = wr.width() * Rational(1, 64) + wr.mig() * Rational(1, 64);
    Interval wr_pad(wr.lo - pad, wr.hi + pad);
    if (wr_pad.contains_zero()) {
        if (wr.lo.sign() > 0) wr_pad = Interval(wr.lo * Rational(1, 2), wr.hi + pad);
        else wr_pad = Interval(wr.lo - pad, wr.hi * Rational(1, 2));
    }
    return root_of(std::move(p), 0, Box{range_of_x}, wr_pad, {std::move(x)});
}

// ---------------------------------------------------------------------------
// substitution
// ---------------------------------------------------------------------------

ExprPtr expr_substitute(const ExprPtr& e, const std::vector<ExprPtr>& repl) {
    switch (e->kind) {
        case Expr::Kind::Const: return e;
        case Expr::Kind::Var: {
            if (e->var < 1 || static_cast<size_t>(e->var) > repl.size())
                throw std::invalid_argument("expr_substitute: missing replacement");
            return repl[static_cast<size_t>(e->var - 1)];
        }
        case Expr::Kind::Add: return Expr::add(expr_substitute(e->a, repl), expr_substitute(e->b, repl));
        case Expr::Kind::Sub: return Expr::sub(expr_substitute(e->a, repl), expr_substitute(e->b, repl));
        case Expr::Kind::Mul: return Expr::mul(expr_substitute(e->a, repl), expr_substitute(e->b, repl));
        case Expr::Kind::Pow: return Expr::pow(expr_substitute(e->a, repl), e->exponent);
        case Expr::Kind::RootOf: {
            if (e->args.empty()) return e; // algebraic constant
            std::vector<ExprPtr> nargs;
            nargs.reserve(e->args.size());
            for (const auto& arg : e->args) nargs.push_back(expr_substitute(arg, repl));
            return Expr::root_of(e->rpoly, e->branch, e->guard_args, e->guard_w, std::move(nargs));
        }
    }
    throw std::logic_error("expr_substitute: bad node");
}

namespace {

ExprPtr poly_to_expr_rec(const Poly& p, size_t var) {
    if (p.is_zero()) return Expr::constant(Rational(0));
    if (p.is_constant()) return Expr::constant(p.constant_value());
    if (var + 1 >= p.arity() || !p.depends_on(var)) {
        if (var + 1 < p.arity()) return poly_to_expr_rec(p, var + 1);
        auto u = p.to_univariate(var);
        if (!u) throw std::logic_error("expr_from_poly: residual polynomial not univariate");
        ExprPtr xv = Expr::variable(static_cast<int>(var) + 1);
        ExprPtr acc = Expr::constant(Rational(0));
        for (size_t k = u->size(); k-- > 0;) acc = Expr::add(Expr::mul(acc, xv), Expr::constant((*u)[k]));
        return acc;
    }
    auto coeffs = p.coefficients_wrt(var);
    ExprPtr xv = Expr::variable(static_cast<int>(var) + 1);
    ExprPtr acc = Expr::constant(Rational(0));
    for (size_t k = coeffs.size(); k-- > 0;)
        acc = Expr::add(Expr::mul(acc, xv), poly_to_expr_rec(coeffs[k], var + 1));
    return acc;
}

} // namespace

ExprPtr expr_from_poly(const Poly& p) {
    if (p.is_zero()) return Expr::constant(Rational(0));
    return poly_to_expr_rec(p, 0);
}

ExprPtr expr_affine_in_var(const ExprPtr& e, int var, const ExprPtr& offset, const ExprPtr& scale) {
    int n = std::max(e->arity(), var);
    std::vector<ExprPtr> repl;
    for (int i = 1; i <= n; ++i) {
        if (i == var) repl.push_back(Expr::add(offset, Expr::mul(scale, Expr::variable(var))));
        else repl.push_back(Expr::variable(i));
    }
    return expr_substitute(e, repl);
}

// ---------------------------------------------------------------------------
// interval evaluation
// ---------------------------------------------------------------------------

namespace {

// Contracts the branch range over argument ranges U by exclusion splitting
// plus interval Newton; the result contains every branch value over U.
Interval contract_branch(const Poly& p, const Box& U, const Interval& guard_w,
                         unsigned refine_bits) {
    const size_t wvar = U.size();
    Poly pw = p.derivative(wvar);
    Interval Y = guard_w;

    auto eval_at = [&](const Interval& w) {
        Box b = U;
        b.push_back(w);
        return interval_eval(p, b);
    };
    auto evald_at = [&](const Interval& w) {
        Box b = U;
        b.push_back(w);
        return interval_eval(pw, b);
    };

    for (int pass = 0; pass < 8; ++pass) {
        Rational m = Y.mid();
        Interval lo_half(Y.lo, m), hi_half(m, Y.hi);
        bool lo_out = !eval_at(lo_half).contains_zero();
        bool hi_out = !eval_at(hi_half).contains_zero();
        if (lo_out && !hi_out) Y = hi_half;
        else if (hi_out && !lo_out) Y = lo_half;
        else break;
    }
    unsigned iters = 4 + refine_bits / 16;
    for (unsigned it = 0; it < iters; ++it) {
        Interval d = evald_at(Y);
        if (d.contains_zero()) break;
        Rational m = Y.mid();
        Interval num = eval_at(Interval(m));
        Interval candidate = Interval(m) - num / d;
        if (!candidate.intersects(Y)) break;
        Interval next = candidate.intersect(Y);
        if (!(next.width() < Y.width())) break;
        Y = next;
        if (Y.width().is_zero()) break;
        Y = Y.round_out(refine_bits + 64, 4096);
    }
    return Y;
}

Interval range_rec(const ExprPtr& e, const Box& box, unsigned refine_bits) {
    switch (e->kind) {
        case Expr::Kind::Const: return Interval(e->cval);
        case Expr::Kind::Var: {
            if (e->var < 1 || static_cast<size_t>(e->var) > box.size())
                throw std::invalid_argument("expr_range: box too small");
            return box[static_cast<size_t>(e->var - 1)];
        }
        case Expr::Kind::Add: return range_rec(e->a, box, refine_bits) + range_rec(e->b, box, refine_bits);
        case Expr::Kind::Sub: return range_rec(e->a, box, refine_bits) - range_rec(e->b, box, refine_bits);
        case Expr::Kind::Mul: return range_rec(e->a, box, refine_bits) * range_rec(e->b, box, refine_bits);
        case Expr::Kind::Pow: return range_rec(e->a, box, refine_bits).pow(e->exponent);
        case Expr::Kind::RootOf: {
            Box U;
            U.reserve(e->args.size());
            for (size_t i = 0; i < e->args.size(); ++i) {
                Interval u = range_rec(e->args[i], box, refine_bits);
                if (!e->guard_args[i].contains(u))
                    throw GuardViolation("expr_range: argument range escapes guard");
                U.push_back(u);
            }
            return contract_branch(e->rpoly, U, e->guard_w, refine_bits);
        }
    }
    throw std::logic_error("expr_range: bad node");
}

} // namespace

Interval expr_range(const ExprPtr& e, const Box& box, unsigned refine_bits) {
    return range_rec(e, box, refine_bits);
}

Interval expr_eval_point(const ExprPtr& e, const std::vector<Rational>& point,
                         unsigned refine_bits) {
    switch (e->kind) {
        case Expr::Kind::Const: return Interval(e->cval);
        case Expr::Kind::Var: {
            if (e->var < 1 || static_cast<size_t>(e->var) > point.size())
                throw std::invalid_argument("expr_eval_point: point too short");
            return Interval(point[static_cast<size_t>(e->var - 1)]);
        }
        case Expr::Kind::Add: return expr_eval_point(e->a, point, refine_bits) + expr_eval_point(e->b, point, refine_bits);
        case Expr::Kind::Sub: return expr_eval_point(e->a, point, refine_bits) - expr_eval_point(e->b, point, refine_bits);
        case Expr::Kind::Mul: return expr_eval_point(e->a, point, refine_bits) * expr_eval_point(e->b, point, refine_bits);
        case Expr::Kind::Pow: return expr_eval_point(e->a, point, refine_bits).pow(e->exponent);
        case Expr::Kind::RootOf: {
            Box U;
            bool exact = true;
            for (size_t i = 0; i < e->args.size(); ++i) {
                Interval u = expr_eval_point(e->args[i], point, refine_bits + 32);
                if (!e->guard_args[i].contains(u))
                    throw GuardViolation("expr_eval_point: argument escapes guard");
                exact = exact && u.is_point();
                U.push_back(u);
            }
            if (exact) {
                Poly q = e->rpoly;
                for (size_t i = 0; i < U.size(); ++i) q = q.substitute(i, U[i].lo);
                auto u = q.to_univariate(U.size());
                if (u && !up_is_zero(*u)) {
                    auto rs = isolate_real_roots(*u, e->guard_w.lo, e->guard_w.hi);
                    if (rs.size() == 1) {
                        AlgebraicNumber v = AlgebraicNumber::root_in(*u, rs[0].lo, rs[0].hi);
                        if (v.is_rational()) return Interval(v.rational_value());
                        auto [lo, hi] = v.enclosure(Rational(1, Integer(1) << refine_bits));
                        return Interval(lo, hi);
                    }
                }
            }
            return contract_branch(e->rpoly, U, e->guard_w, refine_bits + 64);
        }
    }
    throw std::logic_error("expr_eval_point: bad node");
}

// ---------------------------------------------------------------------------
// exact evaluation (rationals or a single algebraic extension)
// ---------------------------------------------------------------------------

namespace {

struct ExactVal {
    bool has_theta = false;
    AlgebraicNumber theta;
    UPoly value; // polynomial in theta, reduced mod theta's defining poly

    static ExactVal rat(const Rational& r) {
        ExactVal v;
        v.value = UPoly{r};
        up_trim(v.value);
        return v;
    }
    Rational rational() const { return value.empty() ? Rational(0) : value[0]; }
};

std::optional<ExactVal> exact_rec(const ExprPtr& e, const std::vector<Rational>& pt);

std::optional<ExactVal> exact_binop(const ExprPtr& e, const std::vector<Rational>& pt,
                                    UPoly (*op)(const UPoly&, const UPoly&)) {
    auto x = exact_rec(e->a, pt), y = exact_rec(e->b, pt);
    if (!x || !y) return std::nullopt;
    ExactVal r;
    if (x->has_theta && y->has_theta) {
        if (!(x->theta == y->theta)) return std::nullopt;
        r.has_theta = true;
        r.theta = x->theta;
    } else if (x->has_theta || y->has_theta) {
        r.has_theta = true;
        r.theta = x->has_theta ? x->theta : y->theta;
    }
    r.value = op(x->value, y->value);
    if (r.has_theta) {
        auto [q, rem] = up_divrem(r.value, r.theta.defining());
        r.value = rem;
    }
    return r;
}

std::optional<ExactVal> exact_rec(const ExprPtr& e, const std::vector<Rational>& pt) {
    switch (e->kind) {
        case Expr::Kind::Const: return ExactVal::rat(e->cval);
        case Expr::Kind::Var: {
            if (e->var < 1 || static_cast<size_t>(e->var) > pt.size()) return std::nullopt;
            return ExactVal::rat(pt[static_cast<size_t>(e->var - 1)]);
        }
        case Expr::Kind::Add: return exact_binop(e, pt, up_add);
        case Expr::Kind::Sub: return exact_binop(e, pt, up_sub);
        case Expr::Kind::Mul: return exact_binop(e, pt, up_mul);
        case Expr::Kind::Pow: {
            auto x = exact_rec(e->a, pt);
            if (!x) return std::nullopt;
            ExactVal r = ExactVal::rat(Rational(1));
            r.has_theta = x->has_theta;
            r.theta = x->theta;
            for (unsigned i = 0; i < e->exponent; ++i) {
                r.value = up_mul(r.value, x->value);
                if (r.has_theta) {
                    auto [q, rem] = up_divrem(r.value, r.theta.defining());
                    r.value = rem;
                }
            }
            return r;
        }
        case Expr::Kind::RootOf: {
            std::vector<Rational> cargs;
            for (const auto& arg : e->args) {
                auto v = exact_rec(arg, pt);
                if (!v || v->has_theta) return std::nullopt;
                cargs.push_back(v->rational());
            }
            Poly q = e->rpoly;
            for (size_t i = 0; i < cargs.size(); ++i) q = q.substitute(i, cargs[i]);
            auto u = q.to_univariate(cargs.size());
            if (!u || up_is_zero(*u)) return std::nullopt;
            auto rs = isolate_real_roots(*u, e->guard_w.lo, e->guard_w.hi);
            if (rs.size() != 1) return std::nullopt;
            AlgebraicNumber v = AlgebraicNumber::root_in(*u, rs[0].lo, rs[0].hi);
            if (v.is_rational()) return ExactVal::rat(v.rational_value());
            ExactVal r;
            r.has_theta = true;
            r.theta = v;
            r.value = UPoly{Rational(0), Rational(1)};
            return r;
        }
    }
    return std::nullopt;
}

} // namespace

std::optional<AlgebraicNumber> expr_eval_exact(const ExprPtr& e,
                                               const std::vector<Rational>& point) {
    auto v = exact_rec(e, point);
    if (!v) return std::nullopt;
    if (!v->has_theta) return AlgebraicNumber(v->rational());
    if (v->value.size() <= 1) return AlgebraicNumber(v->rational());
    if (v->value.size() == 2 && v->value[1] == Rational(1) && v->value[0].is_zero())
        return v->theta;
    // value = P(theta): a defining polynomial via res_t(def(t), z - P(t))
    Poly def2 = Poly::from_univariate({"t", "z"}, 0, v->theta.defining());
    Poly zvar = Poly::variable({"t", "z"}, 1);
    Poly pt2 = Poly::from_univariate({"t", "z"}, 0, v->value);
    Poly elim = poly_resultant(def2, zvar - pt2, 0);
    auto W = elim.to_univariate(1);
    if (!W || up_is_zero(*W)) return std::nullopt;
    UPoly Ws = up_squarefree(*W);
    Rational w(1, Integer(1) << 24);
    for (int round = 0; round < 10; ++round, w = w * w) {
        auto [tl, th] = v->theta.enclosure(w);
        Interval T(tl, th), J(Rational(0));
        {
            Interval acc(Rational(0));
            for (size_t i = v->value.size(); i-- > 0;) acc = acc * T + Interval(v->value[i]);
            J = acc;
        }
        Rational pad = max(J.width() * Rational(1, 16), Rational(1, Integer(1) << 200));
        Rational lo = J.lo - pad, hi = J.hi + pad;
        while (up_sign_at(Ws, lo) == 0) lo -= pad;
        while (up_sign_at(Ws, hi) == 0) hi += pad;
        auto rs = isolate_real_roots(Ws, lo, hi);
        if (rs.size() == 1) return AlgebraicNumber::root_in(Ws, rs[0].lo, rs[0].hi);
    }
    return std::nullopt;
}

} // namespace cellparam
