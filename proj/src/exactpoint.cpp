#include "cellparam/exactpoint.hpp"

#include <map>

namespace cellparam {

namespace {

// Scalar in Q or Q(theta) for a single square-free extension; value stored
// as a polynomial in theta reduced mod the defining polynomial.
struct AScalar {
    bool has_theta = false;
    AlgebraicNumber theta;
    UPoly v;

    static AScalar rat(const Rational& r) {
        AScalar s;
        s.v = UPoly{r};
        up_trim(s.v);
        return s;
    }
    bool is_rat() const { return !has_theta || v.size() <= 1; }
    Rational as_rat() const { return v.empty() ? Rational(0) : v[0]; }
};

struct ExtensionMismatch {};

const UPoly* merge_theta(AScalar& r, const AScalar& x, const AScalar& y) {
    if (x.has_theta && y.has_theta) {
        if (!(x.theta == y.theta)) throw ExtensionMismatch{};
        r.has_theta = true;
        r.theta = x.theta;
    } else if (x.has_theta || y.has_theta) {
        r.has_theta = true;
        r.theta = x.has_theta ? x.theta : y.theta;
    }
    return r.has_theta ? &r.theta.defining() : nullptr;
}

AScalar a_add(const AScalar& x, const AScalar& y) {
    AScalar r;
    merge_theta(r, x, y);
    r.v = up_add(x.v, y.v);
    return r;
}
AScalar a_sub(const AScalar& x, const AScalar& y) {
    AScalar r;
    merge_theta(r, x, y);
    r.v = up_sub(x.v, y.v);
    return r;
}
AScalar a_mul(const AScalar& x, const AScalar& y) {
    AScalar r;
    const UPoly* m = merge_theta(r, x, y);
    r.v = up_mul(x.v, y.v);
    if (m) {
        auto [q, rem] = up_divrem(r.v, *m);
        r.v = rem;
    }
    return r;
}

// inverse of u mod m via extended Euclid; m square-free, u(theta) != 0
std::optional<UPoly> inv_mod(const UPoly& u, const UPoly& m) {
    // extended gcd over Q[t]
    UPoly r0 = m, r1 = u;
    UPoly s0{}, s1{Rational(1)}; // coefficients of u
    while (!r1.empty()) {
        auto [q, r2] = up_divrem(r0, r1);
        UPoly s2 = up_sub(s0, up_mul(q, s1));
        r0 = std::move(r1);
        r1 = std::move(r2);
        s0 = std::move(s1);
        s1 = std::move(s2);
    }
    if (up_degree(r0) != 0) return std::nullopt; // gcd nontrivial
    return up_scale(s0, r0[0].reciprocal());
}

AScalar a_div(const AScalar& x, const AScalar& y) {
    if (y.is_rat()) {
        Rational c = y.as_rat();
        if (c.is_zero()) throw std::domain_error("exact point jet: division by zero");
        AScalar r = x;
        r.v = up_scale(r.v, c.reciprocal());
        return r;
    }
    AScalar r;
    const UPoly* m = merge_theta(r, x, y);
    auto inv = inv_mod(y.v, *m);
    if (!inv) {
        // split the square-free modulus: theta is a root of exactly one factor
        UPoly g = up_gcd(y.v, *m);
        auto [h, rem] = up_divrem(*m, g);
        if (!rem.empty() || up_degree(g) < 1) throw ExtensionMismatch{};
        if (r.theta.sign_of_upoly_at(g) == 0) throw std::domain_error("exact point jet: zero divisor");
        UPoly hm = up_monic(h);
        AlgebraicNumber nt = [&] {
            auto [lo, hi] = r.theta.enclosure();
            IsolatingInterval cur{lo, hi, hm, true};
            // the enclosure of theta may need refinement to isolate within hm
            while (isolate_real_roots(hm, cur.lo, cur.hi).size() != 1) {
                auto [l2, h2] = r.theta.enclosure((cur.hi - cur.lo) * Rational(1, 16));
                cur.lo = l2;
                cur.hi = h2;
            }
            return AlgebraicNumber::root_in(hm, cur.lo, cur.hi);
        }();
        r.theta = nt;
        auto [q1, v1] = up_divrem(y.v, hm);
        inv = inv_mod(v1, hm);
        if (!inv) throw ExtensionMismatch{};
        auto [q2, x2] = up_divrem(x.v, hm);
        r.v = up_mul(x2, *inv);
        auto [q3, v3] = up_divrem(r.v, hm);
        r.v = v3;
        return r;
    }
    r.v = up_mul(x.v, *inv);
    auto [q, rem] = up_divrem(r.v, *m);
    r.v = rem;
    return r;
}

// dense exact jet: coefficient per multi-index
struct AJet {
    int arity, order;
    std::vector<AScalar> c;

    AJet(int a, int o)
        : arity(a), order(o),
          c(MultiIndexTable::get(a, o).size(), AScalar::rat(Rational(0))) {}
    const MultiIndexTable& table() const { return MultiIndexTable::get(arity, order); }
};

AJet aj_add(const AJet& x, const AJet& y) {
    AJet r(x.arity, x.order);
    for (size_t i = 0; i < r.c.size(); ++i) r.c[i] = a_add(x.c[i], y.c[i]);
    return r;
}
AJet aj_sub(const AJet& x, const AJet& y) {
    AJet r(x.arity, x.order);
    for (size_t i = 0; i < r.c.size(); ++i) r.c[i] = a_sub(x.c[i], y.c[i]);
    return r;
}
AJet aj_mul(const AJet& x, const AJet& y) {
    AJet r(x.arity, x.order);
    const auto& idx = r.table().indices();
    for (size_t i = 0; i < idx.size(); ++i) {
        if (x.c[i].v.empty()) continue;
        for (size_t j = 0; j < idx.size(); ++j) {
            if (y.c[j].v.empty()) continue;
            MultiIndex sum(idx[i].size());
            int total = 0;
            for (size_t k = 0; k < sum.size(); ++k) {
                sum[k] = idx[i][k] + idx[j][k];
                total += static_cast<int>(sum[k]);
            }
            if (total > r.order) continue;
            size_t pos = r.table().position(sum);
            r.c[pos] = a_add(r.c[pos], a_mul(x.c[i], y.c[j]));
        }
    }
    return r;
}

AJet aj_eval_poly(const Poly& p, const std::vector<AJet>& varjets, size_t var, int arity, int order) {
    auto coeffs = p.coefficients_wrt(var);
    AJet acc(arity, order);
    bool last = (var + 1 == p.arity());
    for (size_t k = coeffs.size(); k-- > 0;) {
        acc = aj_mul(acc, varjets[var]);
        if (last) {
            Rational cc = coeffs[k].is_zero() ? Rational(0) : coeffs[k].constant_value();
            if (!cc.is_zero()) acc.c[0] = a_add(acc.c[0], AScalar::rat(cc));
        } else {
            acc = aj_add(acc, aj_eval_poly(coeffs[k], varjets, var + 1, arity, order));
        }
    }
    return acc;
}

AJet jet_exact_rec(const ExprPtr& e, const std::vector<Rational>& pt, int r) {
    const int arity = static_cast<int>(pt.size());
    switch (e->kind) {
        case Expr::Kind::Const: {
            AJet j(arity, r);
            j.c[0] = AScalar::rat(e->cval);
            return j;
        }
        case Expr::Kind::Var: {
            AJet j(arity, r);
            j.c[0] = AScalar::rat(pt[static_cast<size_t>(e->var - 1)]);
            if (r >= 1) {
                MultiIndex ei(static_cast<size_t>(arity), 0);
                ei[static_cast<size_t>(e->var - 1)] = 1;
                j.c[j.table().position(ei)] = AScalar::rat(Rational(1));
            }
            return j;
        }
        case Expr::Kind::Add: return aj_add(jet_exact_rec(e->a, pt, r), jet_exact_rec(e->b, pt, r));
        case Expr::Kind::Sub: return aj_sub(jet_exact_rec(e->a, pt, r), jet_exact_rec(e->b, pt, r));
        case Expr::Kind::Mul: return aj_mul(jet_exact_rec(e->a, pt, r), jet_exact_rec(e->b, pt, r));
        case Expr::Kind::Pow: {
            AJet base = jet_exact_rec(e->a, pt, r);
            AJet acc(arity, r);
            acc.c[0] = AScalar::rat(Rational(1));
            for (unsigned i = 0; i < e->exponent; ++i) acc = aj_mul(acc, base);
            return acc;
        }
        case Expr::Kind::RootOf: {
            std::vector<AJet> argjets;
            for (const auto& arg : e->args) argjets.push_back(jet_exact_rec(arg, pt, r));
            // order 0: all argument values must be rational for an exact
            // defining polynomial of the branch value
            std::vector<Rational> vals;
            for (const auto& aj : argjets) {
                if (!aj.c[0].is_rat()) throw ExtensionMismatch{};
                vals.push_back(aj.c[0].as_rat());
            }
            Poly q = e->rpoly;
            for (size_t i = 0; i < vals.size(); ++i) q = q.substitute(i, vals[i]);
            auto u = q.to_univariate(vals.size());
            if (!u || up_is_zero(*u)) throw ExtensionMismatch{};
            auto rs = isolate_real_roots(*u, e->guard_w.lo, e->guard_w.hi);
            if (rs.size() != 1) throw ExtensionMismatch{};
            AlgebraicNumber w0 = AlgebraicNumber::root_in(*u, rs[0].lo, rs[0].hi);

            AJet Y(arity, r);
            if (w0.is_rational()) {
                Y.c[0] = AScalar::rat(w0.rational_value());
            } else {
                Y.c[0].has_theta = true;
                Y.c[0].theta = w0;
                Y.c[0].v = UPoly{Rational(0), Rational(1)};
            }
            if (r == 0) return Y;

            // divisor dp/dw at the point
            Poly pw = e->rpoly.derivative(vals.size());
            std::vector<AJet> varjets = argjets;
            // level-by-level implicit recurrence with exact scalars
            for (int level = 1; level <= r; ++level) {
                varjets.push_back(Y);
                AJet G = aj_eval_poly(e->rpoly, varjets, 0, arity, r);
                varjets.pop_back();
                // D = dp/dw at order 0
                std::vector<AJet> vj2 = argjets;
                vj2.push_back(Y);
                AJet Dj = aj_eval_poly(pw, vj2, 0, arity, r);
                const AScalar& D = Dj.c[0];
                const auto& idx = Y.table().indices();
                for (size_t i = 0; i < idx.size(); ++i) {
                    int total = 0;
                    for (unsigned k : idx[i]) total += static_cast<int>(k);
                    if (total != level) continue;
                    AScalar num = G.c[i];
                    num.v = up_scale(num.v, Rational(-1));
                    Y.c[i] = a_div(num, D);
                }
            }
            return Y;
        }
    }
    throw std::logic_error("exact_point_jet: bad node");
}

} // namespace

std::optional<std::vector<AlgebraicNumber>> exact_point_jet(const ExprPtr& e,
                                                            const std::vector<Rational>& point,
                                                            int r) {
    try {
        AJet j = jet_exact_rec(e, point, r);
        std::vector<AlgebraicNumber> out;
        out.reserve(j.c.size());
        for (const auto& s : j.c) {
            if (s.is_rat()) {
                out.push_back(AlgebraicNumber(s.as_rat()));
                continue;
            }
            // express P(theta) as an algebraic number via the Expr machinery
            ExprPtr theta_e = Expr::constant(s.theta);
            ExprPtr acc = Expr::constant(Rational(0));
            for (size_t k = s.v.size(); k-- > 0;)
                acc = Expr::add(Expr::mul(acc, theta_e), Expr::constant(s.v[k]));
            auto v = expr_eval_exact(acc, {});
            if (!v) return std::nullopt;
            out.push_back(*v);
        }
        return out;
    } catch (const ExtensionMismatch&) {
        return std::nullopt;
    } catch (const std::domain_error&) {
        return std::nullopt;
    }
}

} // namespace cellparam
