#include "cellparam/cellular_ops.hpp"

#include <sstream>

namespace cellparam {

namespace {

// structural monotonicity lattice in one variable (others held fixed)
enum class Mono { Inc, Dec, Indep, Unknown };

Mono flip(Mono m) {
    if (m == Mono::Inc) return Mono::Dec;
    if (m == Mono::Dec) return Mono::Inc;
    return m;
}

Mono combine_add(Mono a, Mono b) {
    if (a == Mono::Unknown || b == Mono::Unknown) return Mono::Unknown;
    if (a == Mono::Indep) return b;
    if (b == Mono::Indep) return a;
    if (a == b) return a;
    return Mono::Unknown;
}

Mono structural_mono(const ExprPtr& e, int var, const Box& domain) {
    switch (e->kind) {
        case Expr::Kind::Const: return Mono::Indep;
        case Expr::Kind::Var: return e->var == var ? Mono::Inc : Mono::Indep;
        case Expr::Kind::Add:
            return combine_add(structural_mono(e->a, var, domain), structural_mono(e->b, var, domain));
        case Expr::Kind::Sub:
            return combine_add(structural_mono(e->a, var, domain),
                               flip(structural_mono(e->b, var, domain)));
        case Expr::Kind::Mul: {
            Mono ma = structural_mono(e->a, var, domain);
            Mono mb = structural_mono(e->b, var, domain);
            if (ma == Mono::Indep && mb == Mono::Indep) return Mono::Indep;
            // one factor independent with definite sign scales the other
            auto scaled = [&](const ExprPtr& coeff, Mono metric) -> Mono {
                try {
                    int s = expr_range(coeff, domain, 32).definite_sign();
                    if (s > 0) return metric;
                    if (s < 0) return flip(metric);
                } catch (const std::exception&) {
                }
                return Mono::Unknown;
            };
            if (ma == Mono::Indep) return scaled(e->a, mb);
            if (mb == Mono::Indep) return scaled(e->b, ma);
            return Mono::Unknown;
        }
        case Expr::Kind::Pow: {
            Mono mb = structural_mono(e->a, var, domain);
            if (mb == Mono::Indep) return Mono::Indep;
            if (mb == Mono::Unknown) return Mono::Unknown;
            try {
                Interval range = expr_range(e->a, domain, 32);
                if (range.lo.sign() >= 0) return mb; // monotone on nonnegative base
                if (range.hi.sign() <= 0)
                    return e->exponent % 2 == 1 ? mb : flip(mb);
            } catch (const std::exception&) {
            }
            return Mono::Unknown;
        }
        case Expr::Kind::RootOf: return Mono::Unknown;
    }
    return Mono::Unknown;
}

// adaptive check that the range of e over the closure stays inside [lo, hi]
Verdict range_within(const ExprPtr& e, const Box& box, const Rational& lo, const Rational& hi,
                     int depth, const Rational& margin) {
    Interval v;
    try {
        v = expr_range(e, box, 48);
    } catch (const GuardViolation&) {
        if (depth <= 0) return Verdict::Undecided;
        if (box_max_width(box) <= margin) return Verdict::Pass; // boundary shell, documented
        size_t w = 0;
        for (size_t i = 1; i < box.size(); ++i)
            if (box[i].width() > box[w].width()) w = i;
        if (box[w].width().is_zero()) return Verdict::Undecided;
        Rational m = box[w].mid();
        Box b1 = box, b2 = box;
        b1[w] = Interval(box[w].lo, m);
        b2[w] = Interval(m, box[w].hi);
        Verdict v1 = range_within(e, b1, lo, hi, depth - 1, margin);
        if (v1 == Verdict::Fail) return v1;
        Verdict v2 = range_within(e, b2, lo, hi, depth - 1, margin);
        if (v2 == Verdict::Fail) return v2;
        return (v1 == Verdict::Pass && v2 == Verdict::Pass) ? Verdict::Pass : Verdict::Undecided;
    }
    if (lo <= v.lo && v.hi <= hi) return Verdict::Pass;
    if (v.lo > hi || v.hi < lo) return Verdict::Fail;
    if (depth <= 0) return Verdict::Undecided;
    size_t w = 0;
    for (size_t i = 1; i < box.size(); ++i)
        if (box[i].width() > box[w].width()) w = i;
    if (box[w].width().is_zero()) return Verdict::Undecided;
    Rational m = box[w].mid();
    Box b1 = box, b2 = box;
    b1[w] = Interval(box[w].lo, m);
    b2[w] = Interval(m, box[w].hi);
    Verdict v1 = range_within(e, b1, lo, hi, depth - 1, margin);
    if (v1 == Verdict::Fail) return v1;
    Verdict v2 = range_within(e, b2, lo, hi, depth - 1, margin);
    if (v2 == Verdict::Fail) return v2;
    return (v1 == Verdict::Pass && v2 == Verdict::Pass) ? Verdict::Pass : Verdict::Undecided;
}

} // namespace

CellularMap compose_cellular(const CellularMap& outer, const CellularMap& inner,
                             const CertifyOptions& opt) {
    if (outer.length() != inner.length())
        throw std::invalid_argument("compose_cellular: length mismatch");
    Box inner_dom = inner.domain.closure_box();
    // image containment in the outer domain cell
    for (size_t i = 0; i < inner.length(); ++i) {
        if (outer.domain.kinds[i] == CoordKind::FullInterval) {
            Verdict v = range_within(inner.coords[i], inner_dom, Rational(0), Rational(1), 12,
                                     opt.margin);
            if (v == Verdict::Fail)
                throw ImageEscapesDomain("compose_cellular: inner image escapes [0,1] in coordinate " +
                                         std::to_string(i + 1));
        } else {
            if (!(inner.coords[i]->is_const() && inner.coords[i]->cval.is_zero()))
                throw ImageEscapesDomain(
                    "compose_cellular: inner image must be 0 on a singleton coordinate");
        }
    }
    CellularMap out;
    out.domain = inner.domain;
    for (size_t i = 0; i < outer.length(); ++i)
        out.coords.push_back(expr_substitute(outer.coords[i], inner.coords));
    return out;
}

CellularCheck check_cellular(const CellularMap& m, const CertifyOptions& opt) {
    CellularCheck res;
    std::ostringstream report;
    if (m.coords.size() != m.domain.length()) {
        res.verdict = Verdict::Fail;
        res.report = "coordinate count differs from cell length";
        return res;
    }
    for (size_t i = 0; i < m.coords.size(); ++i) {
        if (m.coords[i]->arity() > static_cast<int>(i + 1)) {
            res.verdict = Verdict::Fail;
            report << "coordinate " << (i + 1) << " uses variable " << m.coords[i]->arity()
                   << " (triangularity violated)";
            res.report = report.str();
            return res;
        }
    }
    Box dom = m.domain.closure_box();
    for (size_t i = 0; i < m.coords.size(); ++i) {
        if (m.domain.kinds[i] != CoordKind::FullInterval) continue;
        Box sub(dom.begin(), dom.begin() + static_cast<long>(i) + 1);
        Mono sm = structural_mono(m.coords[i], static_cast<int>(i) + 1, sub);
        if (sm == Mono::Inc) continue;
        if (sm == Mono::Dec || sm == Mono::Indep) {
            res.verdict = Verdict::Fail;
            report << "coordinate " << (i + 1)
                   << (sm == Mono::Dec ? " is decreasing" : " does not depend on its variable");
            res.report = report.str();
            return res;
        }
        BasicCell prefix{std::vector<CoordKind>(m.domain.kinds.begin(),
                                                m.domain.kinds.begin() + static_cast<long>(i) + 1)};
        Verdict v = certify_partial_positive(m.coords[i], prefix, i, opt);
        if (v != Verdict::Pass) {
            res.verdict = v;
            report << "coordinate " << (i + 1) << ": derivative positivity "
                   << (v == Verdict::Fail ? "refuted" : "undecided");
            res.report = report.str();
            return res;
        }
    }
    // image within the closed unit box
    for (size_t i = 0; i < m.coords.size(); ++i) {
        Box sub(dom.begin(), dom.begin() + static_cast<long>(i) + 1);
        Verdict v = range_within(m.coords[i], sub, Rational(0), Rational(1), 12, opt.margin);
        if (v != Verdict::Pass) {
            res.verdict = v;
            report << "coordinate " << (i + 1) << ": image bound "
                   << (v == Verdict::Fail ? "violated" : "undecided");
            res.report = report.str();
            return res;
        }
    }
    res.verdict = Verdict::Pass;
    return res;
}

std::vector<CellularMap> linear_subdivision(const CellularMap& m, unsigned K) {
    if (K == 0) throw std::invalid_argument("linear_subdivision: K must be >= 1");
    std::vector<size_t> full_dims;
    for (size_t i = 0; i < m.domain.length(); ++i)
        if (m.domain.kinds[i] == CoordKind::FullInterval) full_dims.push_back(i);
    std::vector<CellularMap> out;
    std::vector<unsigned> grid(full_dims.size(), 0);
    while (true) {
        std::vector<ExprPtr> repl;
        repl.reserve(m.domain.length());
        for (size_t i = 0; i < m.domain.length(); ++i) repl.push_back(Expr::variable(static_cast<int>(i) + 1));
        for (size_t g = 0; g < full_dims.size(); ++g) {
            size_t i = full_dims[g];
            // x_i -> (j + x_i)/K
            repl[i] = Expr::mul(Expr::constant(Rational(1, static_cast<int>(K))),
                                Expr::add(Expr::constant(Rational(static_cast<int>(grid[g]))),
                                          Expr::variable(static_cast<int>(i) + 1)));
        }
        CellularMap piece;
        piece.domain = m.domain;
        for (const auto& c : m.coords) piece.coords.push_back(expr_substitute(c, repl));
        out.push_back(std::move(piece));
        // advance the grid counter
        size_t g = 0;
        while (g < grid.size()) {
            if (++grid[g] < K) break;
            grid[g] = 0;
            ++g;
        }
        if (g == grid.size()) break;
        if (grid.empty()) break;
    }
    return out;
}

namespace {

// refinable enclosure of a target value
struct Target {
    bool rational;
    Rational rval;
    AlgebraicNumber aval;

    Interval enclose(const Rational& w) const {
        if (rational) return Interval(rval);
        auto [lo, hi] = aval.enclosure(w);
        return Interval(lo, hi);
    }
};

std::optional<Box> invert_impl(const CellularMap& m, const std::vector<Target>& y,
                               const Rational& tol) {
    const size_t n = m.length();
    if (y.size() != n) throw std::invalid_argument("invert_point: dimension mismatch");

    for (unsigned wbits : {32u, 64u, 128u}) {
        Rational tw(1, Integer(1) << wbits);
        Box partial;
        bool restart = false;
        for (size_t i = 0; i < n && !restart; ++i) {
            if (m.domain.kinds[i] == CoordKind::Singleton) {
                partial.push_back(Interval(Rational(0)));
                continue;
            }
            Rational target_w = min(tol, tw) * Rational(1, 16);
            Interval ty = y[i].enclose(target_w);
            auto eval_at = [&](const Interval& t) {
                Box b = partial;
                b.push_back(t);
                return expr_range(m.coords[i], b, wbits + 32);
            };
            Interval e0 = eval_at(Interval(Rational(0)));
            Interval e1 = eval_at(Interval(Rational(1)));
            if (e0.lo > ty.hi || e1.hi < ty.lo) return std::nullopt; // outside the image
            Rational a(0), b(1);
            int stall = 0;
            while (b - a > min(tol, tw) && stall < 3) {
                Rational mid = (a + b) * Rational(1, 2);
                Interval em = eval_at(Interval(mid));
                if (em.hi <= ty.lo) a = mid;
                else if (em.lo >= ty.hi) b = mid;
                else {
                    // try nudged probes before conceding the step
                    bool moved = false;
                    for (int k = 1; k <= 3 && !moved; ++k) {
                        Rational off = (b - a) * Rational(k, 16);
                        for (Rational cand : {mid + off, mid - off}) {
                            if (cand <= a || cand >= b) continue;
                            Interval ec = eval_at(Interval(cand));
                            if (ec.hi <= ty.lo) { a = cand; moved = true; break; }
                            if (ec.lo >= ty.hi) { b = cand; moved = true; break; }
                        }
                    }
                    if (!moved) ++stall;
                }
            }
            if (b - a > tol) {
                restart = true; // tighten the working precision and retry
                break;
            }
            partial.push_back(Interval(a, b));
        }
        if (!restart) return partial;
    }
    return std::nullopt;
}

} // namespace

std::optional<Box> invert_point(const CellularMap& m, const std::vector<Rational>& y,
                                const Rational& tol) {
    std::vector<Target> t;
    for (const auto& v : y) t.push_back(Target{true, v, AlgebraicNumber()});
    return invert_impl(m, t, tol);
}

std::optional<Box> invert_point_alg(const CellularMap& m, const std::vector<AlgebraicNumber>& y,
                                    const Rational& tol) {
    std::vector<Target> t;
    for (const auto& v : y) {
        if (v.is_rational()) t.push_back(Target{true, v.rational_value(), AlgebraicNumber()});
        else t.push_back(Target{false, Rational(0), v});
    }
    return invert_impl(m, t, tol);
}

} // namespace cellparam
