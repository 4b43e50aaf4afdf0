#include "cellparam/jets.hpp"

#include <algorithm>
#include <optional>
#include <functional>
#include <memory>
#include <mutex>

namespace cellparam {

// ---------------------------------------------------------------------------
// multi-index tables
// ---------------------------------------------------------------------------

MultiIndexTable::MultiIndexTable(int arity, int order) {
    MultiIndex cur(static_cast<size_t>(arity), 0);
    // enumerate all indices with |a| <= order, then sort deglex
    std::vector<MultiIndex> all;
    std::function<void(size_t, int)> rec = [&](size_t pos, int remaining) {
        if (pos == cur.size()) {
            all.push_back(cur);
            return;
        }
        for (int k = 0; k <= remaining; ++k) {
            cur[pos] = static_cast<unsigned>(k);
            rec(pos + 1, remaining - k);
        }
        cur[pos] = 0;
    };
    if (arity == 0) all.push_back({});
    else rec(0, order);
    std::sort(all.begin(), all.end(), deglex_less);
    indices_ = std::move(all);
    for (size_t i = 0; i < indices_.size(); ++i) lookup_[indices_[i]] = i;
}

const MultiIndexTable& MultiIndexTable::get(int arity, int order) {
    static std::mutex mu;
    static std::map<std::pair<int, int>, std::unique_ptr<MultiIndexTable>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(arity, order);
    auto it = cache.find(key);
    if (it == cache.end()) {
        it = cache.emplace(key, std::unique_ptr<MultiIndexTable>(new MultiIndexTable(arity, order)))
                 .first;
    }
    return *it->second;
}

size_t MultiIndexTable::position(const MultiIndex& a) const {
    auto it = lookup_.find(a);
    if (it == lookup_.end()) throw std::out_of_range("MultiIndexTable::position");
    return it->second;
}

// ---------------------------------------------------------------------------
// jet arithmetic
// ---------------------------------------------------------------------------

JetEnclosure::JetEnclosure(int arity, int order)
    : arity_(arity), order_(order),
      c_(MultiIndexTable::get(arity, order).size(), Interval(Rational(0))) {}

const Interval& JetEnclosure::coeff(const MultiIndex& a) const { return c_[table().position(a)]; }
Interval& JetEnclosure::coeff(const MultiIndex& a) { return c_[table().position(a)]; }

JetEnclosure JetEnclosure::constant(int arity, int order, const Interval& v) {
    JetEnclosure j(arity, order);
    j.c_[0] = v; // index 0 is the zero multi-index (deglex minimum)
    return j;
}

JetEnclosure JetEnclosure::variable(int arity, int order, size_t var, const Interval& range) {
    JetEnclosure j(arity, order);
    j.c_[0] = range;
    if (order >= 1) {
        MultiIndex e(static_cast<size_t>(arity), 0);
        e[var] = 1;
        j.coeff(e) = Interval(Rational(1));
    }
    return j;
}

JetEnclosure JetEnclosure::operator+(const JetEnclosure& o) const {
    JetEnclosure r = *this;
    for (size_t i = 0; i < c_.size(); ++i) r.c_[i] = c_[i] + o.c_[i];
    return r;
}

JetEnclosure JetEnclosure::operator-(const JetEnclosure& o) const {
    JetEnclosure r = *this;
    for (size_t i = 0; i < c_.size(); ++i) r.c_[i] = c_[i] - o.c_[i];
    return r;
}

JetEnclosure JetEnclosure::operator*(const JetEnclosure& o) const {
    // normalized Leibniz: (fg)[a] = sum_{b <= a} f[b] g[a-b]
    const auto& tab = table();
    JetEnclosure r(arity_, order_);
    const auto& idx = tab.indices();
    for (size_t i = 0; i < idx.size(); ++i) {
        if (c_[i].lo.is_zero() && c_[i].hi.is_zero()) continue;
        for (size_t j = 0; j < idx.size(); ++j) {
            if (o.c_[j].lo.is_zero() && o.c_[j].hi.is_zero()) continue;
            MultiIndex sum(idx[i].size());
            int total = 0;
            for (size_t k = 0; k < sum.size(); ++k) {
                sum[k] = idx[i][k] + idx[j][k];
                total += static_cast<int>(sum[k]);
            }
            if (total > order_) continue;
            size_t pos = tab.position(sum);
            r.c_[pos] = r.c_[pos] + c_[i] * o.c_[j];
        }
    }
    return r;
}

JetEnclosure JetEnclosure::pow(unsigned e) const {
    JetEnclosure r = JetEnclosure::constant(arity_, order_, Interval(Rational(1)));
    JetEnclosure base = *this;
    while (e) {
        if (e & 1u) r = r * base;
        if (e >>= 1u) base = base * base;
    }
    return r;
}

void JetEnclosure::round(const JetOptions& opt) {
    for (auto& iv : c_) iv = iv.round_out(opt.round_bits, opt.round_threshold);
}

// ---------------------------------------------------------------------------
// branch range contraction (inclusion-monotone)
// ---------------------------------------------------------------------------

namespace {

// Hull of the kept (non-excluded) dyadic cells of Y. Exclusion of a cell is
// inclusion-monotone in arg_ranges, cell boundaries are deterministic, and
// a width floor only makes finer runs keep subsets of coarser ones, so the
// result nests under box refinement.
void exclusion_hull(const Poly& rpoly, const Box& arg_ranges, const Interval& Y,
                    const Rational& width_floor, int depth, std::optional<Interval>& acc) {
    Box b = arg_ranges;
    b.push_back(Y);
    if (!interval_eval(rpoly, b).contains_zero()) return; // excluded
    if (depth <= 0 || Y.width() <= width_floor) {
        acc = acc ? Interval::hull(*acc, Y) : Y;
        return;
    }
    Rational m = Y.mid();
    exclusion_hull(rpoly, arg_ranges, Interval(Y.lo, m), width_floor, depth - 1, acc);
    exclusion_hull(rpoly, arg_ranges, Interval(m, Y.hi), width_floor, depth - 1, acc);
}

} // namespace

Interval branch_range_monotone(const Poly& rpoly, const Box& arg_ranges,
                               const Interval& guard_w, int depth) {
    const size_t wvar = arg_ranges.size();
    Rational floor_w = max(box_max_width(arg_ranges) * Rational(1, 4),
                           guard_w.width() * Rational(1, Integer(1) << std::min(depth, 48)));
    std::optional<Interval> kept;
    exclusion_hull(rpoly, arg_ranges, guard_w, floor_w, 8, kept);
    Interval Y = kept ? *kept : guard_w;
    // one fixed-expansion-point Newton step (the point is the guard center,
    // shared across refinements, so the step stays monotone)
    Poly pw = rpoly.derivative(wvar);
    Box full = arg_ranges;
    full.push_back(guard_w);
    Interval d = interval_eval(pw, full);
    if (!d.contains_zero()) {
        Rational y0 = guard_w.mid();
        Box at0 = arg_ranges;
        at0.push_back(Interval(y0));
        Interval num = interval_eval(rpoly, at0);
        Interval n = Interval(y0) - num / d;
        if (n.intersects(Y)) Y = n.intersect(Y);
    }
    return Y;
}

// ---------------------------------------------------------------------------
// implicit branch jets
// ---------------------------------------------------------------------------

namespace {

// Horner evaluation of a polynomial over jets, one variable at a time.
JetEnclosure jet_eval_poly(const Poly& p, const std::vector<JetEnclosure>& varjets, size_t var,
                           int arity, int order) {
    if (var + 1 == p.arity()) {
        auto coeffs = p.coefficients_wrt(var);
        JetEnclosure acc = JetEnclosure::constant(arity, order, Interval(Rational(0)));
        for (size_t k = coeffs.size(); k-- > 0;) {
            acc = acc * varjets[var];
            Rational c = coeffs[k].is_zero() ? Rational(0) : coeffs[k].constant_value();
            if (!c.is_zero()) {
                JetEnclosure cc = JetEnclosure::constant(arity, order, Interval(c));
                acc = acc + cc;
            }
        }
        return acc;
    }
    auto coeffs = p.coefficients_wrt(var);
    JetEnclosure acc = JetEnclosure::constant(arity, order, Interval(Rational(0)));
    for (size_t k = coeffs.size(); k-- > 0;) {
        acc = acc * varjets[var];
        acc = acc + jet_eval_poly(coeffs[k], varjets, var + 1, arity, order);
    }
    return acc;
}

JetEnclosure jet_eval_poly_full(const Poly& p, const std::vector<JetEnclosure>& varjets,
                                int arity, int order) {
    if (p.arity() == 0 || p.is_zero())
        return JetEnclosure::constant(arity, order, Interval(p.is_zero() ? Rational(0) : p.constant_value()));
    return jet_eval_poly(p, varjets, 0, arity, order);
}

} // namespace

JetEnclosure implicit_branch_jet(const Poly& rpoly, const Box& guard_args,
                                 const Interval& guard_w,
                                 const std::vector<JetEnclosure>& arg_jets, int r,
                                 const JetOptions& opt) {
    const size_t m = arg_jets.size();
    if (rpoly.arity() != m + 1)
        throw std::invalid_argument("implicit_branch_jet: arity mismatch");
    const int arity = m ? arg_jets[0].arity() : 0;

    Box U0;
    for (size_t i = 0; i < m; ++i) {
        const Interval& u = arg_jets[i].coeffs()[0];
        if (!guard_args[i].contains(u))
            throw GuardViolation("implicit_branch_jet: argument range escapes guard");
        U0.push_back(u);
    }
    Interval Y0 = branch_range_monotone(rpoly, U0, guard_w, opt.branch_depth);

    // divisor: dp/dw over the contracted ranges
    Poly pw = rpoly.derivative(m);
    Box db = U0;
    db.push_back(Y0);
    Interval D = interval_eval(pw, db);
    if (D.contains_zero())
        throw GuardViolation("implicit_branch_jet: derivative enclosure contains zero");

    JetEnclosure Y = JetEnclosure::constant(arity, r, Y0);
    if (r == 0) return Y;

    // level-by-level: coefficients of total degree k depend only on lower
    // levels of Y, so each level is solved from one composite jet
    std::vector<JetEnclosure> varjets = arg_jets;
    for (int level = 1; level <= r; ++level) {
        varjets.push_back(Y);
        JetEnclosure G = jet_eval_poly_full(rpoly, varjets, arity, r);
        varjets.pop_back();
        const auto& tab = Y.table();
        for (size_t i = 0; i < tab.indices().size(); ++i) {
            const MultiIndex& a = tab.indices()[i];
            int total = 0;
            for (unsigned k : a) total += static_cast<int>(k);
            if (total != level) continue;
            Y.coeffs()[i] = -(G.coeffs()[i] / D);
        }
        Y.round(opt);
    }
    return Y;
}

// ---------------------------------------------------------------------------
// jet evaluation over expressions
// ---------------------------------------------------------------------------

namespace {

JetEnclosure jet_rec(const ExprPtr& e, const Box& box, int r, const JetOptions& opt,
                     std::map<const Expr*, JetEnclosure>& memo) {
    auto found = memo.find(e.get());
    if (found != memo.end()) return found->second;

    const int arity = static_cast<int>(box.size());
    JetEnclosure out(arity, r);
    switch (e->kind) {
        case Expr::Kind::Const:
            out = JetEnclosure::constant(arity, r, Interval(e->cval));
            break;
        case Expr::Kind::Var: {
            if (e->var < 1 || static_cast<size_t>(e->var) > box.size())
                throw std::invalid_argument("jet_eval: box smaller than expression arity");
            out = JetEnclosure::variable(arity, r, static_cast<size_t>(e->var - 1),
                                         box[static_cast<size_t>(e->var - 1)]);
            break;
        }
        case Expr::Kind::Add:
            out = jet_rec(e->a, box, r, opt, memo) + jet_rec(e->b, box, r, opt, memo);
            break;
        case Expr::Kind::Sub:
            out = jet_rec(e->a, box, r, opt, memo) - jet_rec(e->b, box, r, opt, memo);
            break;
        case Expr::Kind::Mul:
            out = jet_rec(e->a, box, r, opt, memo) * jet_rec(e->b, box, r, opt, memo);
            break;
        case Expr::Kind::Pow:
            out = jet_rec(e->a, box, r, opt, memo).pow(e->exponent);
            break;
        case Expr::Kind::RootOf: {
            std::vector<JetEnclosure> argjets;
            argjets.reserve(e->args.size());
            for (const auto& arg : e->args) argjets.push_back(jet_rec(arg, box, r, opt, memo));
            out = implicit_branch_jet(e->rpoly, e->guard_args, e->guard_w, argjets, r, opt);
            break;
        }
    }
    out.round(opt);
    memo.emplace(e.get(), out);
    return out;
}

} // namespace

JetEnclosure jet_eval(const ExprPtr& e, const Box& box, int r, const JetOptions& opt) {
    if (r < 0) throw std::invalid_argument("jet_eval: negative order");
    if (r > opt.order_cap)
        throw OrderTooLarge("jet_eval: order " + std::to_string(r) + " beyond cap " +
                            std::to_string(opt.order_cap));
    std::map<const Expr*, JetEnclosure> memo;
    JetEnclosure j = jet_rec(e, box, r, opt, memo);
    j.set_base_box(box);
    return j;
}

} // namespace cellparam
