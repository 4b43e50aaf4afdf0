#include "cellparam/certify.hpp"
#include "cellparam/exactpoint.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <deque>
#include <queue>
#include <sstream>

namespace cellparam {

std::string verdict_str(Verdict v) {
    switch (v) {
        case Verdict::Pass: return "pass";
        case Verdict::Fail: return "fail";
        case Verdict::Undecided: return "undecided";
    }
    return "?";
}

Rational Certificate::norm_upper() const {
    Rational u(0);
    for (const auto& [a, b] : bounds) u = max(u, b.hi);
    return u;
}

Rational Certificate::norm_lower() const {
    Rational l(0);
    for (const auto& [a, b] : bounds) l = max(l, b.lo);
    return l;
}

SExpr Certificate::to_sexpr() const {
    std::vector<SExpr> items{SExpr::make_atom("certificate")};
    items.push_back(SExpr::make_list({SExpr::make_atom("subject"), SExpr::make_atom(subject.empty() ? "-" : subject)}));
    items.push_back(SExpr::make_list({SExpr::make_atom("r"), SExpr::make_atom(std::to_string(r))}));
    items.push_back(SExpr::make_list({SExpr::make_atom("threshold"), SExpr::make_atom(threshold.str())}));
    items.push_back(SExpr::make_list({SExpr::make_atom("verdict"), SExpr::make_atom(verdict_str(verdict))}));
    for (const auto& [a, b] : bounds) {
        std::vector<SExpr> bi{SExpr::make_atom("bound")};
        std::string idx;
        for (size_t i = 0; i < a.size(); ++i) idx += (i ? "," : "") + std::to_string(a[i]);
        bi.push_back(SExpr::make_atom(idx.empty() ? "()" : idx));
        bi.push_back(SExpr::make_atom(b.lo.str()));
        bi.push_back(SExpr::make_atom(b.hi.str()));
        items.push_back(SExpr::make_list(std::move(bi)));
    }
    if (verdict == Verdict::Fail) {
        std::vector<SExpr> w{SExpr::make_atom("witness")};
        std::string idx;
        for (size_t i = 0; i < witness_index.size(); ++i) idx += (i ? "," : "") + std::to_string(witness_index[i]);
        w.push_back(SExpr::make_atom(idx.empty() ? "()" : idx));
        w.push_back(SExpr::make_atom(box_str(witness_box)));
        w.push_back(SExpr::make_atom(witness_enclosure.str()));
        items.push_back(SExpr::make_list(std::move(w)));
    }
    items.push_back(SExpr::make_list({SExpr::make_atom("depth"), SExpr::make_atom(std::to_string(max_depth_used))}));
    items.push_back(SExpr::make_list({SExpr::make_atom("boxes"), SExpr::make_atom(std::to_string(boxes_processed))}));
    items.push_back(SExpr::make_list({SExpr::make_atom("margin-shell"), SExpr::make_atom(margin_shell_clipped ? "clipped" : "none")}));
    if (!note.empty()) items.push_back(SExpr::make_list({SExpr::make_atom("note"), SExpr::make_atom(note)}));
    return SExpr::make_list(std::move(items));
}

std::uint64_t Certificate::digest() const { return fnv1a64(to_sexpr().str()); }

namespace {

struct WorkItem {
    Box box;
    int depth;
};

bool is_point_box(const Box& b) {
    for (const auto& iv : b)
        if (!iv.is_point()) return false;
    return true;
}

size_t widest_dim(const Box& b) {
    size_t w = 0;
    for (size_t i = 1; i < b.size(); ++i)
        if (b[i].width() > b[w].width()) w = i;
    return w;
}

bool touches_boundary(const Box& b, const Box& base) {
    for (size_t i = 0; i < b.size(); ++i)
        if (b[i].lo == base[i].lo || b[i].hi == base[i].hi) return true;
    return false;
}

// merge a per-index upper/lower pair into the aggregate table
void merge_bound(std::vector<std::pair<MultiIndex, Interval>>& bounds, const MultiIndex& a,
                 const Rational& lo, const Rational& hi) {
    for (auto& [idx, iv] : bounds) {
        if (idx == a) {
            iv = Interval(max(iv.lo, lo), max(iv.hi, hi));
            return;
        }
    }
    bounds.emplace_back(a, Interval(lo, hi));
}

} // namespace

Certificate certify_norm(const ExprPtr& e, const BasicCell& cell, int r,
                         const CertifyOptions& opt) {
    auto t0 = std::chrono::steady_clock::now();
    Certificate cert;
    cert.subject = e->str();
    cert.r = r;
    cert.threshold = opt.threshold;

    const Box base = cell.closure_box();
    const Rational& thr = opt.threshold;
    const int eval_order = std::min(r + 1, opt.jets.order_cap);

    std::deque<WorkItem> work{{base, 0}};
    Verdict verdict = Verdict::Pass;

    while (!work.empty()) {
        if (cert.boxes_processed > opt.box_budget) {
            verdict = Verdict::Undecided;
            cert.note = "box budget exhausted";
            break;
        }
        WorkItem item = std::move(work.front());
        work.pop_front();
        ++cert.boxes_processed;
        cert.max_depth_used = std::max(cert.max_depth_used, item.depth);

        JetEnclosure jet(static_cast<int>(base.size()), eval_order);
        bool have_jet = false;
        try {
            jet = jet_eval(e, item.box, eval_order, opt.jets);
            have_jet = true;
        } catch (const GuardViolation&) {
            if (box_max_width(item.box) <= opt.margin && touches_boundary(item.box, base)) {
                cert.margin_shell_clipped = true;
                continue;
            }
            if (item.depth >= opt.max_depth) {
                verdict = Verdict::Undecided;
                cert.note = "guard violation persisted to depth cap";
                break;
            }
        }
        if (!have_jet) {
            size_t d = widest_dim(item.box);
            if (item.box[d].width().is_zero()) {
                verdict = Verdict::Undecided;
                cert.note = "guard violation on a point box";
                break;
            }
            Rational m = item.box[d].mid();
            Box lo = item.box, hi = item.box;
            lo[d] = Interval(item.box[d].lo, m);
            hi[d] = Interval(m, item.box[d].hi);
            work.push_back({lo, item.depth + 1});
            work.push_back({hi, item.depth + 1});
            continue;
        }

        const auto& tab = jet.table();
        std::vector<size_t> straddles;
        bool failed = false;
        for (size_t i = 0; i < tab.indices().size() && !failed; ++i) {
            const MultiIndex& a = tab.indices()[i];
            int total = 0;
            for (unsigned k : a) total += static_cast<int>(k);
            if (total > r) continue;
            const Interval& c = jet.coeffs()[i];
            if (c.mig() > thr) {
                verdict = Verdict::Fail;
                cert.witness_index = a;
                cert.witness_box = item.box;
                cert.witness_enclosure = c;
                failed = true;
                break;
            }
            if (c.mag() > thr) straddles.push_back(i);
        }
        if (failed) break;

        if (straddles.empty()) {
            for (size_t i = 0; i < tab.indices().size(); ++i) {
                const MultiIndex& a = tab.indices()[i];
                int total = 0;
                for (unsigned k : a) total += static_cast<int>(k);
                if (total > r) continue;
                merge_bound(cert.bounds, a, jet.coeffs()[i].mig(), jet.coeffs()[i].mag());
            }
            continue;
        }

        if (is_point_box(item.box)) {
            // exact comparison at the point, when a single extension suffices
            std::vector<Rational> pt;
            for (const auto& iv : item.box) pt.push_back(iv.lo);
            auto exact = exact_point_jet(e, pt, r);
            bool resolved = false;
            if (exact) {
                resolved = true;
                for (size_t i = 0; i < tab.indices().size(); ++i) {
                    const MultiIndex& a = tab.indices()[i];
                    int total = 0;
                    for (unsigned k : a) total += static_cast<int>(k);
                    if (total > r) continue;
                    const AlgebraicNumber& v = (*exact)[MultiIndexTable::get(static_cast<int>(pt.size()), r).position(a)];
                    // |v| vs thr
                    int cmp_hi = v.compare_rational(thr);
                    int cmp_lo = v.compare_rational(-thr);
                    if (cmp_hi > 0 || cmp_lo < 0) {
                        verdict = Verdict::Fail;
                        cert.witness_index = a;
                        cert.witness_box = item.box;
                        cert.witness_enclosure = jet.coeffs()[i];
                        failed = true;
                        break;
                    }
                    merge_bound(cert.bounds, a, Rational(0), thr);
                }
            }
            if (failed) break;
            if (resolved) continue;
            verdict = Verdict::Undecided;
            cert.note = "undecidable point box (no shared extension)";
            break;
        }

        if (item.depth >= opt.max_depth) {
            verdict = Verdict::Undecided;
            cert.note = "depth cap with straddling enclosure";
            cert.witness_box = item.box;
            break;
        }

        // facet descent: if every straddling coefficient is monotone in some
        // non-degenerate direction, the suprema live on the facets
        bool facet_ok = eval_order > r && item.depth >= 10;
        size_t facet_dim = base.size();
        if (facet_ok) {
            for (size_t si : straddles) {
                const MultiIndex& a = tab.indices()[si];
                bool mono = false;
                for (size_t dim = 0; dim < base.size(); ++dim) {
                    if (item.box[dim].width().is_zero()) continue;
                    MultiIndex up = a;
                    up[dim] += 1;
                    int total = 0;
                    for (unsigned k : up) total += static_cast<int>(k);
                    if (total > eval_order) continue;
                    if (jet.coeff(up).definite_sign() != 0) {
                        mono = true;
                        if (facet_dim == base.size()) facet_dim = dim;
                        else if (facet_dim != dim) mono = false;
                        if (mono) break;
                    }
                }
                if (!mono) {
                    facet_ok = false;
                    break;
                }
            }
            facet_ok = facet_ok && facet_dim < base.size();
        }
        if (facet_ok) {
            Box lo = item.box, hi = item.box;
            lo[facet_dim] = Interval(item.box[facet_dim].lo);
            hi[facet_dim] = Interval(item.box[facet_dim].hi);
            work.push_back({lo, item.depth});
            work.push_back({hi, item.depth});
            continue;
        }

        size_t d = widest_dim(item.box);
        Rational m = item.box[d].mid();
        Box lo = item.box, hi = item.box;
        lo[d] = Interval(item.box[d].lo, m);
        hi[d] = Interval(m, item.box[d].hi);
        work.push_back({lo, item.depth + 1});
        work.push_back({hi, item.depth + 1});
    }

    cert.verdict = verdict;
    cert.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return cert;
}

std::pair<Interval, Certificate> measure_norm(const ExprPtr& e, const BasicCell& cell, int r,
                                              const CertifyOptions& opt) {
    auto t0 = std::chrono::steady_clock::now();
    Certificate cert;
    cert.subject = e->str();
    cert.r = r;
    cert.threshold = Rational(-1);
    const Box base = cell.closure_box();
    const int n = static_cast<int>(base.size());

    struct Leaf {
        Box box;
        Rational upper;
        int depth;
    };
    auto cmp = [](const Leaf& a, const Leaf& b) { return a.upper < b.upper; };
    std::priority_queue<Leaf, std::vector<Leaf>, decltype(cmp)> leaves(cmp);

    Rational lower(0);
    auto point_lower = [&](const std::vector<Rational>& pt) {
        try {
            Box pb;
            for (const auto& q : pt) pb.push_back(Interval(q));
            JetEnclosure j = jet_eval(e, pb, r, opt.jets);
            for (size_t i = 0; i < j.table().indices().size(); ++i) {
                lower = max(lower, j.coeffs()[i].mig());
                merge_bound(cert.bounds, j.table().indices()[i], j.coeffs()[i].mig(), j.coeffs()[i].mig());
            }
        } catch (const std::exception&) {
            // boundary points can violate guards; interior sampling continues
        }
    };

    // corners and center of the cell
    {
        std::vector<std::vector<Rational>> pts;
        std::vector<Rational> center;
        for (const auto& iv : base) center.push_back(iv.mid());
        pts.push_back(center);
        size_t combos = size_t{1} << base.size();
        for (size_t mask = 0; mask < combos; ++mask) {
            std::vector<Rational> pt;
            for (size_t i = 0; i < base.size(); ++i)
                pt.push_back((mask >> i) & 1 ? base[i].hi : base[i].lo);
            pts.push_back(pt);
        }
        for (const auto& pt : pts) point_lower(pt);
    }

    std::function<void(const Box&, int)> push_box = [&](const Box& b, int depth) {
        try {
            JetEnclosure j = jet_eval(e, b, r, opt.jets);
            Rational up(0);
            for (size_t i = 0; i < j.table().indices().size(); ++i) {
                up = max(up, j.coeffs()[i].mag());
                merge_bound(cert.bounds, j.table().indices()[i], Rational(0), j.coeffs()[i].mag());
            }
            leaves.push({b, up, depth});
        } catch (const GuardViolation&) {
            if (box_max_width(b) <= opt.margin && touches_boundary(b, base)) {
                cert.margin_shell_clipped = true;
                return;
            }
            size_t d = widest_dim(b);
            if (b[d].width().is_zero()) throw;
            Rational m = b[d].mid();
            Box lo = b, hi = b;
            lo[d] = Interval(b[d].lo, m);
            hi[d] = Interval(m, b[d].hi);
            push_box(lo, depth + 1);
            push_box(hi, depth + 1);
        }
    };
    push_box(base, 0);

    long budget = opt.measure_budget;
    while (!leaves.empty() && budget-- > 0) {
        Leaf top = leaves.top();
        cert.max_depth_used = std::max(cert.max_depth_used, top.depth);
        ++cert.boxes_processed;
        // tight enough?
        if (top.upper <= lower + lower * opt.measure_gap) break;
        if (top.upper - lower <= Rational(1, Integer(1) << 30)) break;
        if (is_point_box(top.box) || top.depth >= opt.max_depth) break;
        leaves.pop();
        size_t d = widest_dim(top.box);
        Rational m = top.box[d].mid();
        Box lo = top.box, hi = top.box;
        lo[d] = Interval(top.box[d].lo, m);
        hi[d] = Interval(m, top.box[d].hi);
        std::vector<Rational> mid;
        for (const auto& iv : top.box) mid.push_back(iv.mid());
        point_lower(mid);
        push_box(lo, top.depth + 1);
        push_box(hi, top.depth + 1);
    }

    Rational upper = leaves.empty() ? lower : leaves.top().upper;
    upper = max(upper, lower);
    cert.verdict = Verdict::Pass;
    cert.note = "measurement";
    cert.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    (void)n;
    return {Interval(lower, upper), cert};
}

Verdict certify_partial_positive(const ExprPtr& e, const BasicCell& cell, size_t var,
                                 const CertifyOptions& opt) {
    Box base = cell.closure_box();
    // positivity is claimed on the open cell: inset interval coordinates
    for (size_t i = 0; i < base.size(); ++i) {
        if (cell.kinds[i] == CoordKind::FullInterval)
            base[i] = Interval(opt.margin, Rational(1) - opt.margin);
    }
    MultiIndex target(base.size(), 0);
    target[var] = 1;

    std::deque<WorkItem> work{{base, 0}};
    long processed = 0;
    while (!work.empty()) {
        if (++processed > opt.box_budget) return Verdict::Undecided;
        WorkItem item = std::move(work.front());
        work.pop_front();
        bool have_jet = false;
        Interval c;
        try {
            JetEnclosure j = jet_eval(e, item.box, 1, opt.jets);
            c = j.coeff(target);
            have_jet = true;
        } catch (const GuardViolation&) {
        }
        if (have_jet) {
            if (c.lo.sign() > 0) continue;     // positive on this box
            if (c.hi.sign() <= 0) return Verdict::Fail; // not strictly increasing
        }
        if (item.depth >= opt.max_depth) return Verdict::Undecided;
        size_t d = widest_dim(item.box);
        if (item.box[d].width().is_zero()) return Verdict::Undecided;
        Rational m = item.box[d].mid();
        Box lo = item.box, hi = item.box;
        lo[d] = Interval(item.box[d].lo, m);
        hi[d] = Interval(m, item.box[d].hi);
        work.push_back({lo, item.depth + 1});
        work.push_back({hi, item.depth + 1});
    }
    return Verdict::Pass;
}

} // namespace cellparam
