#include "cellparam/upoly.hpp"

#include <algorithm>
#include <stdexcept>

namespace cellparam {

void up_trim(UPoly& p) {
    while (!p.empty() && p.back().is_zero()) p.pop_back();
}

Rational up_eval(const UPoly& p, const Rational& x) {
    Rational acc(0);
    for (size_t i = p.size(); i-- > 0;) acc = acc * x + p[i];
    return acc;
}

int up_sign_at(const UPoly& p, const Rational& x) { return up_eval(p, x).sign(); }

UPoly up_derivative(const UPoly& p) {
    UPoly d;
    for (size_t i = 1; i < p.size(); ++i) d.push_back(p[i] * Rational(static_cast<int>(i)));
    up_trim(d);
    return d;
}

UPoly up_add(const UPoly& a, const UPoly& b) {
    UPoly r(std::max(a.size(), b.size()), Rational(0));
    for (size_t i = 0; i < a.size(); ++i) r[i] += a[i];
    for (size_t i = 0; i < b.size(); ++i) r[i] += b[i];
    up_trim(r);
    return r;
}

UPoly up_sub(const UPoly& a, const UPoly& b) {
    UPoly r(std::max(a.size(), b.size()), Rational(0));
    for (size_t i = 0; i < a.size(); ++i) r[i] += a[i];
    for (size_t i = 0; i < b.size(); ++i) r[i] -= b[i];
    up_trim(r);
    return r;
}

UPoly up_mul(const UPoly& a, const UPoly& b) {
    if (a.empty() || b.empty()) return {};
    UPoly r(a.size() + b.size() - 1, Rational(0));
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    up_trim(r);
    return r;
}

UPoly up_scale(const UPoly& a, const Rational& c) {
    if (c.is_zero()) return {};
    UPoly r = a;
    for (auto& x : r) x *= c;
    return r;
}

UPoly up_monic(const UPoly& a) {
    if (a.empty()) return a;
    return up_scale(a, a.back().reciprocal());
}

std::pair<UPoly, UPoly> up_divrem(const UPoly& num, const UPoly& den) {
    if (den.empty()) throw std::domain_error("up_divrem: zero divisor");
    UPoly rem = num, quot;
    int dq = up_degree(num) - up_degree(den);
    if (dq < 0) return {UPoly{}, rem};
    quot.assign(static_cast<size_t>(dq) + 1, Rational(0));
    Rational lead = den.back();
    while (!rem.empty() && rem.size() >= den.size()) {
        size_t shift = rem.size() - den.size();
        Rational c = rem.back() / lead;
        quot[shift] = c;
        for (size_t i = 0; i < den.size(); ++i) rem[shift + i] -= c * den[i];
        up_trim(rem);
    }
    up_trim(quot);
    return {quot, rem};
}

UPoly up_gcd(UPoly a, UPoly b) {
    up_trim(a);
    up_trim(b);
    while (!b.empty()) {
        auto [q, r] = up_divrem(a, b);
        a = std::move(b);
        b = up_monic(r); // normalization keeps coefficient growth in check
    }
    return up_monic(a);
}

UPoly up_squarefree(const UPoly& p) {
    if (p.empty()) return p;
    if (p.size() <= 2) return up_monic(p);
    UPoly g = up_gcd(p, up_derivative(p));
    if (up_degree(g) == 0) return up_monic(p);
    auto [q, r] = up_divrem(p, g);
    if (!r.empty()) throw std::logic_error("up_squarefree: non-exact division");
    return up_monic(q);
}

UPoly up_compose_affine(const UPoly& p, const Rational& a, const Rational& b) {
    // Horner with the affine argument a + b*x.
    UPoly arg{a, b};
    up_trim(arg);
    UPoly acc;
    for (size_t i = p.size(); i-- > 0;) {
        acc = up_mul(acc, arg);
        if (acc.empty()) acc.push_back(p[i]);
        else acc[0] += p[i];
        up_trim(acc);
    }
    return acc;
}

UPoly up_taylor_shift1(const UPoly& p) { return up_compose_affine(p, Rational(1), Rational(1)); }

UPoly up_reverse(const UPoly& p) {
    UPoly r(p.rbegin(), p.rend());
    up_trim(r);
    return r;
}

int up_sign_variations(const UPoly& p) {
    int v = 0, last = 0;
    for (const auto& c : p) {
        int s = c.sign();
        if (s == 0) continue;
        if (last != 0 && s != last) ++v;
        last = s;
    }
    return v;
}

int descartes_bound_01(const UPoly& p) {
    return up_sign_variations(up_taylor_shift1(up_reverse(p)));
}

namespace {

// A subdivision point inside (a, b) that is not a root of q.
Rational nonroot_split(const UPoly& q, const Rational& a, const Rational& b) {
    Rational w = b - a;
    Rational m = a + w * Rational(1, 2);
    if (up_sign_at(q, m) != 0) return m;
    // march through a few dyadic offsets; q has finitely many roots
    for (int k = 2; k < 64; ++k) {
        Rational off = w * Rational(1, 1 << std::min(k, 20)) * Rational(1, k);
        Rational c = m + off;
        if (c > a && c < b && up_sign_at(q, c) != 0) return c;
        c = m - off;
        if (c > a && c < b && up_sign_at(q, c) != 0) return c;
    }
    throw std::logic_error("nonroot_split: failed to find non-root point");
}

void isolate_rec(const UPoly& q, const Rational& a, const Rational& b,
                 std::vector<IsolatingInterval>& out) {
    UPoly t = up_compose_affine(q, a, b - a);
    int v = descartes_bound_01(t);
    if (v == 0) return;
    if (v == 1) {
        out.push_back(IsolatingInterval{a, b, q, true});
        return;
    }
    Rational m = nonroot_split(q, a, b);
    isolate_rec(q, a, m, out);
    isolate_rec(q, m, b, out);
}

} // namespace

std::vector<IsolatingInterval> isolate_real_roots(const UPoly& p, const Rational& lo,
                                                  const Rational& hi) {
    if (up_is_zero(p)) throw std::domain_error("isolate_real_roots: zero polynomial");
    if (!(lo < hi)) throw std::invalid_argument("isolate_real_roots: empty range");
    UPoly q = up_squarefree(p);
    std::vector<IsolatingInterval> out;
    if (up_degree(q) == 0) return out;
    isolate_rec(q, lo, hi, out);
    std::sort(out.begin(), out.end(),
              [](const IsolatingInterval& x, const IsolatingInterval& y) { return x.lo < y.lo; });
    return out;
}

IsolatingInterval refine_root(const IsolatingInterval& iso, const Rational& width) {
    IsolatingInterval r = iso;
    int slo = up_sign_at(r.poly, r.lo);
    while (r.hi - r.lo > width) {
        Rational m = r.mid();
        int sm = up_sign_at(r.poly, m);
        if (sm == 0) {
            // rational root hit exactly; shrink a symmetric window around it
            Rational d = (r.hi - r.lo) * Rational(1, 4);
            while (up_sign_at(r.poly, m - d) == 0 || up_sign_at(r.poly, m + d) == 0 ||
                   m - d <= r.lo || m + d >= r.hi)
                d *= Rational(1, 2);
            r.lo = m - d;
            r.hi = m + d;
            slo = up_sign_at(r.poly, r.lo);
            continue;
        }
        if (sm == slo) r.lo = m;
        else r.hi = m;
    }
    return r;
}

Rational best_rational_in(const Rational& lo, const Rational& hi) {
    if (hi < lo) throw std::invalid_argument("best_rational_in: empty interval");
    if (lo.sign() <= 0 && hi.sign() >= 0) return Rational(0);
    if (hi.sign() < 0) return -best_rational_in(-hi, -lo);
    // 0 < lo <= hi: continued-fraction descent
    Integer fl = floor_int(lo);
    if (Rational(fl) >= lo && Rational(fl) <= hi) return Rational(fl); // lo integral
    Integer c = ceil_int(lo);
    if (Rational(c) <= hi) return Rational(c);
    // both endpoints within (fl, fl+1)
    Rational flo = lo - Rational(fl), fhi = hi - Rational(fl);
    Rational inner = best_rational_in(fhi.reciprocal(), flo.reciprocal());
    return Rational(fl) + inner.reciprocal();
}

std::vector<Rational> up_rational_roots_in(const UPoly& p, const Rational& lo,
                                           const Rational& hi) {
    std::vector<Rational> out;
    if (up_is_zero(p)) return out;
    for (const auto& iso : isolate_real_roots(p, lo, hi)) {
        IsolatingInterval cur = iso;
        for (int round = 0; round < 10; ++round) {
            Rational cand = best_rational_in(cur.lo, cur.hi);
            if (up_sign_at(p, cand) == 0) {
                out.push_back(cand);
                break;
            }
            cur = refine_root(cur, cur.width() * Rational(1, 1 << 24));
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace cellparam
