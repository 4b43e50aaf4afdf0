#include "cellparam/interval.hpp"

#include <ostream>
#include <sstream>
#include <stdexcept>

namespace cellparam {

Interval::Interval(Rational l, Rational h) : lo(std::move(l)), hi(std::move(h)) {
    if (hi < lo) throw std::invalid_argument("Interval: lo > hi");
}

Interval Interval::hull(const Interval& a, const Interval& b) {
    return Interval(min(a.lo, b.lo), max(a.hi, b.hi));
}

Rational Interval::mig() const {
    if (contains_zero()) return Rational(0);
    return min(lo.abs(), hi.abs());
}

int Interval::definite_sign() const {
    if (lo.sign() > 0) return 1;
    if (hi.sign() < 0) return -1;
    return 0;
}

Interval Interval::operator*(const Interval& o) const {
    Rational a = lo * o.lo, b = lo * o.hi, c = hi * o.lo, d = hi * o.hi;
    return Interval(min(min(a, b), min(c, d)), max(max(a, b), max(c, d)));
}

Interval Interval::operator*(const Rational& c) const {
    if (c.sign() >= 0) return Interval(lo * c, hi * c);
    return Interval(hi * c, lo * c);
}

Interval Interval::reciprocal() const {
    if (contains_zero()) throw std::domain_error("Interval: reciprocal over zero");
    return Interval(hi.reciprocal(), lo.reciprocal());
}

Interval Interval::operator/(const Interval& o) const { return *this * o.reciprocal(); }

Interval Interval::pow(unsigned e) const {
    if (e == 0) return Interval(Rational(1));
    if (e % 2 == 1 || lo.sign() >= 0) {
        return Interval(lo.pow(e), hi.pow(e));
    }
    if (hi.sign() <= 0) return Interval(hi.pow(e), lo.pow(e));
    // even power straddling zero
    return Interval(Rational(0), max(lo.pow(e), hi.pow(e)));
}

Interval Interval::intersect(const Interval& o) const {
    Rational l = max(lo, o.lo), h = min(hi, o.hi);
    if (h < l) throw std::domain_error("Interval::intersect: empty");
    return Interval(l, h);
}

Interval Interval::round_out(unsigned bits, size_t size_threshold) const {
    Rational l = lo.bit_size() > size_threshold ? lo.floor_dyadic(bits) : lo;
    Rational h = hi.bit_size() > size_threshold ? hi.ceil_dyadic(bits) : hi;
    return Interval(l, h);
}

std::string Interval::str() const {
    std::ostringstream os;
    os << "[" << lo << ", " << hi << "]";
    return os.str();
}

std::ostream& operator<<(std::ostream& os, const Interval& iv) { return os << iv.str(); }

Interval interval_eval(const Poly& p, const Box& box) {
    if (box.size() != p.arity()) throw std::invalid_argument("interval_eval: box arity");
    Interval acc(Rational(0));
    for (const auto& [e, c] : p.terms()) {
        Interval t{Rational(1)};
        for (size_t i = 0; i < e.size(); ++i)
            if (e[i]) t = t * box[i].pow(e[i]);
        acc = acc + t * c;
    }
    return acc;
}

Rational box_max_width(const Box& box) {
    Rational w(0);
    for (const auto& iv : box) w = max(w, iv.width());
    return w;
}

std::string box_str(const Box& box) {
    std::ostringstream os;
    os << "(";
    for (size_t i = 0; i < box.size(); ++i) {
        if (i) os << " ";
        os << box[i].str();
    }
    os << ")";
    return os.str();
}

} // namespace cellparam
