#pragma once

#include "cellparam/rational.hpp"
#include "cellparam/poly.hpp"

#include <iosfwd>
#include <vector>

namespace cellparam {

// Closed interval with exact rational endpoints. All arithmetic is exact,
// so enclosures never lose containment; widths are controlled by the
// callers through subdivision and optional dyadic coarsening.
struct Interval {
    Rational lo, hi;

    Interval() : lo(0), hi(0) {}
    explicit Interval(const Rational& v) : lo(v), hi(v) {}
    Interval(Rational l, Rational h);

    static Interval hull(const Interval& a, const Interval& b);

    Rational width() const { return hi - lo; }
    Rational mid() const { return (lo + hi) * Rational(1, 2); }
    bool is_point() const { return lo == hi; }
    bool contains(const Rational& v) const { return lo <= v && v <= hi; }
    bool contains_zero() const { return lo.sign() <= 0 && hi.sign() >= 0; }
    bool contains(const Interval& o) const { return lo <= o.lo && o.hi <= hi; }
    bool intersects(const Interval& o) const { return !(hi < o.lo || o.hi < lo); }

    // Largest and smallest absolute value over the interval.
    Rational mag() const { return max(lo.abs(), hi.abs()); }
    Rational mig() const;

    // Sign if definite: -1, +1, or 0 when the interval straddles zero.
    int definite_sign() const;

    Interval operator-() const { return Interval(-hi, -lo); }
    Interval operator+(const Interval& o) const { return Interval(lo + o.lo, hi + o.hi); }
    Interval operator-(const Interval& o) const { return Interval(lo - o.hi, hi - o.lo); }
    Interval operator*(const Interval& o) const;
    Interval operator*(const Rational& c) const;
    Interval operator+(const Rational& c) const { return Interval(lo + c, hi + c); }
    // Throws std::domain_error when the divisor contains zero.
    Interval operator/(const Interval& o) const;
    Interval reciprocal() const;
    Interval pow(unsigned e) const;

    Interval intersect(const Interval& o) const; // throws if empty

    // Outward rounding to dyadic endpoints with `bits` fractional bits,
    // applied only when an endpoint's representation exceeds
    // `size_threshold` bits. Containment is preserved.
    Interval round_out(unsigned bits, size_t size_threshold) const;

    std::string str() const;
    friend std::ostream& operator<<(std::ostream& os, const Interval& iv);
};

using Box = std::vector<Interval>;

// Interval evaluation of a polynomial over a box (one interval per variable).
Interval interval_eval(const Poly& p, const Box& box);

Rational box_max_width(const Box& box);
std::string box_str(const Box& box);

} // namespace cellparam
