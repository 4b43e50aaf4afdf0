#pragma once

#include "cellparam/poly.hpp"
#include "cellparam/upoly.hpp"

#include <vector>

namespace cellparam {

// A real algebraic number: either an exact rational, or the unique root of
// a square-free univariate polynomial inside an open isolating interval.
// Values are immutable; refinement produces tighter enclosures on the fly.
class AlgebraicNumber {
public:
    AlgebraicNumber() : rational_(true), value_(0) {}
    /*implicit*/ AlgebraicNumber(const Rational& v) : rational_(true), value_(v) {}

    // The unique root of sqfree `p` in (lo, hi). Collapses to the rational
    // fast path when that root is exactly rational and cheaply detected.
    static AlgebraicNumber root_in(const UPoly& p, const Rational& lo, const Rational& hi);
    // The k-th (0-based, increasing) real root of p in (lo, hi).
    static AlgebraicNumber root_index(const UPoly& p, int k, const Rational& lo, const Rational& hi);

    bool is_rational() const { return rational_; }
    const Rational& rational_value() const; // requires is_rational()
    const UPoly& defining() const { return poly_; }

    // Enclosure of width <= `width` (exact point for rationals).
    std::pair<Rational, Rational> enclosure(const Rational& width) const;
    std::pair<Rational, Rational> enclosure() const; // current, unrefined

    int sign() const;

    // Exact sign of f at this number (gcd-based zero test, then refinement).
    int sign_of_upoly_at(const UPoly& f) const;

    // Exact three-way comparison.
    int compare(const AlgebraicNumber& o) const;
    bool operator==(const AlgebraicNumber& o) const { return compare(o) == 0; }
    bool operator<(const AlgebraicNumber& o) const { return compare(o) < 0; }
    bool operator<=(const AlgebraicNumber& o) const { return compare(o) <= 0; }

    int compare_rational(const Rational& q) const;

    double to_double() const;
    std::string str() const;

private:
    bool rational_;
    Rational value_; // rational fast path
    UPoly poly_;     // square-free, monic
    Rational lo_, hi_;

    IsolatingInterval iso() const { return IsolatingInterval{lo_, hi_, poly_, true}; }
};

// Exact sign of a multivariate polynomial at a point with algebraic
// coordinates. Exact whenever at most one coordinate is irrational; for two
// irrational coordinates falls back to interval refinement with a
// resultant-based zero test (throws std::runtime_error if a doubly
// degenerate configuration exhausts the refinement budget).
int sign_at(const Poly& p, const std::vector<AlgebraicNumber>& point);

// Decides p(a, b) == 0 exactly for a 2-variable polynomial.
bool bivariate_is_zero(const Poly& p, const AlgebraicNumber& a, const AlgebraicNumber& b);

} // namespace cellparam
