#pragma once

#include "cellparam/rational.hpp"

#include <optional>
#include <vector>

namespace cellparam {

// Dense univariate polynomial over Q, coefficients low-to-high, trailing
// zeros trimmed; the zero polynomial is the empty vector.
using UPoly = std::vector<Rational>;

void up_trim(UPoly& p);
inline bool up_is_zero(const UPoly& p) { return p.empty(); }
inline int up_degree(const UPoly& p) { return static_cast<int>(p.size()) - 1; }

Rational up_eval(const UPoly& p, const Rational& x);
int up_sign_at(const UPoly& p, const Rational& x);
UPoly up_derivative(const UPoly& p);
UPoly up_add(const UPoly& a, const UPoly& b);
UPoly up_sub(const UPoly& a, const UPoly& b);
UPoly up_mul(const UPoly& a, const UPoly& b);
UPoly up_scale(const UPoly& a, const Rational& c);
UPoly up_monic(const UPoly& a);

// Quotient/remainder over Q; divisor non-zero.
std::pair<UPoly, UPoly> up_divrem(const UPoly& num, const UPoly& den);

// Monic gcd; gcd(0, p) = monic p.
UPoly up_gcd(UPoly a, UPoly b);

// p / gcd(p, p') — same real roots, all simple.
UPoly up_squarefree(const UPoly& p);

// p(a + b*x)
UPoly up_compose_affine(const UPoly& p, const Rational& a, const Rational& b);
// p(x + 1)
UPoly up_taylor_shift1(const UPoly& p);
// x^deg(p) * p(1/x)
UPoly up_reverse(const UPoly& p);

int up_sign_variations(const UPoly& p);

// Descartes bound for the number of roots in the open interval (0,1).
int descartes_bound_01(const UPoly& p);

// Open interval with rational endpoints containing exactly one real root of
// the (square-free) defining polynomial.
struct IsolatingInterval {
    Rational lo, hi;   // lo < hi
    UPoly poly;        // square-free defining polynomial
    bool squarefree = true;

    Rational width() const { return hi - lo; }
    Rational mid() const { return (lo + hi) * Rational(1, 2); }
};

// Disjoint isolating intervals for all roots of the square-free part of p
// in the open range (lo, hi), sorted increasingly. Subdivision points are
// never roots; the range endpoints themselves are excluded.
std::vector<IsolatingInterval> isolate_real_roots(const UPoly& p, const Rational& lo,
                                                  const Rational& hi);

// Bisection refinement until hi - lo <= width; preserves the isolated root.
IsolatingInterval refine_root(const IsolatingInterval& iso, const Rational& width);

// The rational with the smallest denominator in the closed interval [lo, hi].
Rational best_rational_in(const Rational& lo, const Rational& hi);

// Verified rational roots of p inside (lo, hi), sorted. Detection is via
// interval refinement plus simplest-rational reconstruction, so roots with
// astronomically large denominators may be reported as irrational; every
// returned value satisfies p(r) = 0 exactly.
std::vector<Rational> up_rational_roots_in(const UPoly& p, const Rational& lo,
                                           const Rational& hi);

} // namespace cellparam
