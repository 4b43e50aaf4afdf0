#pragma once

#include "cellparam/algebraic.hpp"
#include "cellparam/expr.hpp"
#include "cellparam/interval.hpp"

#include <optional>

namespace cellparam {

// A scalar semialgebraic function of one variable on an open interval with
// algebraic endpoints, in constraint normal form: an exact polynomial, or a
// branch of a square-free curve T(x, w) = 0 that is delineable over the
// domain (no leading-coefficient or discriminant roots strictly inside).
// All sign and root queries on the branch are exact.
class ScalarFn {
public:
    static ScalarFn from_poly(const UPoly& p, const AlgebraicNumber& lo, const AlgebraicNumber& hi);
    // Branch through the isolating w-interval at the rational anchor.
    static ScalarFn from_branch(Poly T, const AlgebraicNumber& lo, const AlgebraicNumber& hi,
                                const Rational& anchor, const Interval& w_at_anchor);
    // Constant function.
    static ScalarFn from_const(const Rational& c, const AlgebraicNumber& lo, const AlgebraicNumber& hi);

    bool is_poly() const { return poly_.has_value(); }
    const AlgebraicNumber& lo() const { return lo_; }
    const AlgebraicNumber& hi() const { return hi_; }
    const Poly& constraint() const { return T_; } // branch variant only
    int branch_index() const { return branch_index_; }

    // f^(s) = num/den along the constraint (den = 1 for polynomials; for
    // branches den is a power of dT/dw). Variables (x, w).
    struct DerivForm {
        Poly num;
        Poly den;
    };
    DerivForm derivative_form(int s) const;

    // exact branch/polynomial value at a rational point of the open domain
    AlgebraicNumber value_at(const Rational& x) const;
    Interval value_enclosure(const Rational& x, unsigned bits) const;

    // exact sign of N(x, f(x)) for a rational x in the domain (N in (x, w))
    int sign_along(const Poly& N, const Rational& x) const;

    // x-locations in (lo, hi) where N(x, f(x)) may vanish: the real roots of
    // res_w(N, T) (for polynomials, of N(x, p(x))). A superset of the true
    // zero set; spurious points only cause extra subdivision.
    std::vector<AlgebraicNumber> zero_candidates_along(const Poly& N) const;

    // value range over the open domain via critical points and endpoint
    // limits, outward rounded
    Interval value_range(unsigned bits = 64) const;

    // one-sided endpoint limits (exist by monotone boundedness on the
    // delineable domain)
    AlgebraicNumber limit_at_lo() const;
    AlgebraicNumber limit_at_hi() const;

    // Expression in Var(1) valid on the open domain; for branches the guard
    // may be inset by `margin` next to endpoints where the branch is
    // singular (jets then clip the documented shell).
    ExprPtr to_expr(const Rational& margin = Rational(1, Integer(1) << 40)) const;

    // precompose with a polynomial: the function t -> f(q(t)) as a ScalarFn
    // on (tlo, thi); requires q((tlo, thi)) inside the domain
    ScalarFn compose_poly(const UPoly& q, const AlgebraicNumber& tlo,
                          const AlgebraicNumber& thi) const;

    // the graph-swap: for an injective branch, the inverse function x = g(w)
    // over the value range (constraint variables exchanged)
    ScalarFn inverse() const;

    std::string str() const;

private:
    ScalarFn() = default;

    std::optional<UPoly> poly_;
    Poly T_;         // vars (x, w), square-free, primitive
    int branch_index_ = -1; // index among all real roots of T(x, .) on the domain
    AlgebraicNumber lo_, hi_;
    Rational anchor_ = Rational(1, 2);

    mutable std::vector<DerivForm> deriv_cache_;
    UPoly fiber_at(const Rational& x) const; // T(x, .) as univariate in w
};

} // namespace cellparam
