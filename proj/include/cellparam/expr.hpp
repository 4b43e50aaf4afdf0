#pragma once

#include "cellparam/algebraic.hpp"
#include "cellparam/interval.hpp"
#include "cellparam/poly.hpp"

#include <memory>
#include <optional>
#include <vector>

namespace cellparam {

class Expr;
using ExprPtr = std::shared_ptr<const Expr>;

// Raised when a RootOf guard cannot be verified over a requested box; the
// caller is expected to subdivide (or reject the construction).
struct GuardViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Closed expression DAG for all constructed maps and pullbacks: rational
// constants, variables, ring operations, and certified algebraic-root
// branches. Nodes are immutable and shareable across threads.
class Expr : public std::enable_shared_from_this<Expr> {
public:
    enum class Kind { Const, Var, Add, Sub, Mul, Pow, RootOf };

    Kind kind;
    // Const
    Rational cval;
    // Var (1-based per the external format)
    int var = 0;
    // Add/Sub/Mul children, Pow base
    ExprPtr a, b;
    unsigned exponent = 0;
    // RootOf: value w with rpoly(args..., w) = 0. rpoly's variables are the
    // m argument slots followed by the branch variable. The guard certifies
    // that over guard_args x guard_w the branch is single-valued and smooth:
    //   (i) d(rpoly)/dw does not vanish on guard_args x guard_w,
    //   (ii) rpoly does not vanish on guard_args x {w_lo} nor x {w_hi},
    //   (iii) rpoly(center(guard_args), .) has exactly one root in guard_w.
    Poly rpoly;
    int branch = 0; // index among increasing real roots at the guard center
    Box guard_args;
    Interval guard_w;
    std::vector<ExprPtr> args;

    static ExprPtr constant(const Rational& c);
    static ExprPtr constant(const AlgebraicNumber& a); // nullary RootOf when irrational
    static ExprPtr variable(int index);                // 1-based
    static ExprPtr add(ExprPtr x, ExprPtr y);
    static ExprPtr sub(ExprPtr x, ExprPtr y);
    static ExprPtr mul(ExprPtr x, ExprPtr y);
    static ExprPtr pow(ExprPtr x, unsigned e);
    // Verifies the guard conditions (throws GuardViolation) and attempts to
    // simplify the branch to an exact polynomial before building the node.
    static ExprPtr root_of(Poly p, int branch_index, Box guard_args, Interval guard_w,
                           std::vector<ExprPtr> args);
    // Branch selected by its isolating interval at the guard center.
    static ExprPtr root_branch(Poly p, Box guard_args, Interval guard_w,
                               std::vector<ExprPtr> args);

    // 1/x as the branch of w*x - 1 = 0 over a zero-free range.
    static ExprPtr reciprocal(ExprPtr x, const Interval& range_of_x);

    // Smallest n such that only Var(1..n) occur.
    int arity() const;

    bool is_const() const { return kind == Kind::Const; }
    bool is_var() const { return kind == Kind::Var; }

    // Exact polynomial view, when the DAG has no RootOf nodes. Variables are
    // named x1..xn up to `arity_hint` (>= arity()).
    std::optional<Poly> to_poly(int arity_hint) const;

    std::string str() const;

protected:
    Expr() = default;
};

// repl[i] replaces Var(i+1); all variables of e must be covered.
ExprPtr expr_substitute(const ExprPtr& e, const std::vector<ExprPtr>& repl);

// e(a + s*t) in variable `var` (1-based): affine change of one variable.
ExprPtr expr_affine_in_var(const ExprPtr& e, int var, const ExprPtr& offset, const ExprPtr& scale);

// Interval enclosure of e over a box (box[i] is the range of Var(i+1)).
// `refine_bits` tunes how tightly RootOf values are contracted by Newton
// steps. The result always contains the exact range.
Interval expr_range(const ExprPtr& e, const Box& box, unsigned refine_bits = 64);

// Tight enclosure at a rational point (zero-width box); exact (point
// interval) whenever no irrational branch value is met.
Interval expr_eval_point(const ExprPtr& e, const std::vector<Rational>& point,
                         unsigned refine_bits = 128);

// Exact evaluation at a rational point when every branch value along the
// way is rational or a single algebraic extension; nullopt otherwise.
std::optional<AlgebraicNumber> expr_eval_exact(const ExprPtr& e,
                                               const std::vector<Rational>& point);

// Adaptive certified check that p has no zero on box (subdividing up to
// `depth` levels). False means "could not certify", not "vanishes".
bool poly_nonvanishing_on(const Poly& p, const Box& box, int depth);

// Horner form of a polynomial as an expression; variable i (0-based)
// becomes Var(i+1).
ExprPtr expr_from_poly(const Poly& p);

} // namespace cellparam
