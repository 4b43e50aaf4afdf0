#pragma once

#include "cellparam/expr.hpp"
#include "cellparam/interval.hpp"

#include <map>
#include <vector>

namespace cellparam {

struct OrderTooLarge : std::runtime_error {
    using std::runtime_error::runtime_error;
};

using MultiIndex = std::vector<unsigned>;

// All multi-indices of the given arity with |a| <= order, in ascending
// degree-lexicographic order. Shared immutable tables.
class MultiIndexTable {
public:
    static const MultiIndexTable& get(int arity, int order);

    const std::vector<MultiIndex>& indices() const { return indices_; }
    size_t size() const { return indices_.size(); }
    size_t position(const MultiIndex& a) const;

private:
    MultiIndexTable(int arity, int order);
    std::vector<MultiIndex> indices_;
    std::map<MultiIndex, size_t> lookup_;
};

struct JetOptions {
    int order_cap = 8;
    unsigned round_bits = 192;     // dyadic coarsening grid for big endpoints
    size_t round_threshold = 2048; // only round endpoints above this bit size
    int branch_depth = 48;         // contraction depth for branch ranges
};

// Interval-coefficient truncated Taylor expansion over a box: coefficient
// c[a] encloses D^a f(x) / a! simultaneously for every x in the base box.
class JetEnclosure {
public:
    JetEnclosure(int arity, int order);

    int order() const { return order_; }
    int arity() const { return arity_; }
    const Box& base_box() const { return base_; }
    void set_base_box(Box b) { base_ = std::move(b); }

    const Interval& coeff(const MultiIndex& a) const;
    Interval& coeff(const MultiIndex& a);
    const std::vector<Interval>& coeffs() const { return c_; }
    std::vector<Interval>& coeffs() { return c_; }
    const MultiIndexTable& table() const { return MultiIndexTable::get(arity_, order_); }

    static JetEnclosure constant(int arity, int order, const Interval& v);
    // seeded as (range, 1, 0, ...) in the given variable (0-based)
    static JetEnclosure variable(int arity, int order, size_t var, const Interval& range);

    JetEnclosure operator+(const JetEnclosure& o) const;
    JetEnclosure operator-(const JetEnclosure& o) const;
    JetEnclosure operator*(const JetEnclosure& o) const;
    JetEnclosure pow(unsigned e) const;

    void round(const JetOptions& opt);

private:
    int arity_, order_;
    std::vector<Interval> c_;
    Box base_;
};

// Rigorous jet of e over the box (box[i] = range of Var(i+1)); the returned
// coefficients satisfy the enclosure invariant above. Throws GuardViolation
// when a RootOf guard cannot be validated over the box (callers subdivide)
// and OrderTooLarge when r exceeds the configured cap.
JetEnclosure jet_eval(const ExprPtr& e, const Box& box, int r, const JetOptions& opt = {});

// Jet of the branch w(args) defined by rpoly(args..., w) = 0, given jets of
// the arguments, via the order-by-order implicit recurrence. The division
// is by an interval enclosure of d(rpoly)/dw certified away from zero.
JetEnclosure implicit_branch_jet(const Poly& rpoly, const Box& guard_args,
                                 const Interval& guard_w,
                                 const std::vector<JetEnclosure>& arg_jets, int r,
                                 const JetOptions& opt = {});

// Inclusion-monotone enclosure of the branch range over argument ranges:
// dyadic-grid exclusion plus one fixed-point Newton step, so that smaller
// input boxes always give nested results.
Interval branch_range_monotone(const Poly& rpoly, const Box& arg_ranges,
                               const Interval& guard_w, int depth);

} // namespace cellparam
