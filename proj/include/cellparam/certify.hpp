#pragma once

#include "cellparam/cells.hpp"
#include "cellparam/jets.hpp"

#include <optional>
#include <string>
#include <vector>

namespace cellparam {

enum class Verdict { Pass, Fail, Undecided };

std::string verdict_str(Verdict v);

// Machine-checkable evidence for a normalized C^r bound: Pass means that
// for every |a| <= r the certified supremum of |D^a f|/a! over the cell is
// <= the threshold. Fail carries a concrete witness box.
struct Certificate {
    std::string subject;
    int r = 0;
    Rational threshold = Rational(1);
    Verdict verdict = Verdict::Undecided;
    // per-index [best witnessed lower bound, certified upper bound] of
    // sup |D^a f| / a!
    std::vector<std::pair<MultiIndex, Interval>> bounds;
    // Fail data
    MultiIndex witness_index;
    Box witness_box;
    Interval witness_enclosure;
    // diagnostics
    int max_depth_used = 0;
    long boxes_processed = 0;
    bool margin_shell_clipped = false; // inset shell excluded next to the open
                                       // boundary (guard-singular cells only)
    std::string note;
    double wall_seconds = 0; // excluded from serialization/digest

    // certified upper bound for the full norm (max over bounds)
    Rational norm_upper() const;
    Rational norm_lower() const;

    SExpr to_sexpr() const;
    std::uint64_t digest() const;
};

struct CertifyOptions {
    int max_depth = 40;
    Rational threshold = Rational(1);
    Rational margin = Rational(1, Integer(1) << 40);
    JetOptions jets;
    long box_budget = 200000;
    // measurement mode refinement: refine until upper <= lower * (1 + gap)
    Rational measure_gap = Rational(1, 32);
    long measure_budget = 4000;
};

// Verifies sup |D^a e| / a! <= threshold for all |a| <= r over the closed
// hull of the cell (inset by `margin` next to boundaries where the branch
// guards fail on the closure; recorded in the certificate).
Certificate certify_norm(const ExprPtr& e, const BasicCell& cell, int r,
                         const CertifyOptions& opt = {});

// Measures the norm: a tight interval [lower, upper] containing
// max_{|a|<=r} sup |D^a e| / a!, with a certificate trail.
std::pair<Interval, Certificate> measure_norm(const ExprPtr& e, const BasicCell& cell, int r,
                                              const CertifyOptions& opt = {});

// Certified positivity of the order-1 jet coefficient in `var` (0-based)
// over the open cell: the strict-monotonicity backend of check_cellular.
Verdict certify_partial_positive(const ExprPtr& e, const BasicCell& cell, size_t var,
                                 const CertifyOptions& opt = {});

} // namespace cellparam
