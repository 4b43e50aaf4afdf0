#pragma once

#include "cellparam/expr.hpp"
#include "cellparam/jets.hpp"

#include <optional>

namespace cellparam {

// Exact normalized-derivative jet of e at a rational point, as algebraic
// numbers, available when every branch value encountered is rational or
// lies in one shared algebraic extension. Used by the certifier to decide
// threshold comparisons where a supremum is attained exactly.
std::optional<std::vector<AlgebraicNumber>> exact_point_jet(const ExprPtr& e,
                                                            const std::vector<Rational>& point,
                                                            int r);

} // namespace cellparam
