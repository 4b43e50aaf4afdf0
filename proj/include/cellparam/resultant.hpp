#pragma once

#include "cellparam/poly.hpp"

namespace cellparam {

// Resultant of p and q with respect to `var`, eliminating it. Computed as
// the Sylvester-matrix determinant by fraction-free Bareiss elimination
// (entries are polynomials in the remaining variables; all divisions exact).
//
// Convention: rows of p's coefficients come first, i.e. this is the
// textbook Res(p, q) with Res(p, q) = lc(p)^{deg q} * prod q over p's roots.
// Swapping arguments flips the sign by (-1)^{deg p * deg q}; downstream code
// relies only on the zero set.
//
// Throws std::domain_error if p or q does not involve `var`.
Poly poly_resultant(const Poly& p, const Poly& q, size_t var);

// res(p, dp/dvar) / lc_var(p); for deg 1 the constant 1 (no multiple roots).
// With this convention disc_y(y^2 - x) = -4x.
Poly poly_discriminant(const Poly& p, size_t var);

} // namespace cellparam
