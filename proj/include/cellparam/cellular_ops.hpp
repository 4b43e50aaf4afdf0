#pragma once

#include "cellparam/cells.hpp"
#include "cellparam/certify.hpp"

#include <optional>

namespace cellparam {

struct ImageEscapesDomain : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CellularCheck {
    Verdict verdict = Verdict::Pass;
    std::string report;
    bool ok() const { return verdict == Verdict::Pass; }
};

// Coordinate-wise substitution of inner into outer; requires inner's image
// to lie in outer's domain cell (certified by range enclosure).
CellularMap compose_cellular(const CellularMap& outer, const CellularMap& inner,
                             const CertifyOptions& opt = {});

// Triangularity is checked syntactically; strict monotonicity in each
// interval coordinate by certified positivity of the partial derivative on
// the open cell (structural fast paths for affine and power shapes), and
// the image is checked to stay within the closed unit box.
CellularCheck check_cellular(const CellularMap& m, const CertifyOptions& opt = {});

// The K^d affine-grid refinements of m (d = number of interval
// coordinates); piece (j_1..j_d) precomposes x_i -> (j_i + x_i)/K.
std::vector<CellularMap> linear_subdivision(const CellularMap& m, unsigned K);

// Monotone coordinate-by-coordinate bisection: a box of width <= tol
// certified to contain the unique preimage of y, or nullopt when y is
// (provably) outside the image.
std::optional<Box> invert_point(const CellularMap& m, const std::vector<Rational>& y,
                                const Rational& tol);

// Same, with algebraic target coordinates (used for samples on branches).
std::optional<Box> invert_point_alg(const CellularMap& m, const std::vector<AlgebraicNumber>& y,
                                    const Rational& tol);

} // namespace cellparam
