#pragma once

#include "cellparam/expr.hpp"
#include "cellparam/sexpr.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace cellparam {

enum class CoordKind { FullInterval, Singleton };

// Product of copies of I = (0,1) and singletons {0}.
struct BasicCell {
    std::vector<CoordKind> kinds;

    static BasicCell full(size_t length) {
        return BasicCell{std::vector<CoordKind>(length, CoordKind::FullInterval)};
    }
    static BasicCell point(size_t length) {
        return BasicCell{std::vector<CoordKind>(length, CoordKind::Singleton)};
    }

    size_t length() const { return kinds.size(); }
    int dimension() const {
        int d = 0;
        for (auto k : kinds)
            if (k == CoordKind::FullInterval) ++d;
        return d;
    }
    // closed hull: [0,1] per interval coordinate, [0,0] per singleton
    Box closure_box() const {
        Box b;
        for (auto k : kinds)
            b.push_back(k == CoordKind::FullInterval ? Interval(Rational(0), Rational(1))
                                                     : Interval(Rational(0)));
        return b;
    }
    bool operator==(const BasicCell& o) const { return kinds == o.kinds; }
    std::string str() const;
};

// Continuous map from a basic cell with triangular coordinates: the i-th
// coordinate expression uses only Var(1..i) and is strictly increasing in
// Var(i) on interval coordinates (certified by check_cellular).
struct CellularMap {
    BasicCell domain;
    std::vector<ExprPtr> coords;

    size_t length() const { return coords.size(); }
    std::string str() const;
};

// A finite family of cellular pieces covering a target, with certificate
// digests linking to the evidence that produced it.
struct ParamPiece {
    CellularMap map;
    std::vector<std::uint64_t> cert_digests;
};

struct Parametrization {
    int r = 1;
    std::string target;
    std::vector<ParamPiece> pieces;
};

std::uint64_t fnv1a64(const std::string& s);

SExpr cell_to_sexpr(const BasicCell& c);
BasicCell cell_from_sexpr(const SExpr& s);
SExpr map_to_sexpr(const CellularMap& m);
CellularMap map_from_sexpr(const SExpr& s);
SExpr parametrization_to_sexpr(const Parametrization& p);
Parametrization parametrization_from_sexpr(const SExpr& s);

SExpr poly_to_sexpr(const Poly& p);
Poly poly_from_sexpr(const SExpr& s);
SExpr expr_to_sexpr(const ExprPtr& e);
ExprPtr expr_from_sexpr(const SExpr& s);

} // namespace cellparam
