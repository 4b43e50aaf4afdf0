#include "cellparam/cells.hpp"

#include <sstream>

namespace cellparam {

std::string BasicCell::str() const {
    std::string s = "(cell";
    for (auto k : kinds) s += k == CoordKind::FullInterval ? " I" : " 0";
    return s + ")";
}

std::string CellularMap::str() const {
    std::ostringstream os;
    os << "(map " << domain.str();
    for (const auto& c : coords) os << " " << c->str();
    os << ")";
    return os.str();
}

std::uint64_t fnv1a64(const std::string& s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

// ---------------------------------------------------------------------------
// s-expression serialization
// ---------------------------------------------------------------------------

SExpr cell_to_sexpr(const BasicCell& c) {
    std::vector<SExpr> items{SExpr::make_atom("cell")};
    for (auto k : c.kinds)
        items.push_back(SExpr::make_atom(k == CoordKind::FullInterval ? "I" : "0"));
    return SExpr::make_list(std::move(items));
}

BasicCell cell_from_sexpr(const SExpr& s) {
    if (s.head() != "cell") throw ParseError("expected (cell ...)", 0);
    BasicCell c;
    for (size_t i = 1; i < s.size(); ++i) {
        const auto& a = s.at(i);
        if (a.atom == "I") c.kinds.push_back(CoordKind::FullInterval);
        else if (a.atom == "0") c.kinds.push_back(CoordKind::Singleton);
        else throw ParseError("bad cell coordinate kind '" + a.atom + "'", 0);
    }
    return c;
}

SExpr poly_to_sexpr(const Poly& p) {
    std::vector<SExpr> items{SExpr::make_atom("poly")};
    std::vector<SExpr> vars{SExpr::make_atom("vars")};
    for (const auto& v : p.vars()) vars.push_back(SExpr::make_atom(v));
    items.push_back(SExpr::make_list(std::move(vars)));
    for (const auto& [e, c] : p.terms()) {
        std::vector<SExpr> term{SExpr::make_atom("term"), SExpr::make_atom(c.str())};
        std::vector<SExpr> exps;
        for (size_t i = 0; i < e.size(); ++i) {
            if (e[i] == 0) continue;
            exps.push_back(SExpr::make_list({SExpr::make_atom(p.vars()[i]),
                                             SExpr::make_atom(std::to_string(e[i]))}));
        }
        term.push_back(SExpr::make_list(std::move(exps)));
        items.push_back(SExpr::make_list(std::move(term)));
    }
    return SExpr::make_list(std::move(items));
}

Poly poly_from_sexpr(const SExpr& s) {
    if (s.head() != "poly") throw ParseError("expected (poly ...)", 0);
    const SExpr& vars_list = s.at(1);
    if (vars_list.head() != "vars") throw ParseError("expected (vars ...)", 0);
    std::vector<std::string> vars;
    for (size_t i = 1; i < vars_list.size(); ++i) vars.push_back(vars_list.at(i).atom);
    Poly p(vars);
    for (size_t t = 2; t < s.size(); ++t) {
        const SExpr& term = s.at(t);
        if (term.head() != "term") throw ParseError("expected (term coeff exps)", 0);
        Rational c = Rational::parse(term.at(1).atom);
        Poly::Exponents e(vars.size(), 0);
        const SExpr& exps = term.at(2);
        if (!exps.is_list) throw ParseError("expected exponent list", 0);
        for (const auto& pe : exps.items) {
            if (!pe.is_list || pe.size() != 2) throw ParseError("bad exponent pair", 0);
            int idx = p.var_index(pe.at(0).atom);
            if (idx < 0) throw ParseError("unknown variable '" + pe.at(0).atom + "'", 0);
            e[static_cast<size_t>(idx)] = static_cast<unsigned>(std::stoul(pe.at(1).atom));
        }
        p.add_term(e, c);
    }
    return p;
}

SExpr expr_to_sexpr(const ExprPtr& e) {
    switch (e->kind) {
        case Expr::Kind::Const:
            return SExpr::make_list({SExpr::make_atom("const"), SExpr::make_atom(e->cval.str())});
        case Expr::Kind::Var:
            return SExpr::make_list({SExpr::make_atom("var"), SExpr::make_atom(std::to_string(e->var))});
        case Expr::Kind::Add:
            return SExpr::make_list({SExpr::make_atom("+"), expr_to_sexpr(e->a), expr_to_sexpr(e->b)});
        case Expr::Kind::Sub:
            return SExpr::make_list({SExpr::make_atom("-"), expr_to_sexpr(e->a), expr_to_sexpr(e->b)});
        case Expr::Kind::Mul:
            return SExpr::make_list({SExpr::make_atom("*"), expr_to_sexpr(e->a), expr_to_sexpr(e->b)});
        case Expr::Kind::Pow:
            return SExpr::make_list({SExpr::make_atom("pow"), expr_to_sexpr(e->a),
                                     SExpr::make_atom(std::to_string(e->exponent))});
        case Expr::Kind::RootOf: {
            std::vector<SExpr> items{SExpr::make_atom("rootof"), poly_to_sexpr(e->rpoly),
                                     SExpr::make_atom(std::to_string(e->branch))};
            std::vector<SExpr> guard;
            for (const auto& g : e->guard_args)
                guard.push_back(SExpr::make_list({SExpr::make_atom(g.lo.str()), SExpr::make_atom(g.hi.str())}));
            guard.push_back(SExpr::make_list({SExpr::make_atom(e->guard_w.lo.str()),
                                              SExpr::make_atom(e->guard_w.hi.str())}));
            items.push_back(SExpr::make_list(std::move(guard)));
            for (const auto& arg : e->args) items.push_back(expr_to_sexpr(arg));
            return SExpr::make_list(std::move(items));
        }
    }
    throw std::logic_error("expr_to_sexpr: bad node");
}

ExprPtr expr_from_sexpr(const SExpr& s) {
    std::string h = s.head();
    if (h == "const") return Expr::constant(Rational::parse(s.at(1).atom));
    if (h == "var") return Expr::variable(std::stoi(s.at(1).atom));
    if (h == "+") return Expr::add(expr_from_sexpr(s.at(1)), expr_from_sexpr(s.at(2)));
    if (h == "-") return Expr::sub(expr_from_sexpr(s.at(1)), expr_from_sexpr(s.at(2)));
    if (h == "*") return Expr::mul(expr_from_sexpr(s.at(1)), expr_from_sexpr(s.at(2)));
    if (h == "pow")
        return Expr::pow(expr_from_sexpr(s.at(1)), static_cast<unsigned>(std::stoul(s.at(2).atom)));
    if (h == "rootof") {
        Poly p = poly_from_sexpr(s.at(1));
        int branch = std::stoi(s.at(2).atom);
        const SExpr& guard = s.at(3);
        if (!guard.is_list || guard.size() < 1) throw ParseError("rootof: bad guard box", 0);
        Box gargs;
        for (size_t i = 0; i + 1 < guard.size(); ++i) {
            const SExpr& iv = guard.at(i);
            gargs.push_back(Interval(Rational::parse(iv.at(0).atom), Rational::parse(iv.at(1).atom)));
        }
        const SExpr& wiv = guard.at(guard.size() - 1);
        Interval gw(Rational::parse(wiv.at(0).atom), Rational::parse(wiv.at(1).atom));
        std::vector<ExprPtr> args;
        for (size_t i = 4; i < s.size(); ++i) args.push_back(expr_from_sexpr(s.at(i)));
        if (args.empty() && gargs.empty() && s.size() == 4) {
            // nullary branch: allow defaulting the args to variables when the
            // polynomial has more than one variable
            if (p.arity() > 1) {
                for (size_t i = 0; i + 1 < p.arity(); ++i) args.push_back(Expr::variable(static_cast<int>(i) + 1));
                gargs = Box(p.arity() - 1, Interval(Rational(0), Rational(1)));
            }
        }
        return Expr::root_of(std::move(p), branch, std::move(gargs), gw, std::move(args));
    }
    throw ParseError("unknown expression head '" + h + "'", 0);
}

SExpr map_to_sexpr(const CellularMap& m) {
    std::vector<SExpr> items{SExpr::make_atom("map"), cell_to_sexpr(m.domain)};
    std::vector<SExpr> coords{SExpr::make_atom("coords")};
    for (const auto& c : m.coords) coords.push_back(expr_to_sexpr(c));
    items.push_back(SExpr::make_list(std::move(coords)));
    return SExpr::make_list(std::move(items));
}

CellularMap map_from_sexpr(const SExpr& s) {
    if (s.head() != "map") throw ParseError("expected (map ...)", 0);
    CellularMap m;
    m.domain = cell_from_sexpr(s.at(1));
    const SExpr& coords = s.at(2);
    if (coords.head() != "coords") throw ParseError("expected (coords ...)", 0);
    for (size_t i = 1; i < coords.size(); ++i) m.coords.push_back(expr_from_sexpr(coords.at(i)));
    return m;
}

SExpr parametrization_to_sexpr(const Parametrization& p) {
    std::vector<SExpr> items{SExpr::make_atom("parametrization"),
                             SExpr::make_list({SExpr::make_atom("r"), SExpr::make_atom(std::to_string(p.r))}),
                             SExpr::make_list({SExpr::make_atom("target"), SExpr::make_atom(p.target.empty() ? "-" : p.target)})};
    for (const auto& piece : p.pieces) {
        std::vector<SExpr> ps{SExpr::make_atom("piece"), map_to_sexpr(piece.map)};
        std::vector<SExpr> certs{SExpr::make_atom("certs")};
        for (auto d : piece.cert_digests) {
            std::ostringstream os;
            os << std::hex << d;
            certs.push_back(SExpr::make_atom(os.str()));
        }
        ps.push_back(SExpr::make_list(std::move(certs)));
        items.push_back(SExpr::make_list(std::move(ps)));
    }
    return SExpr::make_list(std::move(items));
}

Parametrization parametrization_from_sexpr(const SExpr& s) {
    if (s.head() != "parametrization") throw ParseError("expected (parametrization ...)", 0);
    Parametrization p;
    for (size_t i = 1; i < s.size(); ++i) {
        const SExpr& item = s.at(i);
        std::string h = item.head();
        if (h == "r") p.r = std::stoi(item.at(1).atom);
        else if (h == "target") p.target = item.at(1).atom;
        else if (h == "piece") {
            ParamPiece piece;
            piece.map = map_from_sexpr(item.at(1));
            if (item.size() > 2 && item.at(2).head() == "certs") {
                for (size_t j = 1; j < item.at(2).size(); ++j)
                    piece.cert_digests.push_back(std::stoull(item.at(2).at(j).atom, nullptr, 16));
            }
            p.pieces.push_back(std::move(piece));
        }
    }
    return p;
}

} // namespace cellparam
