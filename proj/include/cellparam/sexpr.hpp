#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace cellparam {

struct ParseError : std::runtime_error {
    size_t position;
    ParseError(const std::string& msg, size_t pos)
        : std::runtime_error(msg + " (at offset " + std::to_string(pos) + ")"), position(pos) {}
};

// Minimal s-expression tree: atoms are uninterpreted tokens.
struct SExpr {
    bool is_list = false;
    std::string atom;
    std::vector<SExpr> items;

    static SExpr make_atom(std::string a) { return SExpr{false, std::move(a), {}}; }
    static SExpr make_list(std::vector<SExpr> xs) { return SExpr{true, "", std::move(xs)}; }

    bool is_atom() const { return !is_list; }
    const SExpr& at(size_t i) const;
    size_t size() const { return items.size(); }

    // First item as symbol; "" when not applicable.
    std::string head() const;

    std::string str() const;

    static SExpr parse(const std::string& text);                // exactly one expression
    static std::vector<SExpr> parse_all(const std::string& text);
};

} // namespace cellparam
