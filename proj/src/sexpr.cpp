#include "cellparam/sexpr.hpp"

#include <cctype>
#include <sstream>

namespace cellparam {

const SExpr& SExpr::at(size_t i) const {
    if (!is_list || i >= items.size())
        throw ParseError("s-expression: missing item " + std::to_string(i), 0);
    return items[i];
}

std::string SExpr::head() const {
    if (is_list && !items.empty() && items[0].is_atom()) return items[0].atom;
    return "";
}

std::string SExpr::str() const {
    if (is_atom()) return atom;
    std::ostringstream os;
    os << "(";
    for (size_t i = 0; i < items.size(); ++i) {
        if (i) os << " ";
        os << items[i].str();
    }
    os << ")";
    return os.str();
}

namespace {

struct Cursor {
    const std::string& s;
    size_t pos = 0;

    void skip_ws() {
        while (pos < s.size()) {
            if (std::isspace(static_cast<unsigned char>(s[pos]))) { ++pos; continue; }
            if (s[pos] == ';') { // comment to end of line
                while (pos < s.size() && s[pos] != '\n') ++pos;
                continue;
            }
            break;
        }
    }
    bool done() { skip_ws(); return pos >= s.size(); }
};

SExpr parse_one(Cursor& c) {
    c.skip_ws();
    if (c.pos >= c.s.size()) throw ParseError("unexpected end of input", c.pos);
    char ch = c.s[c.pos];
    if (ch == ')') throw ParseError("unexpected ')'", c.pos);
    if (ch == '(') {
        ++c.pos;
        std::vector<SExpr> items;
        while (true) {
            c.skip_ws();
            if (c.pos >= c.s.size()) throw ParseError("unterminated list", c.pos);
            if (c.s[c.pos] == ')') { ++c.pos; break; }
            items.push_back(parse_one(c));
        }
        return SExpr::make_list(std::move(items));
    }
    size_t start = c.pos;
    while (c.pos < c.s.size()) {
        char x = c.s[c.pos];
        if (std::isspace(static_cast<unsigned char>(x)) || x == '(' || x == ')' || x == ';') break;
        ++c.pos;
    }
    if (c.pos == start) throw ParseError("empty token", c.pos);
    return SExpr::make_atom(c.s.substr(start, c.pos - start));
}

} // namespace

SExpr SExpr::parse(const std::string& text) {
    Cursor c{text};
    SExpr e = parse_one(c);
    if (!c.done()) throw ParseError("trailing content after expression", c.pos);
    return e;
}

std::vector<SExpr> SExpr::parse_all(const std::string& text) {
    Cursor c{text};
    std::vector<SExpr> out;
    while (!c.done()) out.push_back(parse_one(c));
    return out;
}

} // namespace cellparam
