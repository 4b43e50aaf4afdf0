#include "cellparam/poly.hpp"

#include <algorithm>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace cellparam {

bool deglex_less(const Poly::Exponents& a, const Poly::Exponents& b) {
    unsigned da = std::accumulate(a.begin(), a.end(), 0u);
    unsigned db = std::accumulate(b.begin(), b.end(), 0u);
    if (da != db) return da < db;
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

Poly Poly::constant(std::vector<std::string> vars, const Rational& c) {
    Poly p(std::move(vars));
    if (!c.is_zero()) p.terms_[Exponents(p.vars_.size(), 0)] = c;
    return p;
}

Poly Poly::variable(std::vector<std::string> vars, size_t index) {
    Poly p(std::move(vars));
    if (index >= p.vars_.size()) throw std::out_of_range("Poly::variable index");
    Exponents e(p.vars_.size(), 0);
    e[index] = 1;
    p.terms_[e] = Rational(1);
    return p;
}

bool Poly::is_constant() const {
    if (terms_.empty()) return true;
    if (terms_.size() != 1) return false;
    const auto& e = terms_.begin()->first;
    return std::all_of(e.begin(), e.end(), [](unsigned k) { return k == 0; });
}

Rational Poly::constant_value() const {
    if (terms_.empty()) return Rational(0);
    if (!is_constant()) throw std::domain_error("Poly::constant_value on non-constant");
    return terms_.begin()->second;
}

int Poly::var_index(const std::string& name) const {
    for (size_t i = 0; i < vars_.size(); ++i)
        if (vars_[i] == name) return static_cast<int>(i);
    return -1;
}

void Poly::add_term(const Exponents& e, const Rational& c) {
    if (e.size() != vars_.size()) throw std::invalid_argument("Poly::add_term exponent arity");
    if (c.is_zero()) return;
    auto it = terms_.find(e);
    if (it == terms_.end()) {
        terms_.emplace(e, c);
    } else {
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

int Poly::degree(size_t var) const {
    int d = -1;
    for (const auto& [e, c] : terms_) d = std::max(d, static_cast<int>(e[var]));
    return d;
}

int Poly::total_degree() const {
    int d = -1;
    for (const auto& [e, c] : terms_)
        d = std::max(d, static_cast<int>(std::accumulate(e.begin(), e.end(), 0u)));
    return d;
}

bool Poly::depends_on(size_t var) const {
    for (const auto& [e, c] : terms_)
        if (e[var] > 0) return true;
    return false;
}

void Poly::check_same_vars(const Poly& o) const {
    if (vars_ != o.vars_) throw std::invalid_argument("Poly: mismatched variable lists");
}

Poly Poly::operator-() const {
    Poly r(vars_);
    for (const auto& [e, c] : terms_) r.terms_[e] = -c;
    return r;
}

Poly Poly::operator+(const Poly& o) const {
    check_same_vars(o);
    Poly r = *this;
    for (const auto& [e, c] : o.terms_) r.add_term(e, c);
    return r;
}

Poly Poly::operator-(const Poly& o) const {
    check_same_vars(o);
    Poly r = *this;
    for (const auto& [e, c] : o.terms_) r.add_term(e, -c);
    return r;
}

Poly Poly::operator*(const Poly& o) const {
    check_same_vars(o);
    Poly r(vars_);
    for (const auto& [ea, ca] : terms_) {
        for (const auto& [eb, cb] : o.terms_) {
            Exponents e(ea.size());
            for (size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
            r.add_term(e, ca * cb);
        }
    }
    return r;
}

Poly Poly::operator*(const Rational& c) const {
    Poly r(vars_);
    if (c.is_zero()) return r;
    for (const auto& [e, k] : terms_) r.terms_[e] = k * c;
    return r;
}

Poly Poly::pow(unsigned e) const {
    Poly r = Poly::constant(vars_, Rational(1));
    Poly base = *this;
    while (e) {
        if (e & 1u) r = r * base;
        if (e >>= 1u) base = base * base;
    }
    return r;
}

Poly Poly::derivative(size_t var) const {
    if (var >= vars_.size()) throw std::out_of_range("Poly::derivative: unknown variable");
    Poly r(vars_);
    for (const auto& [e, c] : terms_) {
        if (e[var] == 0) continue;
        Exponents d = e;
        d[var] -= 1;
        r.add_term(d, c * Rational(static_cast<int>(e[var])));
    }
    return r;
}

std::vector<Poly> Poly::coefficients_wrt(size_t var) const {
    int d = degree(var);
    std::vector<Poly> out(static_cast<size_t>(std::max(d, -1) + 1), Poly(vars_));
    for (const auto& [e, c] : terms_) {
        Exponents stripped = e;
        unsigned k = stripped[var];
        stripped[var] = 0;
        out[k].add_term(stripped, c);
    }
    return out;
}

Poly Poly::leading_coefficient_wrt(size_t var) const {
    int d = degree(var);
    Poly r(vars_);
    if (d < 0) return r;
    for (const auto& [e, c] : terms_) {
        if (static_cast<int>(e[var]) != d) continue;
        Exponents stripped = e;
        stripped[var] = 0;
        r.add_term(stripped, c);
    }
    return r;
}

Poly Poly::substitute(size_t var, const Rational& value) const {
    Poly r(vars_);
    for (const auto& [e, c] : terms_) {
        Exponents stripped = e;
        unsigned k = stripped[var];
        stripped[var] = 0;
        r.add_term(stripped, c * value.pow(k));
    }
    return r;
}

Poly Poly::substitute(size_t var, const Poly& value) const {
    check_same_vars(value);
    // Horner in the substituted variable.
    auto coeffs = coefficients_wrt(var);
    Poly r(vars_);
    for (size_t i = coeffs.size(); i-- > 0;) {
        r = r * value + coeffs[i];
    }
    return r;
}

Rational Poly::evaluate(const std::vector<Rational>& point) const {
    if (point.size() != vars_.size()) throw std::invalid_argument("Poly::evaluate point arity");
    Rational acc(0);
    for (const auto& [e, c] : terms_) {
        Rational t = c;
        for (size_t i = 0; i < e.size(); ++i)
            if (e[i]) t *= point[i].pow(e[i]);
        acc += t;
    }
    return acc;
}

namespace {

// Leading term under deglex; requires non-zero polynomial.
std::pair<Poly::Exponents, Rational> leading_term(const Poly& p) {
    const auto& terms = p.terms();
    auto best = terms.begin();
    for (auto it = std::next(terms.begin()); it != terms.end(); ++it)
        if (deglex_less(best->first, it->first)) best = it;
    return {best->first, best->second};
}

bool exponents_divide(const Poly::Exponents& d, const Poly::Exponents& n) {
    for (size_t i = 0; i < d.size(); ++i)
        if (d[i] > n[i]) return false;
    return true;
}

} // namespace

Poly Poly::divide_exact(const Poly& divisor) const {
    check_same_vars(divisor);
    if (divisor.is_zero()) throw std::domain_error("Poly::divide_exact: zero divisor");
    Poly rem = *this;
    Poly quot(vars_);
    auto [de, dc] = leading_term(divisor);
    while (!rem.is_zero()) {
        auto [re, rc] = leading_term(rem);
        if (!exponents_divide(de, re))
            throw std::domain_error("Poly::divide_exact: not divisible");
        Exponents qe(re.size());
        for (size_t i = 0; i < qe.size(); ++i) qe[i] = re[i] - de[i];
        Rational qc = rc / dc;
        Poly t(vars_);
        t.add_term(qe, qc);
        quot = quot + t;
        rem = rem - t * divisor;
    }
    return quot;
}

Poly Poly::primitive_normalized() const {
    if (is_zero()) return *this;
    // Rational content: gcd of numerators over lcm of denominators, in one
    // pass; dividing by any common rational multiple suffices here.
    Integer num_gcd(0), den_lcm(1);
    for (const auto& [e, c] : terms_) {
        mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), c.num().get_mpz_t());
        mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), c.den().get_mpz_t());
    }
    Rational content(num_gcd, den_lcm);
    auto [le, lc] = leading_term(*this);
    if (lc.sign() < 0) content = -content;
    return *this * content.reciprocal();
}

std::optional<std::vector<Rational>> Poly::to_univariate(size_t var) const {
    for (const auto& [e, c] : terms_)
        for (size_t i = 0; i < e.size(); ++i)
            if (i != var && e[i] > 0) return std::nullopt;
    std::vector<Rational> out(static_cast<size_t>(std::max(degree(var), 0)) + 1, Rational(0));
    if (is_zero()) return std::vector<Rational>{};
    for (const auto& [e, c] : terms_) out[e[var]] = c;
    return out;
}

Poly Poly::from_univariate(std::vector<std::string> vars, size_t var,
                           const std::vector<Rational>& coeffs) {
    Poly p(std::move(vars));
    for (size_t k = 0; k < coeffs.size(); ++k) {
        if (coeffs[k].is_zero()) continue;
        Exponents e(p.vars_.size(), 0);
        e[var] = static_cast<unsigned>(k);
        p.terms_[e] = coeffs[k];
    }
    return p;
}

Poly Poly::with_vars(std::vector<std::string> vars) const {
    if (vars.size() != vars_.size()) throw std::invalid_argument("Poly::with_vars arity");
    Poly p(std::move(vars));
    p.terms_ = terms_;
    return p;
}

std::string Poly::str() const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    // Print highest deglex terms first.
    std::vector<const TermMap::value_type*> ordered;
    for (const auto& t : terms_) ordered.push_back(&t);
    std::sort(ordered.begin(), ordered.end(), [](auto* a, auto* b) {
        return deglex_less(b->first, a->first);
    });
    for (auto* t : ordered) {
        const auto& [e, c] = *t;
        if (!first) os << (c.sign() < 0 ? " - " : " + ");
        else if (c.sign() < 0) os << "-";
        first = false;
        Rational a = c.abs();
        bool unit = (a == Rational(1));
        bool has_var = std::any_of(e.begin(), e.end(), [](unsigned k) { return k > 0; });
        if (!unit || !has_var) os << a.str();
        bool started = !unit || !has_var;
        for (size_t i = 0; i < e.size(); ++i) {
            if (e[i] == 0) continue;
            if (started) os << "*";
            os << vars_[i];
            if (e[i] > 1) os << "^" << e[i];
            started = true;
        }
    }
    return os.str();
}

std::ostream& operator<<(std::ostream& os, const Poly& p) { return os << p.str(); }

} // namespace cellparam
