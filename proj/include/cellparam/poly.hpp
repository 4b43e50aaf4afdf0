#pragma once

#include "cellparam/rational.hpp"

#include <map>
#include <string>
#include <vector>
#include <optional>
#include <iosfwd>

namespace cellparam {

// Exact multivariate polynomial over Q with an ordered list of named
// variables. Exponent vectors always have length vars().size(); zero
// coefficients are never stored.
class Poly {
public:
    using Exponents = std::vector<unsigned>;
    using TermMap = std::map<Exponents, Rational>;

    Poly() = default;
    explicit Poly(std::vector<std::string> vars) : vars_(std::move(vars)) {}

    static Poly constant(std::vector<std::string> vars, const Rational& c);
    static Poly variable(std::vector<std::string> vars, size_t index);

    const std::vector<std::string>& vars() const { return vars_; }
    size_t arity() const { return vars_.size(); }
    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    Rational constant_value() const; // requires is_constant()

    int var_index(const std::string& name) const; // -1 if absent

    void add_term(const Exponents& e, const Rational& c);

    int degree(size_t var) const;      // -1 for the zero polynomial
    int total_degree() const;          // -1 for the zero polynomial
    bool depends_on(size_t var) const;

    Poly operator-() const;
    Poly operator+(const Poly& o) const;
    Poly operator-(const Poly& o) const;
    Poly operator*(const Poly& o) const;
    Poly operator*(const Rational& c) const;
    bool operator==(const Poly& o) const { return vars_ == o.vars_ && terms_ == o.terms_; }
    Poly pow(unsigned e) const;

    Poly derivative(size_t var) const;

    // Coefficients with respect to one variable: result[k] is the
    // coefficient of var^k, expressed over the same variable list (with
    // exponent 0 in `var`).
    std::vector<Poly> coefficients_wrt(size_t var) const;
    Poly leading_coefficient_wrt(size_t var) const;

    // Substitutions. The variable list is unchanged.
    Poly substitute(size_t var, const Rational& value) const;
    Poly substitute(size_t var, const Poly& value) const;

    Rational evaluate(const std::vector<Rational>& point) const;

    // Exact division; throws std::domain_error when the division is not exact.
    Poly divide_exact(const Poly& divisor) const;

    // Divides by the rational content and normalizes the deglex-leading
    // coefficient to be positive. Canonical representative up to units.
    Poly primitive_normalized() const;

    // Restricts a polynomial that depends on a single variable to a dense
    // univariate coefficient vector (low-to-high). Fails if it depends on
    // more than one variable. Constants give a length-<=1 vector.
    std::optional<std::vector<Rational>> to_univariate(size_t var) const;

    static Poly from_univariate(std::vector<std::string> vars, size_t var,
                                const std::vector<Rational>& coeffs);

    // Renames the variable list (sizes must match).
    Poly with_vars(std::vector<std::string> vars) const;

    std::string str() const;
    friend std::ostream& operator<<(std::ostream& os, const Poly& p);

private:
    std::vector<std::string> vars_;
    TermMap terms_;

    void check_same_vars(const Poly& o) const;
};

// deglex comparison of exponent vectors (total degree first, then lex).
bool deglex_less(const Poly::Exponents& a, const Poly::Exponents& b);

} // namespace cellparam
