#pragma once

#include <gmpxx.h>
#include <string>
#include <iosfwd>
#include <cstdint>

namespace cellparam {

using Integer = mpz_class;

// Exact rational number in canonical form (gcd(num, den) = 1, den > 0).
// Thin wrapper over GMP's mpq_class; every constructor canonicalizes, so
// the invariant holds for all reachable values.
class Rational {
public:
    Rational() : v_(0) {}
    Rational(int n) : v_(n) {}
    Rational(long n) : v_(n) {}
    Rational(const Integer& n) : v_(n) {}
    Rational(int n, int d);
    Rational(const Integer& n, const Integer& d);
    explicit Rational(const mpq_class& q) : v_(q) { v_.canonicalize(); }

    // Parses "p/q" or "p" with optional leading '-'. Throws std::invalid_argument.
    static Rational parse(const std::string& s);

    const Integer num() const { return v_.get_num(); }
    const Integer den() const { return v_.get_den(); }
    const mpq_class& raw() const { return v_; }

    int sign() const { return sgn(v_); }
    bool is_zero() const { return sgn(v_) == 0; }
    bool is_integer() const { return v_.get_den() == 1; }

    Rational operator-() const { return Rational(mpq_class(-v_)); }
    Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
    Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
    Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
    Rational& operator/=(const Rational& o);

    friend Rational operator+(Rational a, const Rational& b) { a += b; return a; }
    friend Rational operator-(Rational a, const Rational& b) { a -= b; return a; }
    friend Rational operator*(Rational a, const Rational& b) { a *= b; return a; }
    friend Rational operator/(Rational a, const Rational& b) { a /= b; return a; }

    friend bool operator==(const Rational& a, const Rational& b) { return mpq_cmp(a.v_.get_mpq_t(), b.v_.get_mpq_t()) == 0; }
    friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
    friend bool operator<(const Rational& a, const Rational& b) { return mpq_cmp(a.v_.get_mpq_t(), b.v_.get_mpq_t()) < 0; }
    friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
    friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
    friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

    Rational abs() const { return sign() < 0 ? -*this : *this; }
    Rational pow(unsigned e) const;
    Rational reciprocal() const;

    // Largest multiple of 2^-bits that is <= *this (resp. smallest >=).
    // Used for outward rounding of interval endpoints.
    Rational floor_dyadic(unsigned bits) const;
    Rational ceil_dyadic(unsigned bits) const;

    // Total size of numerator and denominator in bits; cheap blow-up probe.
    size_t bit_size() const;

    double to_double() const { return v_.get_d(); }
    std::string str() const;

    friend std::ostream& operator<<(std::ostream& os, const Rational& r);

private:
    mpq_class v_;
};

inline Rational min(const Rational& a, const Rational& b) { return a < b ? a : b; }
inline Rational max(const Rational& a, const Rational& b) { return a < b ? b : a; }

// Floor/ceil to Integer.
Integer floor_int(const Rational& r);
Integer ceil_int(const Rational& r);

} // namespace cellparam
