#include "cellparam/rational.hpp"

#include <ostream>
#include <stdexcept>

namespace cellparam {

Rational::Rational(int n, int d) : v_(n, d) {
    if (d == 0) throw std::invalid_argument("Rational: zero denominator");
    v_.canonicalize();
}

Rational::Rational(const Integer& n, const Integer& d) : v_(mpq_class(n) / 1) {
    if (sgn(d) == 0) throw std::invalid_argument("Rational: zero denominator");
    v_ = mpq_class(n);
    v_ /= mpq_class(d);
    v_.canonicalize();
}

Rational& Rational::operator/=(const Rational& o) {
    if (o.is_zero()) throw std::invalid_argument("Rational: division by zero");
    v_ /= o.v_;
    return *this;
}

Rational Rational::parse(const std::string& s) {
    if (s.empty()) throw std::invalid_argument("Rational::parse: empty string");
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos) {
            mpq_class q(s, 10);
            q.canonicalize();
            return Rational(q);
        }
        std::string ns = s.substr(0, slash), ds = s.substr(slash + 1);
        if (ns.empty() || ds.empty()) throw std::invalid_argument("bad rational");
        mpz_class n(ns, 10), d(ds, 10);
        if (sgn(d) == 0) throw std::invalid_argument("zero denominator");
        mpq_class q(n);
        q /= mpq_class(d);
        q.canonicalize();
        return Rational(q);
    } catch (const std::invalid_argument&) {
        throw std::invalid_argument("Rational::parse: malformed rational '" + s + "'");
    }
}

Rational Rational::pow(unsigned e) const {
    mpq_class r(1);
    mpq_class base = v_;
    unsigned k = e;
    while (k) {
        if (k & 1u) r *= base;
        base *= base;
        k >>= 1u;
    }
    return Rational(r);
}

Rational Rational::reciprocal() const {
    if (is_zero()) throw std::invalid_argument("Rational: reciprocal of zero");
    mpq_class r;
    mpq_inv(r.get_mpq_t(), v_.get_mpq_t());
    return Rational(r);
}

Rational Rational::floor_dyadic(unsigned bits) const {
    mpz_class scaled;
    mpz_class num = v_.get_num(), den = v_.get_den();
    num <<= bits;
    mpz_fdiv_q(scaled.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    mpq_class r(scaled);
    r /= mpq_class(mpz_class(1) << bits);
    r.canonicalize();
    return Rational(r);
}

Rational Rational::ceil_dyadic(unsigned bits) const {
    mpz_class scaled;
    mpz_class num = v_.get_num(), den = v_.get_den();
    num <<= bits;
    mpz_cdiv_q(scaled.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    mpq_class r(scaled);
    r /= mpq_class(mpz_class(1) << bits);
    r.canonicalize();
    return Rational(r);
}

size_t Rational::bit_size() const {
    return mpz_sizeinbase(v_.get_num().get_mpz_t(), 2) + mpz_sizeinbase(v_.get_den().get_mpz_t(), 2);
}

std::string Rational::str() const {
    if (is_integer()) return v_.get_num().get_str();
    return v_.get_num().get_str() + "/" + v_.get_den().get_str();
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

Integer floor_int(const Rational& r) {
    mpz_class q;
    mpz_fdiv_q(q.get_mpz_t(), r.num().get_mpz_t(), r.den().get_mpz_t());
    return q;
}

Integer ceil_int(const Rational& r) {
    mpz_class q;
    mpz_cdiv_q(q.get_mpz_t(), r.num().get_mpz_t(), r.den().get_mpz_t());
    return q;
}

} // namespace cellparam
