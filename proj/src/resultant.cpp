#include "cellparam/resultant.hpp"

#include <stdexcept>
#include <vector>

namespace cellparam {

namespace {

// Fraction-free Bareiss determinant of a square polynomial matrix.
Poly bareiss_det(std::vector<std::vector<Poly>> m, const std::vector<std::string>& vars) {
    const size_t n = m.size();
    if (n == 0) return Poly::constant(vars, Rational(1));
    int sign = 1;
    Poly prev = Poly::constant(vars, Rational(1));
    for (size_t k = 0; k + 1 < n; ++k) {
        if (m[k][k].is_zero()) {
            size_t swap_row = k + 1;
            while (swap_row < n && m[swap_row][k].is_zero()) ++swap_row;
            if (swap_row == n) return Poly(vars); // singular
            std::swap(m[k], m[swap_row]);
            sign = -sign;
        }
        for (size_t i = k + 1; i < n; ++i) {
            for (size_t j = k + 1; j < n; ++j) {
                Poly num = m[i][j] * m[k][k] - m[i][k] * m[k][j];
                m[i][j] = num.is_zero() ? Poly(vars) : num.divide_exact(prev);
            }
            m[i][k] = Poly(vars);
        }
        prev = m[k][k];
    }
    Poly det = m[n - 1][n - 1];
    return sign < 0 ? -det : det;
}

} // namespace

Poly poly_resultant(const Poly& p, const Poly& q, size_t var) {
    int dp = p.degree(var), dq = q.degree(var);
    if (dp <= 0 || dq <= 0) {
        // Constant-in-var edge cases still have a well-defined resultant.
        if (dp > 0 && dq == 0) return q.pow(static_cast<unsigned>(dp));
        if (dq > 0 && dp == 0) return p.pow(static_cast<unsigned>(dq));
        throw std::domain_error("poly_resultant: input constant in eliminated variable");
    }
    auto pc = p.coefficients_wrt(var); // pc[k] multiplies var^k
    auto qc = q.coefficients_wrt(var);
    const auto& vars = p.vars();
    const size_t n = static_cast<size_t>(dp + dq);
    std::vector<std::vector<Poly>> m(n, std::vector<Poly>(n, Poly(vars)));
    // dq rows of p's coefficients, high to low degree
    for (int r = 0; r < dq; ++r)
        for (int k = 0; k <= dp; ++k) m[static_cast<size_t>(r)][static_cast<size_t>(r + k)] = pc[static_cast<size_t>(dp - k)];
    // dp rows of q's coefficients
    for (int r = 0; r < dp; ++r)
        for (int k = 0; k <= dq; ++k) m[static_cast<size_t>(dq + r)][static_cast<size_t>(r + k)] = qc[static_cast<size_t>(dq - k)];
    return bareiss_det(std::move(m), vars);
}

Poly poly_discriminant(const Poly& p, size_t var) {
    int d = p.degree(var);
    if (d <= 0) throw std::domain_error("poly_discriminant: constant in variable");
    if (d == 1) return Poly::constant(p.vars(), Rational(1));
    Poly res = poly_resultant(p, p.derivative(var), var);
    Poly lc = p.leading_coefficient_wrt(var);
    return res.divide_exact(lc);
}

} // namespace cellparam
