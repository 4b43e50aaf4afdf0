#pragma once

// Test-only oracles, implemented independently of the library's production
// algorithms: Sturm chains for root counting (the library isolates with
// Descartes bisection) and helpers for randomized inputs.

#include "cellparam/upoly.hpp"
#include "cellparam/poly.hpp"

#include <random>

namespace oracles {

using cellparam::Rational;
using cellparam::UPoly;

// Number of distinct real roots of p in the half-open interval (a, b].
inline int sturm_count(const UPoly& p_in, const Rational& a, const Rational& b) {
    using namespace cellparam;
    UPoly p = up_squarefree(p_in);
    std::vector<UPoly> chain{p, up_derivative(p)};
    while (!chain.back().empty() && up_degree(chain.back()) > 0) {
        auto [q, r] = up_divrem(chain[chain.size() - 2], chain.back());
        for (auto& c : r) c = -c;
        up_trim(r);
        if (r.empty()) break;
        chain.push_back(r);
    }
    auto variations = [&](const Rational& x) {
        int v = 0, last = 0;
        for (const auto& f : chain) {
            int s = up_sign_at(f, x);
            if (s == 0) continue;
            if (last != 0 && s != last) ++v;
            last = s;
        }
        return v;
    };
    return variations(a) - variations(b);
}

// Sign changes of p over a uniform grid on [a, b]; a lower bound for the
// number of roots, equal to it when the grid resolves all of them.
inline int grid_sign_changes(const UPoly& p, const Rational& a, const Rational& b, int n) {
    using namespace cellparam;
    int changes = 0, last = 0;
    for (int i = 0; i <= n; ++i) {
        Rational x = a + (b - a) * Rational(i, n);
        int s = up_sign_at(p, x);
        if (s == 0) continue;
        if (last != 0 && s != last) ++changes;
        last = s;
    }
    return changes;
}

inline UPoly random_upoly(std::mt19937_64& rng, int max_degree, int coeff_bound) {
    std::uniform_int_distribution<int> cd(-coeff_bound, coeff_bound);
    std::uniform_int_distribution<int> dd(1, max_degree);
    int deg = dd(rng);
    UPoly p(static_cast<size_t>(deg) + 1, Rational(0));
    for (auto& c : p) c = Rational(cd(rng));
    while (p.back().is_zero()) p.back() = Rational(cd(rng));
    return p;
}

inline cellparam::Poly random_poly2(std::mt19937_64& rng, int max_deg, int coeff_bound,
                                    std::vector<std::string> vars = {"x", "y"}) {
    using namespace cellparam;
    std::uniform_int_distribution<int> cd(-coeff_bound, coeff_bound);
    Poly p(vars);
    if (vars.size() == 1) {
        for (int i = 0; i <= max_deg; ++i) {
            int c = cd(rng);
            if (c != 0) p.add_term({static_cast<unsigned>(i)}, Rational(c));
        }
        return p;
    }
    for (int i = 0; i <= max_deg; ++i)
        for (int j = 0; i + j <= max_deg; ++j) {
            int c = cd(rng);
            if (c != 0) p.add_term({static_cast<unsigned>(i), static_cast<unsigned>(j)}, Rational(c));
        }
    return p;
}

} // namespace oracles
