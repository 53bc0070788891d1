// gcd.hpp — multivariate gcd (primitive PRS) and square-free parts.
#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "kohn/polynomial.hpp"

namespace kohn {

// Quotient of a by b when the division is exact, nullopt otherwise.
inline std::optional<Polynomial> exact_divide(const Polynomial& a, const Polynomial& b) {
    if (b.is_zero()) return std::nullopt;
    Polynomial r = a;
    Polynomial q(a.ring());
    auto [eb, cb] = b.leading_term(MonomialOrder::grevlex());
    GaussianRational cbi = cb.inverse();
    while (!r.is_zero()) {
        auto [er, cr] = r.leading_term(MonomialOrder::grevlex());
        if (!exps_divides(eb, er)) return std::nullopt;
        Polynomial t = Polynomial::monomial(a.ring(), exps_sub(er, eb), cr * cbi);
        q += t;
        r -= t * b;
    }
    return q;
}

inline bool divides_exactly(const Polynomial& b, const Polynomial& a) {
    return exact_divide(a, b).has_value();
}

namespace detail {

// View as univariate in `var` with polynomial coefficients.
inline std::map<unsigned, Polynomial> univariate_view(const Polynomial& p, size_t var) {
    std::map<unsigned, Polynomial> coeffs;
    for (const auto& [e, c] : p.terms()) {
        Exps rest = e;
        unsigned k = rest[var];
        rest[var] = 0;
        auto it = coeffs.find(k);
        if (it == coeffs.end()) it = coeffs.emplace(k, Polynomial::zero(p.ring())).first;
        it->second += Polynomial::monomial(p.ring(), rest, c);
    }
    return coeffs;
}

inline Polynomial from_univariate(const std::map<unsigned, Polynomial>& coeffs, size_t var,
                                  const RingPtr& ring) {
    Polynomial p(ring);
    Exps xe(ring->size(), 0);
    for (const auto& [k, c] : coeffs) {
        xe[var] = k;
        p += c * Polynomial::monomial(ring, xe, GaussianRational(1));
    }
    return p;
}

inline int main_variable(const Polynomial& a, const Polynomial& b) {
    for (size_t i = a.ring()->size(); i-- > 0;) {
        if (a.degree_in(i) > 0 || b.degree_in(i) > 0) return static_cast<int>(i);
    }
    return -1;
}

}  // namespace detail

Polynomial poly_gcd(const Polynomial& a, const Polynomial& b);

namespace detail {

inline Polynomial coeff_gcd(const std::map<unsigned, Polynomial>& coeffs, const RingPtr& ring) {
    Polynomial g = Polynomial::zero(ring);
    for (const auto& [k, c] : coeffs) {
        g = g.is_zero() ? c : poly_gcd(g, c);
        if (g.is_constant() && !g.is_zero()) break;
    }
    return g.monic();
}

// Pseudo-remainder of a by b in `var` (up to a unit factor, which the
// primitive normalization absorbs).
inline Polynomial pseudo_remainder(const Polynomial& a, const Polynomial& b, size_t var) {
    auto bu = univariate_view(b, var);
    unsigned db = bu.rbegin()->first;
    const Polynomial& lb = bu.rbegin()->second;
    Polynomial r = a;
    while (!r.is_zero()) {
        auto ru = univariate_view(r, var);
        unsigned dr = ru.rbegin()->first;
        if (dr < db) break;
        const Polynomial& lr = ru.rbegin()->second;
        Exps shift(r.ring()->size(), 0);
        shift[var] = dr - db;
        Polynomial mono = Polynomial::monomial(r.ring(), shift, GaussianRational(1));
        r = lb * r - lr * mono * b;
    }
    return r;
}

}  // namespace detail

// Monic-normalized gcd; divides both inputs exactly.
inline Polynomial poly_gcd(const Polynomial& a, const Polynomial& b) {
    if (a.is_zero() && b.is_zero()) throw std::invalid_argument("gcd of two zero polynomials");
    if (a.is_zero()) return b.monic();
    if (b.is_zero()) return a.monic();
    if (a.is_constant() || b.is_constant())
        return Polynomial::constant(a.ring(), GaussianRational(1));

    int mv = detail::main_variable(a, b);
    size_t x = static_cast<size_t>(mv);

    if (a.degree_in(x) == 0 || b.degree_in(x) == 0) {
        // One side is free of x: gcd must be x-free, so it divides the
        // other side's content.
        const Polynomial& xfree = a.degree_in(x) == 0 ? a : b;
        const Polynomial& other = a.degree_in(x) == 0 ? b : a;
        Polynomial cont = detail::coeff_gcd(detail::univariate_view(other, x), a.ring());
        return poly_gcd(cont, xfree).monic();
    }

    auto ua = detail::univariate_view(a, x);
    auto ub = detail::univariate_view(b, x);
    Polynomial ca = detail::coeff_gcd(ua, a.ring());
    Polynomial cb = detail::coeff_gcd(ub, a.ring());
    Polynomial cd = poly_gcd(ca, cb);

    Polynomial pa = *exact_divide(a, ca);
    Polynomial pb = *exact_divide(b, cb);
    if (pa.degree_in(x) < pb.degree_in(x)) std::swap(pa, pb);

    while (true) {
        Polynomial r = detail::pseudo_remainder(pa, pb, x);
        if (r.is_zero()) break;
        Polynomial rc = detail::coeff_gcd(detail::univariate_view(r, x), a.ring());
        pa = pb;
        pb = *exact_divide(r, rc);
    }
    return (cd * pb).monic();
}

// Product of distinct irreducible factors (monic) and the maximum factor
// multiplicity, via iterated gcd with the partial derivatives. No
// irreducible factorization is performed.
struct SquarefreeResult {
    Polynomial part;
    unsigned multiplicity;
};

inline SquarefreeResult squarefree_part(const Polynomial& p) {
    if (p.is_zero()) throw std::invalid_argument("squarefree_part of zero polynomial");
    if (p.is_constant()) return {Polynomial::constant(p.ring(), GaussianRational(1)), 1};

    auto partial_gcd = [](const Polynomial& q) {
        Polynomial g = q;
        for (size_t i = 0; i < q.ring()->size(); ++i) {
            Polynomial d = q.derivative(i);
            if (!d.is_zero()) g = poly_gcd(g, d);
        }
        return g.monic();
    };

    Polynomial sf = Polynomial::constant(p.ring(), GaussianRational(1));
    Polynomial cur = p;
    unsigned rounds = 0;
    while (!cur.is_constant()) {
        Polynomial nxt = partial_gcd(cur);
        if (rounds == 0) {
            auto q = exact_divide(cur, nxt);
            sf = q->monic();
        }
        ++rounds;
        cur = nxt;
    }
    return {sf, rounds == 0 ? 1u : rounds};
}

}  // namespace kohn
