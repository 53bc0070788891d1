// Shared helpers for the test suites: ring shorthands and seeded random
// polynomial generators.
#pragma once

#include <random>
#include <string>
#include <vector>

#include "kohn/parse.hpp"
#include "kohn/polynomial.hpp"
#include "kohn/print.hpp"

namespace kohn::test {

inline RingPtr ring_zw() { return make_ring({"z", "w"}); }
inline RingPtr ring_zwu() { return make_ring({"z", "w", "u"}); }

inline Polynomial P(const RingPtr& r, const std::string& s) { return parse_poly(s, r); }

using Rng = std::mt19937_64;

inline Rat random_rat(Rng& rng, long lo = -3, long hi = 3) {
    std::uniform_int_distribution<long> num(lo, hi);
    std::uniform_int_distribution<long> den(1, 3);
    return make_rat(num(rng), den(rng));
}

inline GaussianRational random_coeff(Rng& rng, bool allow_imag = true) {
    GaussianRational c(random_rat(rng));
    if (allow_imag && std::uniform_int_distribution<int>(0, 3)(rng) == 0)
        c.im = random_rat(rng);
    return c;
}

inline Polynomial random_poly(const RingPtr& ring, Rng& rng, unsigned max_deg = 4,
                              unsigned max_terms = 4, bool allow_imag = true) {
    Polynomial p(ring);
    std::uniform_int_distribution<unsigned> nterms(1, max_terms);
    std::uniform_int_distribution<unsigned> deg(0, max_deg);
    unsigned t = nterms(rng);
    for (unsigned i = 0; i < t; ++i) {
        Exps e(ring->size(), 0);
        unsigned budget = deg(rng);
        for (size_t v = 0; v < ring->size(); ++v) {
            std::uniform_int_distribution<unsigned> pick(0, budget);
            unsigned ev = pick(rng);
            e[v] = ev;
            budget -= ev;
        }
        p.add_term(e, random_coeff(rng, allow_imag));
    }
    return p;
}

inline Polynomial random_nonzero_poly(const RingPtr& ring, Rng& rng, unsigned max_deg = 4,
                                      unsigned max_terms = 4, bool allow_imag = true) {
    for (int tries = 0; tries < 64; ++tries) {
        Polynomial p = random_poly(ring, rng, max_deg, max_terms, allow_imag);
        if (!p.is_zero()) return p;
    }
    return Polynomial::constant(ring, GaussianRational(1));
}

}  // namespace kohn::test
