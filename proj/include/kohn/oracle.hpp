// oracle.hpp — brute-force cross-checks: degree-truncated linear-algebra
// membership, staircase colength, and the effective type, all by exact
// Gaussian elimination. Deliberately independent of the Groebner engine.
#pragma once

#include <map>
#include <stdexcept>
#include <vector>

#include "kohn/linalg.hpp"
#include "kohn/monomial_order.hpp"
#include "kohn/polynomial.hpp"

namespace kohn::oracle {

struct TruncationFrame {
    RingPtr ring;
    unsigned d;
    std::vector<Exps> monomials;  // all monomials of degree <= d, stable order
    std::map<Exps, size_t, GrevlexLess> index;
};

inline TruncationFrame make_frame(const RingPtr& ring, unsigned d) {
    TruncationFrame f;
    f.ring = ring;
    f.d = d;
    f.monomials = exponents_up_to_degree(ring->size(), d);
    for (size_t i = 0; i < f.monomials.size(); ++i) f.index.emplace(f.monomials[i], i);
    return f;
}

inline GVec to_vector(const TruncationFrame& f, const Polynomial& p) {
    GVec v(f.monomials.size(), GaussianRational(0));
    for (const auto& [e, c] : p.terms()) {
        auto it = f.index.find(e);
        if (it == f.index.end()) throw std::invalid_argument("oracle: degree cap violated");
        v[it->second] = c;
    }
    return v;
}

// Row space of all products monomial * generator of degree <= d, in reduced
// row echelon form. Decides membership of any p with deg(p) <= d among
// combinations sum G_i g_i with deg(G_i g_i) <= d.
struct MembershipFrame {
    TruncationFrame frame;
    GMat rows;                   // rref
    std::vector<size_t> pivots;
    unsigned max_gen_degree = 0;
};

inline MembershipFrame make_membership_frame(const std::vector<Polynomial>& gens, unsigned d) {
    if (gens.empty()) throw std::invalid_argument("oracle: no generators");
    const RingPtr& ring = gens[0].ring();
    MembershipFrame mf;
    mf.frame = make_frame(ring, d);
    for (const auto& g : gens) {
        if (g.is_zero()) continue;
        mf.max_gen_degree = std::max(mf.max_gen_degree, g.total_degree());
    }
    if (mf.max_gen_degree > d) throw std::invalid_argument("oracle: cap below generator degree");
    for (const auto& g : gens) {
        if (g.is_zero()) continue;
        unsigned room = d - g.total_degree();
        for (const Exps& mu : exponents_up_to_degree(ring->size(), room)) {
            Polynomial prod = Polynomial::monomial(ring, mu, GaussianRational(1)) * g;
            mf.rows.push_back(to_vector(mf.frame, prod));
        }
    }
    mf.pivots = rref(mf.rows);
    return mf;
}

inline bool member(const MembershipFrame& mf, const Polynomial& p) {
    GVec v = to_vector(mf.frame, p);
    reduce_against(mf.rows, mf.pivots, v);
    return is_zero_vec(v);
}

// True iff p is a combination sum G_i g_i with deg(G_i g_i) <= d.
inline bool member_linalg(const std::vector<Polynomial>& gens, const Polynomial& p, unsigned d) {
    if (p.total_degree() > d) throw std::invalid_argument("oracle: probe degree above cap");
    return member(make_membership_frame(gens, d), p);
}

struct OracleCapExceeded : std::runtime_error {
    unsigned cap;
    explicit OracleCapExceeded(unsigned c)
        : std::runtime_error("oracle: no full monomial degree found up to cap " + std::to_string(c)),
          cap(c) {}
};

inline unsigned type_bruteforce_frame(const MembershipFrame& mf) {
    const RingPtr& ring = mf.frame.ring;
    for (unsigned k = 1; k <= mf.frame.d; ++k) {
        bool all = true;
        for (const Exps& e : exponents_of_degree(ring->size(), k)) {
            if (!member(mf, Polynomial::monomial(ring, e, GaussianRational(1)))) {
                all = false;
                break;
            }
        }
        if (all) return k;
    }
    throw OracleCapExceeded(mf.frame.d);
}

// Least k <= d such that every degree-k monomial is a member.
inline unsigned type_bruteforce(const std::vector<Polynomial>& gens, unsigned d) {
    return type_bruteforce_frame(make_membership_frame(gens, d));
}

// Dimension of the quotient by the ideal, computed inside the truncation:
// colength = rank(S + span{monomials of degree < k}) - rank(S), where S is
// the product row space. Valid because m^k <= I pins every decision below
// degree k inside the frame.
inline unsigned colength_staircase_frame(const MembershipFrame& mf) {
    unsigned k = type_bruteforce_frame(mf);
    if (k + mf.max_gen_degree > mf.frame.d + 1)
        throw std::invalid_argument("oracle: cap too small for colength (need d >= k-1+maxdeg)");
    const RingPtr& ring = mf.frame.ring;
    GMat aug = mf.rows;
    for (const Exps& e : exponents_up_to_degree(ring->size(), k - 1)) {
        GVec unit(mf.frame.monomials.size(), GaussianRational(0));
        unit[mf.frame.index.at(e)] = GaussianRational(1);
        aug.push_back(std::move(unit));
    }
    size_t rank_s = mf.rows.size();
    auto piv = rref(aug);
    (void)piv;
    return static_cast<unsigned>(aug.size() - rank_s);
}

inline unsigned colength_staircase(const std::vector<Polynomial>& gens, unsigned d) {
    return colength_staircase_frame(make_membership_frame(gens, d));
}

}  // namespace kohn::oracle
