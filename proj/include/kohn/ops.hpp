// ops.hpp — the allowable procedures and generation rules as pure functions:
// initial Jacobians, mixed Jacobians with the order ledger, ideal elements,
// root taking, the iterated L-operator, and Weierstrass extraction.
#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "kohn/gcd.hpp"
#include "kohn/groebner.hpp"
#include "kohn/multiplier.hpp"
#include "kohn/polynomial.hpp"
#include "kohn/print.hpp"

namespace kohn {

inline Rat half() { return make_rat(1, 2); }

// One Jacobian operand: a pre-multiplier contributes its epsilon cap
// (1 for the initial defining functions), a multiplier its epsilon.
struct JacOperand {
    Polynomial poly;
    Rat contribution = Rat(1);
    std::string ref;  // "f<j>" or "s<id>", for step records
};

inline JacOperand operand_of(const PreMultiplier& p) {
    return {p.poly, p.epsilon_cap, p.adjusted ? step_ref(p.step) : gen_ref(p.index)};
}

inline JacOperand operand_of(const Multiplier& m) { return {m.poly, m.epsilon, step_ref(m.step)}; }

// Jacobian of the operands wrt vars; epsilon = 1/2 * min(1, contributions).
// Returns nullopt when the determinant vanishes (dependent choice).
inline std::optional<std::pair<Polynomial, Rat>> gen_jacobian(std::span<const JacOperand> items,
                                                              std::span<const size_t> vars) {
    if (items.size() != vars.size() || items.empty())
        throw std::invalid_argument("gen_jacobian: need as many items as variables");
    std::vector<Polynomial> polys;
    polys.reserve(items.size());
    Rat m(1);
    for (const auto& it : items) {
        polys.push_back(it.poly);
        m = rat_min(m, it.contribution);
    }
    Polynomial det = jacobian_det(std::span<const Polynomial>(polys), vars);
    if (det.is_zero()) return std::nullopt;
    return std::make_pair(det, half() * m);
}

// ---- initial multipliers -------------------------------------------------

struct InitialJacobian {
    std::vector<size_t> subset;  // 0-based indices into fs
    std::vector<size_t> vars;
    Polynomial poly;
    bool full;  // (n+1)x(n+1) wrt all variables
};

namespace detail {
inline void combinations(size_t n, size_t k, std::vector<std::vector<size_t>>& out) {
    std::vector<size_t> cur;
    auto rec = [&](auto&& self, size_t start) -> void {
        if (cur.size() == k) {
            out.push_back(cur);
            return;
        }
        for (size_t i = start; i + (k - cur.size()) <= n; ++i) {
            cur.push_back(i);
            self(self, i + 1);
            cur.pop_back();
        }
    };
    rec(rec, 0);
}
}  // namespace detail

// All nonzero n x n Jacobians of n-subsets wrt z_1..z_n and (n+1) x (n+1)
// Jacobians of (n+1)-subsets wrt all variables, in a stable order.
inline std::vector<InitialJacobian> enumerate_initial_jacobians(const std::vector<Polynomial>& fs) {
    if (fs.empty()) throw std::invalid_argument("no defining functions");
    const RingPtr& ring = fs[0].ring();
    size_t v = ring->size();
    if (v < 2) throw std::invalid_argument("need at least two variables");
    size_t n = v - 1;
    std::vector<InitialJacobian> out;
    for (size_t size : {n, n + 1}) {
        if (fs.size() < size) continue;
        std::vector<size_t> vars(size);
        for (size_t i = 0; i < size; ++i) vars[i] = i;
        std::vector<std::vector<size_t>> subsets;
        detail::combinations(fs.size(), size, subsets);
        for (const auto& sub : subsets) {
            std::vector<Polynomial> polys;
            for (size_t i : sub) polys.push_back(fs[i]);
            Polynomial det = jacobian_det(polys, vars);
            if (det.is_zero()) continue;
            out.push_back({sub, vars, std::move(det), size == n + 1});
        }
    }
    return out;
}

// The generation rule's multiplier set: every initial Jacobian at order 1/2,
// duplicates collapsed keeping the larger epsilon.
inline std::vector<Multiplier> initial_multipliers(const std::vector<Polynomial>& fs) {
    std::vector<Multiplier> out;
    for (auto& ij : enumerate_initial_jacobians(fs)) {
        bool dup = false;
        for (const auto& m : out)
            if (m.poly == ij.poly) {
                dup = true;
                break;
            }
        if (!dup) out.push_back({std::move(ij.poly), half(), -1});
    }
    return out;
}

// ---- ideal elements ------------------------------------------------------

struct IdealElementResult {
    Multiplier m;
    std::vector<Polynomial> cofactors;  // one per generator, target == sum cof*gen
};

// Explicit-witness form: target must equal sum_i cofactors[i]*gens[i].poly.
inline IdealElementResult ideal_element(std::span<const Multiplier> gens,
                                        std::span<const Polynomial> cofactors,
                                        const Polynomial& target) {
    if (gens.empty() || gens.size() != cofactors.size())
        throw std::invalid_argument("ideal_element: need one cofactor per generator");
    if (target.is_zero()) throw std::invalid_argument("ideal_element: zero target");
    Polynomial sum(target.ring());
    for (size_t i = 0; i < gens.size(); ++i) sum += cofactors[i] * gens[i].poly;
    if (sum != target) throw std::invalid_argument("ideal_element: identity does not hold");
    bool found = false;
    Rat eps(1);
    for (size_t i = 0; i < gens.size(); ++i) {
        if (cofactors[i].is_zero()) continue;
        eps = found ? rat_min(eps, gens[i].epsilon) : gens[i].epsilon;
        found = true;
    }
    if (!found) throw std::invalid_argument("ideal_element: all cofactors zero");
    return {Multiplier{target, eps, -1}, {cofactors.begin(), cofactors.end()}};
}

// Convenience form: synthesizes cofactors, preferring a single exact divisor
// in the given generator order, falling back to Groebner division.
inline std::optional<IdealElementResult> ideal_element_synth(std::span<const Multiplier> gens,
                                                             const Polynomial& target) {
    if (gens.empty() || target.is_zero()) return std::nullopt;
    for (size_t i = 0; i < gens.size(); ++i) {
        if (auto q = exact_divide(target, gens[i].poly)) {
            std::vector<Polynomial> cof(gens.size(), Polynomial::zero(target.ring()));
            cof[i] = *q;
            return ideal_element(gens, cof, target);
        }
    }
    std::vector<Polynomial> polys;
    for (const auto& g : gens) polys.push_back(g.poly);
    Ideal ideal(target.ring(), polys);
    auto cof = ideal.express(target);
    if (!cof) return std::nullopt;
    return ideal_element(gens, *cof, target);
}

// ---- root taking ---------------------------------------------------------

struct RootTakingResult {
    Multiplier m;
    unsigned exponent;  // the m of "F^m G is a multiplier => FG is"
};

inline RootTakingResult root_taking(const Multiplier& f) {
    if (f.poly.is_zero() || f.poly.is_constant())
        throw std::invalid_argument("root_taking: constant input");
    SquarefreeResult sf = squarefree_part(f.poly);
    return {Multiplier{sf.part, f.epsilon / Rat(static_cast<long>(sf.multiplicity)), -1},
            sf.multiplicity};
}

// ---- iterated L-operator -------------------------------------------------

// h_k = jacobian(pivots..., h_{k-1}) wrt all variables, h_0 = target; each
// application halves the ledger order. Stops early on a zero iterate.
inline std::vector<std::pair<Polynomial, Rat>> iterate_L_operator(
    std::span<const JacOperand> pivots, const JacOperand& target, unsigned count) {
    if (pivots.empty()) throw std::invalid_argument("iterate_L_operator: no pivot");
    const RingPtr& ring = pivots[0].poly.ring();
    size_t v = ring->size();
    if (pivots.size() + 1 != v) throw std::invalid_argument("iterate_L_operator: pivot arity");
    std::vector<size_t> vars(v);
    for (size_t i = 0; i < v; ++i) vars[i] = i;
    std::vector<std::pair<Polynomial, Rat>> out;
    JacOperand prev = target;
    for (unsigned k = 1; k <= count; ++k) {
        std::vector<JacOperand> items(pivots.begin(), pivots.end());
        items.push_back(prev);
        auto r = gen_jacobian(items, vars);
        if (!r) break;
        out.push_back(*r);
        prev = {r->first, r->second, ""};
    }
    return out;
}

inline std::vector<std::pair<Polynomial, Rat>> iterate_L_operator(const JacOperand& pivot,
                                                                  const JacOperand& target,
                                                                  unsigned count) {
    std::vector<JacOperand> pivots{pivot};
    return iterate_L_operator(std::span<const JacOperand>(pivots), target, count);
}

// ---- Weierstrass extraction ----------------------------------------------

struct WeierstrassData {
    RingPtr ext_ring;                    // base variables + auxiliary y's
    std::vector<std::string> aux_names;  // one per aux pre-multiplier
    Polynomial w_ext;                    // monic in z_j, coefficients in the y's
    unsigned p_nu;                       // degree in z_j
    Polynomial composed;                 // w_ext with y <- aux, in the base ring
};

namespace detail {

inline RingPtr extend_ring(const RingPtr& ring, size_t count, std::vector<std::string>& names_out) {
    std::vector<std::string> names = ring->vars;
    for (size_t k = 0; k < count; ++k) {
        std::string cand = "y" + std::to_string(k + 1);
        while (ring->index_of(cand) >= 0) cand = "_" + cand;
        names_out.push_back(cand);
        names.push_back(cand);
    }
    return make_ring(names);
}

inline Polynomial inject(const Polynomial& p, const RingPtr& ext) {
    Polynomial r(ext);
    size_t pad = ext->size() - p.ring()->size();
    for (const auto& [e, c] : p.terms()) {
        Exps ne = e;
        ne.insert(ne.end(), pad, 0u);
        r.add_term(ne, c);
    }
    return r;
}

// Substitute y_k <- images[k], base variables unchanged; lands in base ring.
inline Polynomial project(const Polynomial& p_ext, const RingPtr& base,
                          const std::vector<Polynomial>& images) {
    std::vector<Polynomial> subst;
    for (size_t i = 0; i < base->size(); ++i) subst.push_back(Polynomial::variable(base, i));
    for (const auto& img : images) subst.push_back(img);
    return p_ext.substitute(base, subst);
}

}  // namespace detail

// Adjoin y_k - aux_k, eliminate every base variable except z_j, and pick the
// minimal-degree generator monic in z_j. The composed polynomial (y's
// substituted back) vanishes on the variety of Ygens, so it lies in their
// ideal; the caller re-checks membership when it certifies the multiplier.
inline std::optional<WeierstrassData> weierstrass_extract(const std::vector<Polynomial>& ygens,
                                                          const std::vector<Polynomial>& aux,
                                                          size_t var_j) {
    if (ygens.empty()) throw std::invalid_argument("weierstrass_extract: empty ideal");
    const RingPtr& ring = ygens[0].ring();
    if (var_j >= ring->size()) throw std::invalid_argument("weierstrass_extract: bad variable");
    WeierstrassData wd;
    wd.ext_ring = detail::extend_ring(ring, aux.size(), wd.aux_names);
    std::vector<Polynomial> gens_ext;
    for (const auto& g : ygens) gens_ext.push_back(detail::inject(g, wd.ext_ring));
    for (size_t k = 0; k < aux.size(); ++k) {
        Polynomial y = Polynomial::variable(wd.ext_ring, ring->size() + k);
        gens_ext.push_back(y - detail::inject(aux[k], wd.ext_ring));
    }
    Ideal ext(wd.ext_ring, gens_ext);
    std::vector<char> keep(wd.ext_ring->size(), 0);
    keep[var_j] = 1;
    for (size_t k = 0; k < aux.size(); ++k) keep[ring->size() + k] = 1;
    Ideal elim = ext.elimination_ideal(keep);

    const Polynomial* best = nullptr;
    unsigned best_deg = 0;
    for (const auto& p : elim.generators()) {
        unsigned d = p.degree_in(var_j);
        if (d == 0) continue;
        // leading z_j-coefficient must be constant for monic normalization
        Polynomial lead(wd.ext_ring);
        for (const auto& [e, c] : p.terms()) {
            if (e[var_j] != d) continue;
            Exps rest = e;
            rest[var_j] = 0;
            lead.add_term(rest, c);
        }
        if (!lead.is_constant() || lead.is_zero()) continue;
        if (!best || d < best_deg) {
            best = &p;
            best_deg = d;
        }
    }
    if (!best) return std::nullopt;

    Polynomial lead_coeff(wd.ext_ring);
    for (const auto& [e, c] : best->terms())
        if (e[var_j] == best_deg) {
            Exps rest = e;
            rest[var_j] = 0;
            lead_coeff.add_term(rest, c);
        }
    wd.w_ext = best->scaled(lead_coeff.constant_value().inverse());
    wd.p_nu = best_deg;
    wd.composed = detail::project(wd.w_ext, ring, aux);
    if (wd.composed.is_zero()) return std::nullopt;
    return wd;
}

}  // namespace kohn
