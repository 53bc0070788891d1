// groebner.hpp — reduced Groebner bases with generator lifts, normal forms,
// membership, elimination, colength and the effective type p*.
#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "kohn/monomial_order.hpp"
#include "kohn/polynomial.hpp"
#include "kohn/rational.hpp"

namespace kohn {

struct GroebnerBasis {
    MonomialOrder order;
    std::vector<Polynomial> polys;  // reduced, monic, sorted by leading term ascending
    std::vector<Exps> lts;
    // polys[i] == sum_j lifts[i][j] * gens[j]; kept for witness synthesis.
    std::vector<std::vector<Polynomial>> lifts;
};

namespace detail {

using WorkMap = std::map<Exps, GaussianRational, OrderLess>;

inline WorkMap to_work(const Polynomial& p, const MonomialOrder& ord) {
    WorkMap w{OrderLess{ord}};
    for (const auto& [e, c] : p.terms()) w.emplace(e, c);
    return w;
}

inline void work_add(WorkMap& w, const Exps& e, const GaussianRational& c) {
    if (c.is_zero()) return;
    auto it = w.find(e);
    if (it == w.end()) {
        w.emplace(e, c);
    } else {
        it->second += c;
        if (it->second.is_zero()) w.erase(it);
    }
}

// w -= mono * p
inline void work_sub_mul(WorkMap& w, const Exps& shift, const GaussianRational& scale,
                         const Polynomial& p) {
    for (const auto& [e, c] : p.terms()) work_add(w, exps_add(e, shift), -(scale * c));
}

}  // namespace detail

// Remainder of multivariate division of p by basis (a Groebner basis for ord
// when membership conclusions are drawn). Fully tail-reduced, idempotent.
// When `quotients` is given it receives one cofactor per basis element with
// p == sum_i quotients[i]*basis[i] + remainder.
inline Polynomial normal_form(const Polynomial& p, const std::vector<Polynomial>& basis,
                              const MonomialOrder& ord,
                              std::vector<Polynomial>* quotients = nullptr) {
    const RingPtr& ring = p.ring();
    std::vector<Exps> lts;
    lts.reserve(basis.size());
    for (const auto& b : basis) lts.push_back(b.leading_term(ord).first);
    if (quotients) quotients->assign(basis.size(), Polynomial::zero(ring));

    detail::WorkMap work = detail::to_work(p, ord);
    Polynomial rem(ring);
    while (!work.empty()) {
        auto top = std::prev(work.end());
        const Exps& e = top->first;
        bool reduced = false;
        for (size_t i = 0; i < basis.size(); ++i) {
            if (!exps_divides(lts[i], e)) continue;
            Exps shift = exps_sub(e, lts[i]);
            GaussianRational scale = top->second / basis[i].leading_term(ord).second;
            if (quotients)
                (*quotients)[i] += Polynomial::monomial(ring, shift, scale);
            detail::work_sub_mul(work, shift, scale, basis[i]);
            reduced = true;
            break;
        }
        if (!reduced) {
            rem.add_term(e, top->second);
            work.erase(top);
        }
    }
    return rem;
}

// Buchberger with the normal selection strategy; returns the canonical
// reduced basis together with lifts onto the input generators.
inline GroebnerBasis buchberger(const RingPtr& ring, const std::vector<Polynomial>& gens,
                                const MonomialOrder& ord) {
    struct Entry {
        Polynomial poly;
        std::vector<Polynomial> lift;
    };
    std::vector<Entry> basis;
    auto lt_of = [&](const Polynomial& p) { return p.leading_term(ord).first; };

    auto reduce_entry = [&](Polynomial p, std::vector<Polynomial> lift) -> std::optional<Entry> {
        std::vector<Polynomial> bp;
        bp.reserve(basis.size());
        for (auto& b : basis) bp.push_back(b.poly);
        std::vector<Polynomial> q;
        Polynomial r = normal_form(p, bp, ord, &q);
        if (r.is_zero()) return std::nullopt;
        for (size_t i = 0; i < basis.size(); ++i)
            for (size_t j = 0; j < lift.size(); ++j) lift[j] -= q[i] * basis[i].lift[j];
        GaussianRational inv = r.leading_term(ord).second.inverse();
        r = r.scaled(inv);
        for (auto& l : lift) l = l.scaled(inv);
        return Entry{std::move(r), std::move(lift)};
    };

    // (lcm degree, i, j) — normal strategy
    std::set<std::tuple<unsigned, size_t, size_t>> pairs;
    auto push_pairs = [&](size_t j) {
        for (size_t i = 0; i < j; ++i) {
            Exps l = exps_lcm(lt_of(basis[i].poly), lt_of(basis[j].poly));
            pairs.emplace(exps_degree(l), i, j);
        }
    };

    for (size_t g = 0; g < gens.size(); ++g) {
        std::vector<Polynomial> lift(gens.size(), Polynomial::zero(ring));
        lift[g] = Polynomial::constant(ring, GaussianRational(1));
        if (auto e = reduce_entry(gens[g], std::move(lift))) {
            basis.push_back(std::move(*e));
            push_pairs(basis.size() - 1);
        }
    }

    while (!pairs.empty()) {
        auto [deg, i, j] = *pairs.begin();
        pairs.erase(pairs.begin());
        Exps li = lt_of(basis[i].poly), lj = lt_of(basis[j].poly);
        Exps l = exps_lcm(li, lj);
        if (exps_degree(l) != deg) continue;  // stale
        if (l == exps_add(li, lj)) continue;  // coprime leading terms
        Polynomial mi = Polynomial::monomial(ring, exps_sub(l, li), GaussianRational(1));
        Polynomial mj = Polynomial::monomial(ring, exps_sub(l, lj), GaussianRational(1));
        Polynomial s = mi * basis[i].poly - mj * basis[j].poly;
        std::vector<Polynomial> lift(basis[i].lift.size(), Polynomial::zero(ring));
        for (size_t t = 0; t < lift.size(); ++t)
            lift[t] = mi * basis[i].lift[t] - mj * basis[j].lift[t];
        if (auto e = reduce_entry(std::move(s), std::move(lift))) {
            basis.push_back(std::move(*e));
            push_pairs(basis.size() - 1);
        }
    }

    // minimalize: drop entries whose leading term another entry's divides
    std::vector<char> keep(basis.size(), 1);
    for (size_t i = 0; i < basis.size(); ++i) {
        if (!keep[i]) continue;
        for (size_t j = 0; j < basis.size(); ++j) {
            if (i == j || !keep[j]) continue;
            Exps li = lt_of(basis[i].poly), lj = lt_of(basis[j].poly);
            if (exps_divides(lj, li) && (li != lj || j < i)) {
                keep[i] = 0;
                break;
            }
        }
    }
    std::vector<Entry> minimal;
    for (size_t i = 0; i < basis.size(); ++i)
        if (keep[i]) minimal.push_back(std::move(basis[i]));

    // full inter-reduction to the canonical reduced basis
    bool changed = true;
    while (changed) {
        changed = false;
        for (size_t i = 0; i < minimal.size(); ++i) {
            std::vector<Polynomial> others;
            std::vector<size_t> idx;
            for (size_t j = 0; j < minimal.size(); ++j) {
                if (j == i) continue;
                others.push_back(minimal[j].poly);
                idx.push_back(j);
            }
            std::vector<Polynomial> q;
            Polynomial r = normal_form(minimal[i].poly, others, ord, &q);
            if (r == minimal[i].poly) continue;
            changed = true;
            for (size_t t = 0; t < minimal[i].lift.size(); ++t)
                for (size_t k = 0; k < idx.size(); ++k)
                    minimal[i].lift[t] -= q[k] * minimal[idx[k]].lift[t];
            GaussianRational inv = r.leading_term(ord).second.inverse();
            minimal[i].poly = r.scaled(inv);
            for (auto& lf : minimal[i].lift) lf = lf.scaled(inv);
        }
    }

    std::sort(minimal.begin(), minimal.end(), [&](const Entry& a, const Entry& b) {
        return ord.less(a.poly.leading_term(ord).first, b.poly.leading_term(ord).first);
    });

    GroebnerBasis gb;
    gb.order = ord;
    for (auto& e : minimal) {
        gb.lts.push_back(e.poly.leading_term(ord).first);
        gb.polys.push_back(std::move(e.poly));
        gb.lifts.push_back(std::move(e.lift));
    }
    return gb;
}

struct TypeReport {
    unsigned p_star;
    Rat lower;      // p* / (n+3)
    unsigned upper;  // p*
};

struct TypeCapExceeded : std::runtime_error {
    unsigned cap;
    explicit TypeCapExceeded(unsigned c)
        : std::runtime_error("no power of the maximal ideal found up to cap " + std::to_string(c)),
          cap(c) {}
};

// Generator list with lazily cached reduced bases per monomial order.
class Ideal {
  public:
    Ideal(RingPtr ring, std::vector<Polynomial> gens) : ring_(std::move(ring)) {
        for (auto& g : gens) {
            if (!same_ring(g.ring(), ring_)) throw std::invalid_argument("ideal: ring mismatch");
            if (!g.is_zero()) gens_.push_back(std::move(g));
        }
        if (gens_.empty()) throw std::invalid_argument("ideal: zero ideal rejected");
    }

    static Ideal allow_zero(RingPtr ring, std::vector<Polynomial> gens) {
        Ideal i;
        i.ring_ = std::move(ring);
        for (auto& g : gens)
            if (!g.is_zero()) i.gens_.push_back(std::move(g));
        return i;
    }

    Ideal(const Ideal& o) : ring_(o.ring_), gens_(o.gens_) {
        std::lock_guard<std::mutex> lock(o.mu_);
        cache_ = o.cache_;
    }
    Ideal(Ideal&& o) noexcept : ring_(std::move(o.ring_)), gens_(std::move(o.gens_)) {
        cache_ = std::move(o.cache_);
    }
    Ideal& operator=(const Ideal& o) {
        if (this != &o) {
            std::scoped_lock lock(mu_, o.mu_);
            ring_ = o.ring_;
            gens_ = o.gens_;
            cache_ = o.cache_;
        }
        return *this;
    }
    Ideal& operator=(Ideal&& o) noexcept {
        if (this != &o) {
            ring_ = std::move(o.ring_);
            gens_ = std::move(o.gens_);
            cache_ = std::move(o.cache_);
        }
        return *this;
    }

    const RingPtr& ring() const { return ring_; }
    const std::vector<Polynomial>& generators() const { return gens_; }
    bool is_zero_ideal() const { return gens_.empty(); }

    std::shared_ptr<const GroebnerBasis> basis(const MonomialOrder& ord) const {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = cache_.find(ord.key());
        if (it != cache_.end()) return it->second;
        auto gb = std::make_shared<GroebnerBasis>(buchberger(ring_, gens_, ord));
        cache_.emplace(ord.key(), gb);
        return gb;
    }

    Polynomial normal_form_of(const Polynomial& p,
                              const MonomialOrder& ord = MonomialOrder::grevlex()) const {
        auto gb = basis(ord);
        return normal_form(p, gb->polys, ord);
    }

    bool contains(const Polynomial& p) const {
        if (p.is_zero()) return true;
        if (is_zero_ideal()) return false;
        return normal_form_of(p).is_zero();
    }

    // Cofactors over the *generators*: p == sum_j out[j] * generators()[j].
    std::optional<std::vector<Polynomial>> express(const Polynomial& p) const {
        if (is_zero_ideal()) return std::nullopt;
        auto gb = basis(MonomialOrder::grevlex());
        std::vector<Polynomial> q;
        Polynomial r = normal_form(p, gb->polys, gb->order, &q);
        if (!r.is_zero()) return std::nullopt;
        std::vector<Polynomial> cof(gens_.size(), Polynomial::zero(ring_));
        for (size_t i = 0; i < gb->polys.size(); ++i) {
            if (q[i].is_zero()) continue;
            for (size_t j = 0; j < gens_.size(); ++j) cof[j] += q[i] * gb->lifts[i][j];
        }
        return cof;
    }

    // m^k <= I, i.e. every monomial of total degree k is a member.
    bool contains_power_of_max_ideal(unsigned k) const {
        if (k == 0) throw std::invalid_argument("contains_power_of_max_ideal: k must be >= 1");
        if (is_zero_ideal()) return false;
        auto gb = basis(MonomialOrder::grevlex());
        for (const Exps& e : exponents_of_degree(ring_->size(), k)) {
            Polynomial mon = Polynomial::monomial(ring_, e, GaussianRational(1));
            if (!normal_form(mon, gb->polys, gb->order).is_zero()) return false;
        }
        return true;
    }

    // Least k with m^k <= I; reported with the bracket [p*/(n+3), p*].
    TypeReport effective_type(unsigned cap = 64) const {
        for (unsigned k = 1; k <= cap; ++k) {
            if (contains_power_of_max_ideal(k)) {
                unsigned n_plus_3 = static_cast<unsigned>(ring_->size()) + 3;
                return TypeReport{k, make_rat(static_cast<long>(k), static_cast<long>(n_plus_3)), k};
            }
        }
        throw TypeCapExceeded(cap);
    }

    // Number of standard monomials (dimension of the quotient algebra);
    // requires a power of m inside the ideal.
    unsigned colength(unsigned cap = 64) const {
        TypeReport tr = effective_type(cap);
        auto gb = basis(MonomialOrder::grevlex());
        unsigned count = 0;
        for (unsigned d = 0; d < tr.p_star; ++d) {
            for (const Exps& e : exponents_of_degree(ring_->size(), d)) {
                bool reducible = false;
                for (const Exps& lt : gb->lts) {
                    if (exps_divides(lt, e)) {
                        reducible = true;
                        break;
                    }
                }
                if (!reducible) ++count;
            }
        }
        return count;
    }

    // Ideal of the elements involving only the kept variables.
    Ideal elimination_ideal(const std::vector<char>& keep) const {
        if (keep.size() != ring_->size()) throw std::invalid_argument("elimination: keep mask arity");
        std::vector<char> elim(keep.size());
        bool any = false;
        for (size_t i = 0; i < keep.size(); ++i) {
            elim[i] = keep[i] ? 0 : 1;
            any = any || elim[i];
        }
        if (!any) return *this;
        auto gb = basis(MonomialOrder::block_elim(elim));
        std::vector<Polynomial> kept;
        for (const auto& p : gb->polys) {
            bool ok = true;
            for (size_t i = 0; i < keep.size() && ok; ++i)
                if (elim[i] && p.degree_in(i) > 0) ok = false;
            if (ok) kept.push_back(p);
        }
        return Ideal::allow_zero(ring_, std::move(kept));
    }

  private:
    Ideal() = default;

    RingPtr ring_;
    std::vector<Polynomial> gens_;
    mutable std::mutex mu_;
    mutable std::map<std::string, std::shared_ptr<const GroebnerBasis>> cache_;
};

}  // namespace kohn
