// polynomial.hpp — exact sparse multivariate polynomials over Q(i).
//
// Terms live in a map keyed by exponent vector in ascending grevlex, so the
// canonical (descending) iteration is the reverse walk. No zero coefficient
// is ever stored; equal term tables mean equal polynomials.
#pragma once

#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "kohn/gaussian.hpp"
#include "kohn/linalg.hpp"
#include "kohn/monomial_order.hpp"
#include "kohn/ring.hpp"

namespace kohn {

class Polynomial {
  public:
    using TermMap = std::map<Exps, GaussianRational, GrevlexLess>;

    Polynomial() = default;
    explicit Polynomial(RingPtr ring) : ring_(std::move(ring)) {}

    static Polynomial zero(RingPtr ring) { return Polynomial(std::move(ring)); }

    static Polynomial constant(RingPtr ring, GaussianRational c) {
        Polynomial p(std::move(ring));
        if (!c.is_zero()) p.terms_.emplace(Exps(p.ring_->size(), 0), std::move(c));
        return p;
    }

    static Polynomial monomial(RingPtr ring, Exps e, GaussianRational c = GaussianRational(1)) {
        Polynomial p(std::move(ring));
        if (e.size() != p.ring_->size()) throw std::invalid_argument("exponent arity mismatch");
        if (!c.is_zero()) p.terms_.emplace(std::move(e), std::move(c));
        return p;
    }

    static Polynomial variable(RingPtr ring, size_t idx) {
        Exps e(ring->size(), 0);
        e.at(idx) = 1;
        return monomial(std::move(ring), std::move(e));
    }

    const RingPtr& ring() const { return ring_; }
    const TermMap& terms() const { return terms_; }
    size_t term_count() const { return terms_.size(); }
    bool is_zero() const { return terms_.empty(); }

    bool is_constant() const {
        return terms_.empty() || (terms_.size() == 1 && exps_degree(terms_.begin()->first) == 0);
    }

    GaussianRational constant_value() const {
        if (terms_.empty()) return GaussianRational(0);
        auto it = terms_.find(Exps(ring_->size(), 0));
        return it == terms_.end() ? GaussianRational(0) : it->second;
    }

    GaussianRational coeff(const Exps& e) const {
        auto it = terms_.find(e);
        return it == terms_.end() ? GaussianRational(0) : it->second;
    }

    unsigned total_degree() const {  // 0 for the zero polynomial
        unsigned d = 0;
        for (const auto& [e, c] : terms_) d = std::max(d, exps_degree(e));
        return d;
    }

    unsigned degree_in(size_t var) const {
        unsigned d = 0;
        for (const auto& [e, c] : terms_) d = std::max(d, e[var]);
        return d;
    }

    // Minimum total degree of a nonzero term; empty for the zero polynomial.
    std::optional<unsigned> vanishing_order() const {
        if (terms_.empty()) return std::nullopt;
        unsigned best = UINT32_MAX;
        for (const auto& [e, c] : terms_) best = std::min(best, exps_degree(e));
        return best;
    }

    friend bool operator==(const Polynomial& a, const Polynomial& b) {
        return same_ring(a.ring_, b.ring_) && a.terms_ == b.terms_;
    }
    friend bool operator!=(const Polynomial& a, const Polynomial& b) { return !(a == b); }

    void add_term(const Exps& e, const GaussianRational& c) {
        if (c.is_zero()) return;
        auto it = terms_.find(e);
        if (it == terms_.end()) {
            terms_.emplace(e, c);
        } else {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
        check_rings(a, b);
        Polynomial r = a;
        for (const auto& [e, c] : b.terms_) r.add_term(e, c);
        return r;
    }

    friend Polynomial operator-(const Polynomial& a, const Polynomial& b) {
        check_rings(a, b);
        Polynomial r = a;
        for (const auto& [e, c] : b.terms_) r.add_term(e, -c);
        return r;
    }

    Polynomial operator-() const {
        Polynomial r(ring_);
        for (const auto& [e, c] : terms_) r.terms_.emplace(e, -c);
        return r;
    }

    friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
        check_rings(a, b);
        Polynomial r(a.ring_);
        for (const auto& [ea, ca] : a.terms_)
            for (const auto& [eb, cb] : b.terms_) r.add_term(exps_add(ea, eb), ca * cb);
        return r;
    }

    friend Polynomial operator*(const GaussianRational& s, const Polynomial& p) { return p.scaled(s); }

    Polynomial scaled(const GaussianRational& s) const {
        Polynomial r(ring_);
        if (s.is_zero()) return r;
        for (const auto& [e, c] : terms_) r.terms_.emplace(e, s * c);
        return r;
    }

    Polynomial& operator+=(const Polynomial& o) { return *this = *this + o; }
    Polynomial& operator-=(const Polynomial& o) { return *this = *this - o; }
    Polynomial& operator*=(const Polynomial& o) { return *this = *this * o; }

    Polynomial pow(unsigned e) const {
        Polynomial r = constant(ring_, GaussianRational(1));
        for (unsigned i = 0; i < e; ++i) r *= *this;
        return r;
    }

    // Term-wise power rule.
    Polynomial derivative(size_t var) const {
        if (var >= ring_->size()) throw std::invalid_argument("derivative: variable out of range");
        Polynomial r(ring_);
        for (const auto& [e, c] : terms_) {
            if (e[var] == 0) continue;
            Exps ne = e;
            ne[var] -= 1;
            r.add_term(ne, c * GaussianRational(static_cast<long>(e[var])));
        }
        return r;
    }

    // Leading data under an arbitrary order (linear scan; grevlex is the
    // stored order, so its leading term is the map maximum).
    std::pair<Exps, GaussianRational> leading_term(const MonomialOrder& ord) const {
        if (terms_.empty()) throw std::invalid_argument("leading term of zero polynomial");
        if (ord.kind == MonomialOrder::Kind::Grevlex) {
            auto it = terms_.rbegin();
            return {it->first, it->second};
        }
        auto best = terms_.begin();
        for (auto it = std::next(terms_.begin()); it != terms_.end(); ++it)
            if (ord.less(best->first, it->first)) best = it;
        return {best->first, best->second};
    }

    Polynomial monic(const MonomialOrder& ord = MonomialOrder::grevlex()) const {
        if (terms_.empty()) return *this;
        auto [e, c] = leading_term(ord);
        return scaled(c.inverse());
    }

    // Substitute variable i by images[i]; images live in `target`.
    Polynomial substitute(const RingPtr& target, const std::vector<Polynomial>& images) const {
        if (images.size() != ring_->size()) throw std::invalid_argument("substitute: arity mismatch");
        for (const auto& img : images)
            if (!same_ring(img.ring(), target)) throw std::invalid_argument("substitute: ring mismatch");
        // power cache per variable
        std::vector<std::vector<Polynomial>> powers(images.size());
        auto power_of = [&](size_t i, unsigned e) -> const Polynomial& {
            auto& cache = powers[i];
            if (cache.empty()) cache.push_back(Polynomial::constant(target, GaussianRational(1)));
            while (cache.size() <= e) cache.push_back(cache.back() * images[i]);
            return cache[e];
        };
        Polynomial r(target);
        for (const auto& [e, c] : terms_) {
            Polynomial t = Polynomial::constant(target, c);
            for (size_t i = 0; i < e.size(); ++i)
                if (e[i] > 0) t *= power_of(i, e[i]);
            r += t;
        }
        return r;
    }

  private:
    static void check_rings(const Polynomial& a, const Polynomial& b) {
        if (!same_ring(a.ring_, b.ring_)) throw std::invalid_argument("polynomial ring mismatch");
    }

    RingPtr ring_;
    TermMap terms_;
};

// Determinant of the k x k matrix of partials d(fs)/d(vars), expanded exactly.
inline Polynomial jacobian_det(std::span<const Polynomial> fs, std::span<const size_t> vars) {
    if (fs.empty() || fs.size() != vars.size())
        throw std::invalid_argument("jacobian_det: need k functions and k distinct variables");
    const RingPtr& ring = fs[0].ring();
    for (size_t i = 0; i < vars.size(); ++i) {
        if (vars[i] >= ring->size()) throw std::invalid_argument("jacobian_det: variable out of range");
        for (size_t j = i + 1; j < vars.size(); ++j)
            if (vars[i] == vars[j]) throw std::invalid_argument("jacobian_det: repeated variable");
    }
    size_t k = fs.size();
    std::vector<std::vector<Polynomial>> m(k, std::vector<Polynomial>(k));
    for (size_t i = 0; i < k; ++i) {
        if (!same_ring(fs[i].ring(), ring)) throw std::invalid_argument("jacobian_det: ring mismatch");
        for (size_t j = 0; j < k; ++j) m[i][j] = fs[i].derivative(vars[j]);
    }
    // cofactor expansion; k stays small (n+1)
    auto det = [&](auto&& self, std::vector<size_t> rows, std::vector<size_t> cols) -> Polynomial {
        if (rows.size() == 1) return m[rows[0]][cols[0]];
        Polynomial acc(ring);
        std::vector<size_t> subrows(rows.begin() + 1, rows.end());
        for (size_t j = 0; j < cols.size(); ++j) {
            const Polynomial& pivot = m[rows[0]][cols[j]];
            if (pivot.is_zero()) continue;
            std::vector<size_t> subcols;
            for (size_t t = 0; t < cols.size(); ++t)
                if (t != j) subcols.push_back(cols[t]);
            Polynomial minor = self(self, subrows, subcols);
            Polynomial term = pivot * minor;
            acc = (j % 2 == 0) ? acc + term : acc - term;
        }
        return acc;
    };
    std::vector<size_t> all(k);
    for (size_t i = 0; i < k; ++i) all[i] = i;
    std::vector<size_t> cols(vars.begin(), vars.end());
    return det(det, all, cols);
}

inline Polynomial jacobian_det(const std::vector<Polynomial>& fs, const std::vector<size_t>& vars) {
    return jacobian_det(std::span<const Polynomial>(fs), std::span<const size_t>(vars));
}

// p composed with z -> A*z; A must be invertible (exact determinant check).
inline Polynomial linear_coordinate_change(const Polynomial& p, const GMat& a) {
    const RingPtr& ring = p.ring();
    size_t v = ring->size();
    if (a.size() != v) throw std::invalid_argument("coordinate change: matrix arity mismatch");
    for (const auto& row : a)
        if (row.size() != v) throw std::invalid_argument("coordinate change: matrix not square");
    if (gmat_det(a).is_zero()) throw std::invalid_argument("coordinate change: singular matrix");
    std::vector<Polynomial> images;
    images.reserve(v);
    for (size_t i = 0; i < v; ++i) {
        Polynomial img(ring);
        for (size_t j = 0; j < v; ++j) {
            if (a[i][j].is_zero()) continue;
            Exps e(v, 0);
            e[j] = 1;
            img += Polynomial::monomial(ring, e, a[i][j]);
        }
        images.push_back(std::move(img));
    }
    return p.substitute(ring, images);
}

}  // namespace kohn
