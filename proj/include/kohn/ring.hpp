// ring.hpp — polynomial ring descriptor and exponent vectors.
#pragma once

#include <algorithm>
#include <cctype>
#include <memory>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace kohn {

// Exponent vector; length equals the ring's variable count.
using Exps = std::vector<unsigned>;

struct Ring {
    std::vector<std::string> vars;

    size_t size() const { return vars.size(); }

    int index_of(const std::string& name) const {
        for (size_t i = 0; i < vars.size(); ++i)
            if (vars[i] == name) return static_cast<int>(i);
        return -1;
    }
};

using RingPtr = std::shared_ptr<const Ring>;

inline bool valid_var_name(const std::string& s) {
    if (s.empty()) return false;
    if (s == "i") return false;  // reserved by the imaginary-unit literal
    if (!std::isalpha(static_cast<unsigned char>(s[0])) && s[0] != '_') return false;
    for (char c : s)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
    return true;
}

inline RingPtr make_ring(std::vector<std::string> names) {
    if (names.empty()) throw std::invalid_argument("ring needs at least one variable");
    for (const auto& n : names)
        if (!valid_var_name(n)) throw std::invalid_argument("bad variable name: '" + n + "'");
    for (size_t i = 0; i < names.size(); ++i)
        for (size_t j = i + 1; j < names.size(); ++j)
            if (names[i] == names[j]) throw std::invalid_argument("duplicate variable: " + names[i]);
    auto r = std::make_shared<Ring>();
    r->vars = std::move(names);
    return r;
}

inline bool same_ring(const RingPtr& a, const RingPtr& b) {
    return a == b || (a && b && a->vars == b->vars);
}

inline unsigned exps_degree(const Exps& e) {
    return std::accumulate(e.begin(), e.end(), 0u);
}

inline bool exps_divides(const Exps& a, const Exps& b) {  // a | b
    for (size_t i = 0; i < a.size(); ++i)
        if (a[i] > b[i]) return false;
    return true;
}

inline Exps exps_add(const Exps& a, const Exps& b) {
    Exps r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

inline Exps exps_sub(const Exps& a, const Exps& b) {  // requires b | a
    Exps r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

inline Exps exps_lcm(const Exps& a, const Exps& b) {
    Exps r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = std::max(a[i], b[i]);
    return r;
}

// All exponent vectors in v variables of total degree exactly k, in a stable order.
inline void exponents_of_degree(size_t v, unsigned k, std::vector<Exps>& out) {
    Exps cur(v, 0);
    auto rec = [&](auto&& self, size_t pos, unsigned rem) -> void {
        if (pos + 1 == v) {
            cur[pos] = rem;
            out.push_back(cur);
            return;
        }
        for (unsigned e = 0; e <= rem; ++e) {
            cur[pos] = e;
            self(self, pos + 1, rem - e);
        }
        cur[pos] = 0;
    };
    rec(rec, 0, k);
}

inline std::vector<Exps> exponents_of_degree(size_t v, unsigned k) {
    std::vector<Exps> out;
    exponents_of_degree(v, k, out);
    return out;
}

inline std::vector<Exps> exponents_up_to_degree(size_t v, unsigned d) {
    std::vector<Exps> out;
    for (unsigned k = 0; k <= d; ++k) exponents_of_degree(v, k, out);
    return out;
}

}  // namespace kohn
