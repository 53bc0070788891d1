// monomial_order.hpp — term orders: grevlex, lex, block elimination.
#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "kohn/ring.hpp"

namespace kohn {

// a <_grevlex b: lower total degree, or same degree and the rightmost
// differing exponent of a exceeds b's.
inline bool grevlex_less(const Exps& a, const Exps& b) {
    unsigned da = exps_degree(a), db = exps_degree(b);
    if (da != db) return da < db;
    for (size_t i = a.size(); i-- > 0;) {
        if (a[i] != b[i]) return a[i] > b[i];
    }
    return false;
}

inline bool lex_less(const Exps& a, const Exps& b) {
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i] != b[i]) return a[i] < b[i];
    }
    return false;
}

struct GrevlexLess {
    bool operator()(const Exps& a, const Exps& b) const { return grevlex_less(a, b); }
};

struct MonomialOrder {
    enum class Kind { Grevlex, Lex, Block };

    Kind kind = Kind::Grevlex;
    // Block: variables flagged true are eliminated (compared first, grevlex
    // within each block). A monomial touching an eliminated variable ranks
    // above every monomial that does not.
    std::vector<char> eliminated;

    static MonomialOrder grevlex() { return {Kind::Grevlex, {}}; }
    static MonomialOrder lex() { return {Kind::Lex, {}}; }
    static MonomialOrder block_elim(std::vector<char> elim) {
        return {Kind::Block, std::move(elim)};
    }

    bool less(const Exps& a, const Exps& b) const {
        switch (kind) {
            case Kind::Grevlex:
                return grevlex_less(a, b);
            case Kind::Lex:
                return lex_less(a, b);
            case Kind::Block: {
                if (eliminated.size() != a.size())
                    throw std::invalid_argument("block order arity mismatch");
                Exps a1, b1, a2, b2;
                for (size_t i = 0; i < a.size(); ++i) {
                    if (eliminated[i]) {
                        a1.push_back(a[i]);
                        b1.push_back(b[i]);
                    } else {
                        a2.push_back(a[i]);
                        b2.push_back(b[i]);
                    }
                }
                if (a1 != b1) return grevlex_less(a1, b1);
                return grevlex_less(a2, b2);
            }
        }
        return false;
    }

    bool greater(const Exps& a, const Exps& b) const { return less(b, a); }

    // Stable identity for basis caching.
    std::string key() const {
        switch (kind) {
            case Kind::Grevlex:
                return "grevlex";
            case Kind::Lex:
                return "lex";
            case Kind::Block: {
                std::string s = "block:";
                for (char c : eliminated) s += c ? '1' : '0';
                return s;
            }
        }
        return "?";
    }
};

struct OrderLess {
    MonomialOrder ord;
    bool operator()(const Exps& a, const Exps& b) const { return ord.less(a, b); }
};

}  // namespace kohn
