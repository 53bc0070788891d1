// print.hpp — canonical rendering: grevlex term order, descending.
#pragma once

#include <string>

#include "kohn/polynomial.hpp"

namespace kohn {

inline std::string monomial_str(const Ring& ring, const Exps& e) {
    std::string s;
    for (size_t i = 0; i < e.size(); ++i) {
        if (e[i] == 0) continue;
        if (!s.empty()) s += "*";
        s += ring.vars[i];
        if (e[i] > 1) s += "^" + std::to_string(e[i]);
    }
    return s;
}

inline std::string to_string(const Polynomial& p) {
    if (p.is_zero()) return "0";
    const Ring& ring = *p.ring();
    std::string out;
    bool first = true;
    for (auto it = p.terms().rbegin(); it != p.terms().rend(); ++it) {
        const Exps& e = it->first;
        GaussianRational c = it->second;
        bool negative = c.is_real() && c.re < 0;
        if (first) {
            if (negative) {
                out += "-";
                c = -c;
            }
        } else {
            out += negative ? " - " : " + ";
            if (negative) c = -c;
        }
        first = false;
        std::string mon = monomial_str(ring, e);
        if (mon.empty()) {
            out += gaussian_str(c);
        } else if (c.is_one()) {
            out += mon;
        } else {
            out += gaussian_str(c) + "*" + mon;
        }
    }
    return out;
}

}  // namespace kohn
