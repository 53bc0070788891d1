// rational.hpp — exact arbitrary-precision rationals (GMP-backed).
#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>

namespace kohn {

using BigInt = mpz_class;
using Rat = mpq_class;  // canonical: positive denominator, coprime, 0 = 0/1

inline Rat make_rat(long num, long den = 1) {
    if (den == 0) throw std::invalid_argument("rational with zero denominator");
    Rat q(num, den);
    q.canonicalize();
    return q;
}

inline Rat make_rat(const BigInt& num, const BigInt& den) {
    if (den == 0) throw std::invalid_argument("rational with zero denominator");
    Rat q(num, den);
    q.canonicalize();
    return q;
}

// "3", "-3/4"
inline std::string rat_str(const Rat& q) {
    if (q.get_den() == 1) return q.get_num().get_str();
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

inline Rat rat_from_str(const std::string& s) {
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos) {
            return Rat(BigInt(s));
        }
        BigInt num(s.substr(0, slash));
        BigInt den(s.substr(slash + 1));
        return make_rat(num, den);
    } catch (const std::invalid_argument&) {
        throw std::invalid_argument("malformed rational: " + s);
    }
}

inline const Rat& rat_min(const Rat& a, const Rat& b) { return a < b ? a : b; }

}  // namespace kohn
