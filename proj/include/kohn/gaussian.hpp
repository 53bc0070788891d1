// gaussian.hpp — exact Gaussian rationals a + b*i, the coefficient field.
#pragma once

#include <stdexcept>
#include <string>

#include "kohn/rational.hpp"

namespace kohn {

struct GaussianRational {
    Rat re;
    Rat im;

    GaussianRational() : re(0), im(0) {}
    GaussianRational(long n) : re(n), im(0) {}  // NOLINT: implicit for literals
    explicit GaussianRational(const Rat& r) : re(r), im(0) {}
    GaussianRational(Rat r, Rat i) : re(std::move(r)), im(std::move(i)) {}

    bool is_zero() const { return re == 0 && im == 0; }
    bool is_real() const { return im == 0; }
    bool is_one() const { return re == 1 && im == 0; }

    friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
        return a.re == b.re && a.im == b.im;
    }
    friend bool operator!=(const GaussianRational& a, const GaussianRational& b) { return !(a == b); }

    GaussianRational operator-() const { return {-re, -im}; }

    friend GaussianRational operator+(const GaussianRational& a, const GaussianRational& b) {
        return {a.re + b.re, a.im + b.im};
    }
    friend GaussianRational operator-(const GaussianRational& a, const GaussianRational& b) {
        return {a.re - b.re, a.im - b.im};
    }
    friend GaussianRational operator*(const GaussianRational& a, const GaussianRational& b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }

    GaussianRational conj() const { return {re, -im}; }

    GaussianRational inverse() const {
        if (is_zero()) throw std::invalid_argument("division by zero Gaussian rational");
        Rat n = re * re + im * im;
        return {re / n, -im / n};
    }

    friend GaussianRational operator/(const GaussianRational& a, const GaussianRational& b) {
        return a * b.inverse();
    }

    GaussianRational& operator+=(const GaussianRational& o) { return *this = *this + o; }
    GaussianRational& operator-=(const GaussianRational& o) { return *this = *this - o; }
    GaussianRational& operator*=(const GaussianRational& o) { return *this = *this * o; }
    GaussianRational& operator/=(const GaussianRational& o) { return *this = *this / o; }
};

// Coefficient rendering per the polynomial grammar: real rationals bare,
// complex values as "(re+imi)" / "(re-imi)".
inline std::string gaussian_str(const GaussianRational& c) {
    if (c.is_real()) return rat_str(c.re);
    std::string s = "(" + rat_str(c.re);
    if (c.im >= 0)
        s += "+" + rat_str(c.im) + "i)";
    else
        s += "-" + rat_str(-c.im) + "i)";
    return s;
}

}  // namespace kohn
