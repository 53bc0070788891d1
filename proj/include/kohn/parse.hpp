// parse.hpp — recursive-descent parser for the polynomial grammar:
//   expr   := ['+'|'-'] term (('+'|'-') term)*
//   term   := factor ('*' factor)*
//   factor := coeff | var ('^' nat)? | '(' expr ')'
//   coeff  := '(' rat ('+'|'-') rat 'i' ')' | rat
//   rat    := int ('/' nat)?
// Whitespace is insignificant. Parse-print-parse is the identity on
// canonical forms.
#pragma once

#include <cctype>
#include <stdexcept>
#include <string>

#include "kohn/polynomial.hpp"

namespace kohn {

struct ParseError : std::runtime_error {
    size_t pos;
    ParseError(size_t p, const std::string& what)
        : std::runtime_error("parse error at position " + std::to_string(p) + ": " + what), pos(p) {}
};

namespace detail {

class PolyParser {
  public:
    PolyParser(const std::string& text, RingPtr ring) : text_(text), ring_(std::move(ring)) {}

    Polynomial parse() {
        Polynomial p = expr();
        skip_ws();
        if (pos_ != text_.size()) throw ParseError(pos_, "unexpected trailing input");
        return p;
    }

  private:
    Polynomial expr() {
        skip_ws();
        bool neg = false;
        if (peek() == '+' || peek() == '-') neg = (get() == '-');
        Polynomial acc = term();
        if (neg) acc = -acc;
        while (true) {
            skip_ws();
            char c = peek();
            if (c != '+' && c != '-') break;
            get();
            Polynomial t = term();
            acc = (c == '+') ? acc + t : acc - t;
        }
        return acc;
    }

    Polynomial term() {
        Polynomial acc = factor();
        while (true) {
            skip_ws();
            if (peek() != '*') break;
            get();
            acc *= factor();
        }
        return acc;
    }

    Polynomial factor() {
        skip_ws();
        char c = peek();
        if (c == '\0') throw ParseError(pos_, "unexpected end of input");
        if (c == '(') {
            size_t save = pos_;
            try {
                return complex_coeff();
            } catch (const ParseError&) {
                pos_ = save;  // not a complex literal; parenthesized expression
            }
            expect('(');
            Polynomial p = expr();
            skip_ws();
            expect(')');
            return p;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '-') {
            return Polynomial::constant(ring_, GaussianRational(rational()));
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            size_t at = pos_;
            std::string name = identifier();
            int idx = ring_->index_of(name);
            if (idx < 0) throw ParseError(at, "unknown variable '" + name + "'");
            unsigned e = 1;
            skip_ws();
            if (peek() == '^') {
                get();
                e = natural();
            }
            Exps exps(ring_->size(), 0);
            exps[static_cast<size_t>(idx)] = e;
            return Polynomial::monomial(ring_, exps, GaussianRational(1));
        }
        throw ParseError(pos_, std::string("unexpected character '") + c + "'");
    }

    Polynomial complex_coeff() {
        expect('(');
        Rat re = rational();
        skip_ws();
        char sign = peek();
        if (sign != '+' && sign != '-') throw ParseError(pos_, "expected '+' or '-' in complex literal");
        get();
        Rat im = rational();
        if (sign == '-') im = -im;
        skip_ws();
        if (peek() != 'i') throw ParseError(pos_, "expected 'i' in complex literal");
        get();
        skip_ws();
        expect(')');
        return Polynomial::constant(ring_, GaussianRational(re, im));
    }

    Rat rational() {
        skip_ws();
        bool neg = false;
        if (peek() == '-') {
            neg = true;
            get();
        }
        BigInt num(digit_string());
        if (neg) num = -num;
        skip_ws();
        if (peek() == '/') {
            get();
            size_t dat = pos_;
            BigInt den(digit_string());
            if (den == 0) throw ParseError(dat, "malformed rational: zero denominator");
            return make_rat(num, den);
        }
        return Rat(num);
    }

    std::string digit_string() {
        skip_ws();
        size_t at = pos_;
        if (!std::isdigit(static_cast<unsigned char>(peek()))) throw ParseError(at, "expected number");
        std::string digits;
        while (std::isdigit(static_cast<unsigned char>(peek()))) digits += get();
        return digits;
    }

    unsigned natural() {
        size_t at = pos_;
        std::string digits = digit_string();
        try {
            unsigned long u = std::stoul(digits);
            if (u > 100000) throw std::out_of_range("exp");
            return static_cast<unsigned>(u);
        } catch (const std::out_of_range&) {
            throw ParseError(at, "exponent out of range");
        }
    }

    std::string identifier() {
        std::string s;
        s += get();
        while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_') s += get();
        return s;
    }

    void expect(char c) {
        skip_ws();
        if (peek() != c) throw ParseError(pos_, std::string("expected '") + c + "'");
        get();
    }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }
    char get() { return text_[pos_++]; }

    const std::string& text_;
    RingPtr ring_;
    size_t pos_ = 0;
};

}  // namespace detail

inline Polynomial parse_poly(const std::string& text, const RingPtr& ring) {
    return detail::PolyParser(text, ring).parse();
}

}  // namespace kohn
