#pragma once

// Recursive-descent parser for polynomial text.
//
//   expr   := term (('+'|'-') term)*
//   term   := factor ('*' factor)*
//   factor := atom ('^' uint)?
//   atom   := rational | 'x' | 'y' | '(' expr ')' | '-' atom
//
// Multiplication is always explicit ("3*x", never "3x"); rational literals
// are "a" or "a/b". Each production lowers directly to a Poly2, so every
// well-formed input yields a polynomial. Errors carry the byte offset of the
// offending token plus the token classes that were acceptable there.

#include "isochron/errors.hpp"
#include "isochron/poly2.hpp"

#include <cctype>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace isochron {

namespace detail {

// Exponents are capped to keep CLI input from requesting astronomically
// large expansions like (x+y)^10^6.
inline constexpr unsigned kMaxExponent = 512;

struct PolyParser {
    std::string_view src;
    std::size_t pos = 0;

    [[noreturn]] void fail(std::size_t at, std::vector<std::string> expected) const {
        std::string msg = "parse error at offset " + std::to_string(at) + ": expected ";
        for (std::size_t k = 0; k < expected.size(); ++k) {
            if (k) msg += expected.size() == 2 ? " or " : (k + 1 == expected.size() ? ", or " : ", ");
            msg += expected[k];
        }
        throw ParseError(std::move(msg), at, std::move(expected));
    }

    void skip_ws() {
        while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos]))) ++pos;
    }
    bool at_end() {
        skip_ws();
        return pos == src.size();
    }
    char peek() {
        skip_ws();
        return pos < src.size() ? src[pos] : '\0';
    }
    bool consume(char c) {
        if (peek() == c) {
            ++pos;
            return true;
        }
        return false;
    }

    // digits ('/' digits)? — returns the literal and whether it had a slash
    std::pair<Rational, bool> lex_number() {
        std::size_t start = pos;
        while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) ++pos;
        mpz_class num(std::string(src.substr(start, pos - start)));
        mpz_class den(1);
        bool fraction = false;
        if (pos < src.size() && src[pos] == '/') {
            ++pos;
            std::size_t den_start = pos;
            while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) ++pos;
            if (pos == den_start) fail(den_start, {"denominator digits"});
            den = mpz_class(std::string(src.substr(den_start, pos - den_start)));
            if (den == 0) fail(den_start, {"nonzero denominator"});
            fraction = true;
        }
        Rational q(num, den);
        q.canonicalize();
        return {q, fraction};
    }

    unsigned lex_exponent() {
        skip_ws();
        std::size_t at = pos;
        if (pos == src.size() || !std::isdigit(static_cast<unsigned char>(src[pos])))
            fail(at, {"nonnegative integer exponent"});
        auto [q, fraction] = lex_number();
        if (fraction || q.get_den() != 1 || q > kMaxExponent) {
            if (q > kMaxExponent && !fraction && q.get_den() == 1)
                fail(at, {"exponent <= " + std::to_string(kMaxExponent)});
            fail(at, {"nonnegative integer exponent"});
        }
        return static_cast<unsigned>(q.get_num().get_ui());
    }

    Poly2 parse_atom() {
        skip_ws();
        std::size_t at = pos;
        if (pos == src.size()) fail(at, {"number", "'x'", "'y'", "'('", "'-'"});
        char c = src[pos];
        if (c == '-') {
            ++pos;
            return -parse_atom();
        }
        if (c == 'x') {
            ++pos;
            return Poly2::x();
        }
        if (c == 'y') {
            ++pos;
            return Poly2::y();
        }
        if (c == '(') {
            ++pos;
            Poly2 inner = parse_expr();
            skip_ws();
            if (!consume(')')) fail(pos, {"')'"});
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) return Poly2::constant(lex_number().first);
        fail(at, {"number", "'x'", "'y'", "'('", "'-'"});
    }

    Poly2 parse_factor() {
        Poly2 base = parse_atom();
        if (consume('^')) return base.pow(lex_exponent());
        return base;
    }

    Poly2 parse_term() {
        Poly2 prod = parse_factor();
        while (consume('*')) prod = prod * parse_factor();
        return prod;
    }

    Poly2 parse_expr() {
        Poly2 sum = parse_term();
        while (true) {
            if (consume('+')) {
                sum += parse_term();
            } else if (consume('-')) {
                sum -= parse_term();
            } else {
                return sum;
            }
        }
    }
};

}  // namespace detail

inline Poly2 parse_poly(std::string_view text) {
    detail::PolyParser p{text};
    Poly2 out = p.parse_expr();
    if (!p.at_end())
        p.fail(p.pos, {"'+'", "'-'", "'*'", "'^'", "end of input"});
    return out;
}

}  // namespace isochron
