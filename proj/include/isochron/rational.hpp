#pragma once

// Exact rational scalars. GMP's mpq_class supplies arithmetic; helpers here
// keep construction canonical (reduced, positive denominator) and add the few
// operations gmpxx lacks: integer powers, exact square roots, and parsing of
// the "num/den" text form used in CLI input and JSON output.

#include <gmpxx.h>

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace isochron {

using Rational = mpq_class;

inline Rational rational(long num, long den = 1) {
    if (den == 0) throw std::invalid_argument("rational: zero denominator");
    Rational q(num, den);
    q.canonicalize();
    return q;
}

// Accepts an optional sign, digits, and an optional "/digits" part.
inline Rational parse_rational(std::string_view text) {
    mpq_class q;
    if (text.empty() || q.set_str(std::string(text), 10) != 0)
        throw std::invalid_argument("parse_rational: malformed rational '" + std::string(text) + "'");
    if (q.get_den() == 0)
        throw std::invalid_argument("parse_rational: zero denominator in '" + std::string(text) + "'");
    q.canonicalize();
    return q;
}

// Canonical text form: "n" or "n/d" with d > 0 and gcd(n, d) = 1.
inline std::string to_string(const Rational& q) { return q.get_str(); }

inline Rational pow(const Rational& base, unsigned long e) {
    Rational out;
    mpz_pow_ui(out.get_num_mpz_t(), base.get_num_mpz_t(), e);
    mpz_pow_ui(out.get_den_mpz_t(), base.get_den_mpz_t(), e);
    return out;  // base was canonical, so num^e/den^e already is
}

// Nonnegative exact square root, if one exists in Q.
inline std::optional<Rational> sqrt_exact(const Rational& q) {
    if (sgn(q) < 0) return std::nullopt;
    if (!mpz_perfect_square_p(q.get_num_mpz_t()) || !mpz_perfect_square_p(q.get_den_mpz_t()))
        return std::nullopt;
    Rational r;
    mpz_sqrt(r.get_num_mpz_t(), q.get_num_mpz_t());
    mpz_sqrt(r.get_den_mpz_t(), q.get_den_mpz_t());
    return r;
}

inline double to_double(const Rational& q) { return q.get_d(); }

}  // namespace isochron
