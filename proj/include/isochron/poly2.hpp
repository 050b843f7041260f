#pragma once

// Sparse bivariate polynomials over exact rationals — the coefficient carrier
// for all symbolic work in the toolkit. Terms are keyed by exponent pair in
// graded-lex order (x outranks y), so iteration, printing and linear-algebra
// bookkeeping share one canonical ordering. Zero coefficients are never
// stored; the zero polynomial is the empty term map.

#include "isochron/errors.hpp"
#include "isochron/rational.hpp"

#include <algorithm>
#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

namespace isochron {

struct Monomial {
    unsigned deg_x = 0;
    unsigned deg_y = 0;
    unsigned total() const { return deg_x + deg_y; }
    friend bool operator==(const Monomial&, const Monomial&) = default;
};

// Graded lexicographic, x before y: ascending total degree, then descending
// x-exponent within a degree (1, x, y, x^2, x*y, y^2, ...). Compatible with
// monomial multiplication, so leading-term division below is sound.
struct GrlexLess {
    bool operator()(const Monomial& a, const Monomial& b) const {
        if (a.total() != b.total()) return a.total() < b.total();
        return a.deg_x > b.deg_x;
    }
};

// degree() of the zero polynomial.
inline constexpr int kDegreeOfZero = std::numeric_limits<int>::min();

enum class Var { x, y };

class Poly2 {
  public:
    using TermMap = std::map<Monomial, Rational, GrlexLess>;

    Poly2() = default;

    static Poly2 zero() { return {}; }
    static Poly2 constant(const Rational& c) { return monomial(0, 0, c); }
    static Poly2 monomial(unsigned i, unsigned j, const Rational& c) {
        Poly2 p;
        if (sgn(c) != 0) p.terms_.emplace(Monomial{i, j}, c);
        return p;
    }
    static Poly2 x() { return monomial(1, 0, 1); }
    static Poly2 y() { return monomial(0, 1, 1); }

    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    int degree() const {
        return terms_.empty() ? kDegreeOfZero : static_cast<int>(terms_.rbegin()->first.total());
    }
    int degree_x() const {
        if (terms_.empty()) return kDegreeOfZero;
        unsigned d = 0;
        for (const auto& [m, c] : terms_) d = std::max(d, m.deg_x);
        return static_cast<int>(d);
    }
    int degree_y() const {
        if (terms_.empty()) return kDegreeOfZero;
        unsigned d = 0;
        for (const auto& [m, c] : terms_) d = std::max(d, m.deg_y);
        return static_cast<int>(d);
    }
    bool is_univariate_x() const { return degree_y() <= 0; }

    Rational coeff(unsigned i, unsigned j) const {
        auto it = terms_.find(Monomial{i, j});
        return it == terms_.end() ? Rational(0) : it->second;
    }

    // Coefficient of y^k, as a polynomial in x.
    Poly2 coeff_of_y(unsigned k) const {
        Poly2 out;
        for (const auto& [m, c] : terms_)
            if (m.deg_y == k) out.terms_.emplace(Monomial{m.deg_x, 0}, c);
        return out;
    }

    Poly2& operator+=(const Poly2& o) {
        for (const auto& [m, c] : o.terms_) add_term(m, c);
        return *this;
    }
    Poly2& operator-=(const Poly2& o) {
        for (const auto& [m, c] : o.terms_) add_term(m, -c);
        return *this;
    }
    Poly2& operator*=(const Rational& c) {
        if (sgn(c) == 0) {
            terms_.clear();
        } else {
            for (auto& [m, v] : terms_) v *= c;
        }
        return *this;
    }

    friend Poly2 operator+(Poly2 a, const Poly2& b) { return a += b; }
    friend Poly2 operator-(Poly2 a, const Poly2& b) { return a -= b; }
    friend Poly2 operator-(const Poly2& a) {
        Poly2 out = a;
        for (auto& [m, v] : out.terms_) v = -v;
        return out;
    }
    friend Poly2 operator*(const Poly2& a, const Poly2& b) {
        Poly2 out;
        for (const auto& [ma, ca] : a.terms_)
            for (const auto& [mb, cb] : b.terms_)
                out.add_term(Monomial{ma.deg_x + mb.deg_x, ma.deg_y + mb.deg_y}, ca * cb);
        return out;
    }
    friend Poly2 operator*(Poly2 a, const Rational& c) { return a *= c; }
    friend Poly2 operator*(const Rational& c, Poly2 a) { return a *= c; }
    friend Poly2 operator*(long c, Poly2 a) { return a *= Rational(c); }
    friend Poly2 operator*(Poly2 a, long c) { return a *= Rational(c); }

    friend bool operator==(const Poly2& a, const Poly2& b) { return a.terms_ == b.terms_; }

    Poly2 pow(unsigned e) const {
        Poly2 out = constant(1);
        for (unsigned k = 0; k < e; ++k) out = out * (*this);
        return out;
    }

    Poly2 diff(Var v) const {
        Poly2 out;
        for (const auto& [m, c] : terms_) {
            if (v == Var::x && m.deg_x > 0)
                out.terms_.emplace(Monomial{m.deg_x - 1, m.deg_y}, c * m.deg_x);
            if (v == Var::y && m.deg_y > 0)
                out.terms_.emplace(Monomial{m.deg_x, m.deg_y - 1}, c * m.deg_y);
        }
        return out;
    }

    // Antiderivative in x with zero constant term; defined for univariate-in-x
    // input only (the integrals in the Liénard constructions are univariate).
    Poly2 antiderivative_x() const {
        if (!is_zero() && !is_univariate_x())
            throw PreconditionViolated("antiderivative_x: polynomial depends on y");
        Poly2 out;
        for (const auto& [m, c] : terms_)
            out.terms_.emplace(Monomial{m.deg_x + 1, 0}, c / Rational(m.deg_x + 1));
        return out;
    }

    template <typename Scalar>
    Scalar eval_with(const Scalar& x, const Scalar& y) const;

    double eval(double x, double y) const { return eval_with<double>(x, y); }
    Rational eval_exact(const Rational& x, const Rational& y) const {
        return eval_with<Rational>(x, y);
    }

    std::string to_string() const;

    std::pair<Monomial, Rational> leading() const { return *terms_.rbegin(); }

  private:
    void add_term(const Monomial& m, const Rational& c) {
        auto [it, inserted] = terms_.try_emplace(m, c);
        if (!inserted) {
            it->second += c;
            if (sgn(it->second) == 0) terms_.erase(it);
        } else if (sgn(c) == 0) {
            terms_.erase(it);
        }
    }

    TermMap terms_;
};

// Polynomials used in a univariate-in-x role (Liénard/Abel coefficient
// functions). Same representation; callers enforce is_univariate_x().
using Poly1 = Poly2;

namespace detail {
template <typename Scalar>
Scalar pow_n(const Scalar& base, unsigned e);
template <>
inline double pow_n<double>(const double& base, unsigned e) {
    double out = 1.0, b = base;
    for (unsigned k = e; k; k >>= 1) {
        if (k & 1) out *= b;
        b *= b;
    }
    return out;
}
template <>
inline Rational pow_n<Rational>(const Rational& base, unsigned e) {
    return isochron::pow(base, e);
}
}  // namespace detail

// Horner-style evaluation: stratify by y-power, run a sparse Horner scheme in
// x on each stratum, then one in y across strata.
template <typename Scalar>
Scalar Poly2::eval_with(const Scalar& x, const Scalar& y) const {
    // strata[j] = coefficient rows of y^j, x-exponent descending
    std::map<unsigned, std::vector<std::pair<unsigned, Scalar>>> strata;
    for (const auto& [m, c] : terms_) {
        if constexpr (std::is_same_v<Scalar, double>)
            strata[m.deg_y].emplace_back(m.deg_x, to_double(c));
        else
            strata[m.deg_y].emplace_back(m.deg_x, c);
    }
    // explicit return type: gmpxx expression templates must not escape
    auto horner = [](const std::vector<std::pair<unsigned, Scalar>>& row,
                     const Scalar& at) -> Scalar {
        Scalar acc = row.front().second;
        unsigned prev = row.front().first;
        for (std::size_t k = 1; k < row.size(); ++k) {
            acc = acc * detail::pow_n(at, prev - row[k].first) + row[k].second;
            prev = row[k].first;
        }
        return acc * detail::pow_n(at, prev);
    };
    Scalar total(0);
    if (strata.empty()) return total;
    for (auto& [j, row] : strata)
        std::sort(row.begin(), row.end(),
                  [](const auto& a, const auto& b) { return a.first > b.first; });
    auto it = strata.rbegin();
    unsigned prev_j = it->first;
    total = horner(it->second, x);
    for (++it; it != strata.rend(); ++it) {
        total = total * detail::pow_n(y, prev_j - it->first) + horner(it->second, x);
        prev_j = it->first;
    }
    return total * detail::pow_n(y, prev_j);
}

// Single-divisor exact division. nullopt when b does not divide a exactly;
// the early exit is sound because GrlexLess is a monomial order.
inline std::optional<Poly2> exact_div(const Poly2& a, const Poly2& b) {
    if (b.is_zero()) throw DivisionByZeroPolynomial();
    Poly2 quot, rem = a;
    const auto [bm, bc] = b.leading();
    while (!rem.is_zero()) {
        const auto [rm, rc] = rem.leading();
        if (rm.deg_x < bm.deg_x || rm.deg_y < bm.deg_y) return std::nullopt;
        Poly2 t = Poly2::monomial(rm.deg_x - bm.deg_x, rm.deg_y - bm.deg_y, rc / bc);
        quot += t;
        rem -= t * b;
    }
    return quot;
}

inline std::string Poly2::to_string() const {
    if (terms_.empty()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [m, c] : terms_) {
        const bool neg = sgn(c) < 0;
        if (first) {
            if (neg) out += "-";
        } else {
            out += neg ? " - " : " + ";
        }
        const Rational mag = abs(c);
        std::vector<std::string> factors;
        // A leading "-y^2" would reparse as (-y)^2; spell the coefficient out.
        const bool unit = (mag == 1);
        const bool hazard = first && neg && unit && m.total() > 0 &&
                            ((m.deg_x > 0 ? m.deg_x : m.deg_y) >= 2);
        if (!unit || m.total() == 0 || hazard) factors.push_back(isochron::to_string(mag));
        if (m.deg_x == 1) factors.push_back("x");
        if (m.deg_x >= 2) factors.push_back("x^" + std::to_string(m.deg_x));
        if (m.deg_y == 1) factors.push_back("y");
        if (m.deg_y >= 2) factors.push_back("y^" + std::to_string(m.deg_y));
        for (std::size_t k = 0; k < factors.size(); ++k) {
            if (k) out += "*";
            out += factors[k];
        }
        first = false;
    }
    return out;
}

}  // namespace isochron
