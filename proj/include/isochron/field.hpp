#pragma once

// Planar polynomial vector fields and the commutator algebra on them.
// Fields are pairs (p, q) meaning x' = p(x,y), y' = q(x,y). The bracket
// orientation is fixed once here; everything downstream (centralizer
// solving, partner verification) relies on the same sign convention.

#include "isochron/errors.hpp"
#include "isochron/poly2.hpp"

#include <complex>
#include <string>
#include <utility>
#include <vector>

namespace isochron {

struct VectorField {
    Poly2 p, q;

    bool is_zero() const { return p.is_zero() && q.is_zero(); }
    int degree() const { return std::max(p.degree(), q.degree()); }

    std::pair<double, double> eval(double x, double y) const {
        return {p.eval(x, y), q.eval(x, y)};
    }

    std::string to_string() const { return "(" + p.to_string() + ", " + q.to_string() + ")"; }

    friend bool operator==(const VectorField&, const VectorField&) = default;
    friend VectorField operator+(const VectorField& a, const VectorField& b) {
        return {a.p + b.p, a.q + b.q};
    }
    friend VectorField operator-(const VectorField& a, const VectorField& b) {
        return {a.p - b.p, a.q - b.q};
    }
    friend VectorField operator-(const VectorField& a) { return {-a.p, -a.q}; }
    friend VectorField operator*(const Rational& c, const VectorField& a) {
        return {c * a.p, c * a.q};
    }
};

// Commutator [F, G] = (DF)G - (DG)F, written out per component. Bilinear,
// antisymmetric; [F, G] = 0 is the commutation condition used throughout.
inline VectorField lie_bracket(const VectorField& F, const VectorField& G) {
    const Poly2 px = F.p.diff(Var::x), py = F.p.diff(Var::y);
    const Poly2 qx = F.q.diff(Var::x), qy = F.q.diff(Var::y);
    const Poly2 rx = G.p.diff(Var::x), ry = G.p.diff(Var::y);
    const Poly2 sx = G.q.diff(Var::x), sy = G.q.diff(Var::y);
    return {G.p * px + G.q * py - F.p * rx - F.q * ry,
            G.p * qx + G.q * qy - F.p * sx - F.q * sy};
}

inline bool commutes(const VectorField& F, const VectorField& G) {
    return lie_bracket(F, G).is_zero();
}

// (p, q) is the real form of a holomorphic z' = f(z) iff p_x = q_y and
// p_y = -q_x.
inline bool is_cauchy_riemann(const VectorField& F) {
    return F.p.diff(Var::x) == F.q.diff(Var::y) && F.p.diff(Var::y) == -F.q.diff(Var::x);
}

// Clockwise quarter-turn companion (q, -p). For a Cauchy-Riemann field this
// is the real form of z' = -i f(z) and always commutes with the field.
inline VectorField orthogonal(const VectorField& F) { return {F.q, -F.p}; }

// det[F | G]; identically zero iff the two fields are everywhere parallel.
inline Poly2 transversality_det(const VectorField& F, const VectorField& G) {
    return F.p * G.q - F.q * G.p;
}

// Polynomial f(z) = sum c_k z^k with exact rational Cartesian coefficients.
struct ComplexPoly {
    // coeffs[k] = (Re c_k, Im c_k), ascending; trailing zeros trimmed
    std::vector<std::pair<Rational, Rational>> coeffs;

    explicit ComplexPoly(std::vector<std::pair<Rational, Rational>> c = {}) : coeffs(std::move(c)) {
        while (!coeffs.empty() && sgn(coeffs.back().first) == 0 && sgn(coeffs.back().second) == 0)
            coeffs.pop_back();
    }

    bool is_zero() const { return coeffs.empty(); }
    int degree() const { return static_cast<int>(coeffs.size()) - 1; }

    ComplexPoly derivative() const {
        std::vector<std::pair<Rational, Rational>> d;
        for (std::size_t k = 1; k < coeffs.size(); ++k)
            d.emplace_back(coeffs[k].first * static_cast<long>(k),
                           coeffs[k].second * static_cast<long>(k));
        return ComplexPoly(std::move(d));
    }

    std::complex<double> eval(std::complex<double> z) const {
        std::complex<double> acc(0.0, 0.0);
        for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it)
            acc = acc * z + std::complex<double>(to_double(it->first), to_double(it->second));
        return acc;
    }
};

// Realification of z' = f(z): with z = x + iy and f = u + iv this is the
// field (u(x,y), v(x,y)). Powers of z expand by the exact recurrence
// Re z^(k+1) = x Re z^k - y Im z^k, Im z^(k+1) = x Im z^k + y Re z^k.
inline VectorField from_holomorphic(const ComplexPoly& f) {
    Poly2 u, v;
    Poly2 re = Poly2::constant(1), im;  // z^0
    const Poly2 X = Poly2::x(), Y = Poly2::y();
    for (std::size_t k = 0; k < f.coeffs.size(); ++k) {
        const auto& [a, b] = f.coeffs[k];  // c_k = a + ib
        u += a * re - b * im;
        v += b * re + a * im;
        Poly2 re_next = re * X - im * Y;
        im = re * Y + im * X;
        re = std::move(re_next);
    }
    return {u, v};
}

// For an area-preserving map (u, v) (Jacobian determinant identically 1)
// fixing the origin, returns the commuting Hamiltonian pair
//   F = (-u*u_y - v*v_y,  u*u_x + v*v_x)   (Hamiltonian (u^2+v^2)/2)
//   G = ( u*v_y - v*u_y, -u*v_x + v*u_x)   (Hamiltonian: angular part)
inline std::pair<VectorField, VectorField> hamiltonian_from_area_preserving(const Poly2& u,
                                                                            const Poly2& v) {
    const Poly2 ux = u.diff(Var::x), uy = u.diff(Var::y);
    const Poly2 vx = v.diff(Var::x), vy = v.diff(Var::y);
    if (!(ux * vy - uy * vx == Poly2::constant(1))) throw NotAreaPreserving();
    if (sgn(u.eval_exact(0, 0)) != 0 || sgn(v.eval_exact(0, 0)) != 0) throw OriginNotFixed();
    VectorField F{-u * uy - v * vy, u * ux + v * vx};
    VectorField G{u * vy - v * uy, -u * vx + v * ux};
    return {F, G};
}

}  // namespace isochron
