#pragma once

// Newton systems (-y, q(x,y)) and their cubic-in-velocity (Abel) subclass.
//
// For a Newton field F = (-y, q), a commuting polynomial partner (r, s) has
// its second component forced by the first bracket component; the remaining
// obstruction collapses to a single scalar polynomial. The cubic subclass
//   y' = q0(x) + 3 q1(x) y + q2(x) y^2 + q3(x) y^3
// admits a commuting transversal partner exactly when the two coefficient
// conditions below hold, and carries a two-parameter generator (rational a,
// polynomial h) that produces every such system together with exact
// parameter recovery.

#include "isochron/errors.hpp"
#include "isochron/field.hpp"
#include "isochron/poly2.hpp"

#include <optional>
#include <utility>

namespace isochron {

struct NewtonSystem {
    Poly2 q;  // x' = -y, y' = q(x, y)

    VectorField field() const { return {-Poly2::y(), q}; }
};

// Center-at-origin normalization: q(0,0) = 0, (d/dx q)(0,0) = 1, and the
// y-linear coefficient vanishes at x = 0.
inline bool is_normalized_newton(const NewtonSystem& sys) {
    const Poly1 q0 = sys.q.coeff_of_y(0);
    const Poly1 q1 = sys.q.coeff_of_y(1);
    return sgn(q0.eval_exact(0, 0)) == 0 && q0.diff(Var::x).eval_exact(0, 0) == 1 &&
           sgn(q1.eval_exact(0, 0)) == 0;
}

// The unique s making the first bracket component of [(-y, q), (r, s)]
// vanish: s = y * r_x - q * r_y.
inline Poly2 complete_partner(const Poly2& q, const Poly2& r) {
    return Poly2::y() * r.diff(Var::x) - q * r.diff(Var::y);
}

// Scalar obstruction left after completion:
//   q_x (r - y r_y) + (y q_y - q) r_x + y^2 r_xx - 2 y q r_xy + q^2 r_yy.
// Zero iff (r, complete_partner(q, r)) commutes with (-y, q).
inline Poly2 commutation_residual(const Poly2& q, const Poly2& r) {
    const Poly2 Y = Poly2::y();
    const Poly2 qx = q.diff(Var::x), qy = q.diff(Var::y);
    const Poly2 rx = r.diff(Var::x), ry = r.diff(Var::y);
    const Poly2 rxx = rx.diff(Var::x), rxy = rx.diff(Var::y), ryy = ry.diff(Var::y);
    return qx * (r - Y * ry) + (Y * qy - q) * rx + Y * Y * rxx - 2 * Y * q * rxy + q * q * ryy;
}

struct AbelSystem {
    Poly1 q0, q1, q2, q3;  // y' = q0 + 3 q1 y + q2 y^2 + q3 y^3

    NewtonSystem newton() const {
        for (const Poly1* c : {&q0, &q1, &q2, &q3})
            if (!c->is_univariate_x())
                throw PreconditionViolated("abel coefficients must be univariate in x");
        const Poly2 Y = Poly2::y();
        return {q0 + 3 * q1 * Y + q2 * Y.pow(2) + q3 * Y.pow(3)};
    }
    VectorField field() const { return newton().field(); }

    friend bool operator==(const AbelSystem&, const AbelSystem&) = default;
};

struct AbelConditionReport {
    bool holds = false;
    Poly1 defect1, defect2;  // zero polynomials exactly when the class conditions hold
};

// Cubic-class conditions for a commuting transversal partner:
//   q2 q0   = 3 q1^2 - q0' + 1
//   q3 q0^2 = q1^3 - q1' q0 + q1
inline AbelConditionReport check_abel_conditions(const AbelSystem& sys) {
    const Poly1 d1 = sys.q2 * sys.q0 - (3 * sys.q1 * sys.q1 - sys.q0.diff(Var::x) + Poly2::constant(1));
    const Poly1 d2 = sys.q3 * sys.q0 * sys.q0 -
                     (sys.q1.pow(3) - sys.q1.diff(Var::x) * sys.q0 + sys.q1);
    return {d1.is_zero() && d2.is_zero(), d1, d2};
}

// Solve the class conditions for (q2, q3) given (q0, q1); nullopt when the
// forced values are not polynomials.
inline std::optional<std::pair<Poly1, Poly1>> solve_q2_q3(const Poly1& q0, const Poly1& q1) {
    if (q0.is_zero()) throw PreconditionViolated("solve_q2_q3: q0 must be nonzero");
    if (!q0.is_univariate_x() || !q1.is_univariate_x())
        throw PreconditionViolated("solve_q2_q3: coefficients must be univariate in x");
    const Poly1 num2 = 3 * q1 * q1 - q0.diff(Var::x) + Poly2::constant(1);
    const Poly1 num3 = q1.pow(3) - q1.diff(Var::x) * q0 + q1;
    auto q2 = exact_div(num2, q0);
    if (!q2) return std::nullopt;
    auto q3 = exact_div(num3, q0 * q0);
    if (!q3) return std::nullopt;
    return std::make_pair(*q2, *q3);
}

// Commuting transversal partner for a system satisfying the class
// conditions: first component q0 + q1 y, second forced by completion.
inline VectorField transversal_partner(const AbelSystem& sys) {
    auto report = check_abel_conditions(sys);
    if (!report.holds)
        throw ConditionsNotSatisfied("transversal partner requires the cubic-class conditions");
    const Poly2 r = sys.q0 + sys.q1 * Poly2::y();
    return {r, complete_partner(sys.newton().q, r)};
}

struct AbelGeneratorInput {
    Rational a;
    Poly1 h;

    friend bool operator==(const AbelGeneratorInput&, const AbelGeneratorInput&) = default;
};

// Two-parameter generator of the cubic class. With g = x + a^2 x^3:
//   q0 = g
//   q1 = a x + g h
//   q2 = 6 a x h + 3 g h^2
//   q3 = 3 a x h^2 + g h^3 - h'
// The produced system always satisfies the class conditions; this is
// re-derived via solve_q2_q3 as an internal cross-check.
inline AbelSystem generate_abel(const AbelGeneratorInput& in) {
    if (!in.h.is_univariate_x())
        throw PreconditionViolated("generate_abel: h must be univariate in x");
    const Poly2 X = Poly2::x();
    const Poly1 g = X + pow(in.a, 2) * X.pow(3);
    const Poly1 ax = in.a * X;
    AbelSystem sys;
    sys.q0 = g;
    sys.q1 = ax + g * in.h;
    sys.q2 = 6 * ax * in.h + 3 * g * in.h * in.h;
    sys.q3 = 3 * ax * in.h * in.h + g * in.h.pow(3) - in.h.diff(Var::x);
    auto solved = solve_q2_q3(sys.q0, sys.q1);
    if (!solved || solved->first != sys.q2 || solved->second != sys.q3)
        throw VerificationFailed("generate_abel: closed form disagrees with solved coefficients");
    return sys;
}

// Exact inverse of generate_abel on its image. q0 must be exactly
// x + A x^3 with A a rational square; the sign of a = ±sqrt(A) is fixed by
// divisibility of q1 - a x by q0 (at most one sign divides when a != 0).
inline std::optional<AbelGeneratorInput> recover_abel_parameters(const Poly1& q0,
                                                                 const Poly1& q1) {
    if (!q0.is_univariate_x() || !q1.is_univariate_x())
        throw PreconditionViolated("recover_abel_parameters: inputs must be univariate in x");
    if (q0.coeff(1, 0) != 1) return std::nullopt;
    const Rational A = q0.coeff(3, 0);
    if (q0 != Poly2::x() + A * Poly2::x().pow(3)) return std::nullopt;
    auto a0 = sqrt_exact(A);
    if (!a0) return std::nullopt;
    for (const Rational& a : {*a0, Rational(-*a0)}) {
        auto h = exact_div(q1 - a * Poly2::x(), q0);
        if (h) return AbelGeneratorInput{a, *h};
        if (sgn(a) == 0) break;  // a = -a, nothing new to try
    }
    return std::nullopt;
}

// Liénard-type construction with linear velocity dependence: for odd q1, the
// system y' = q0 + q1 y with q0 = x + I(x)^2 / x^3, I = integral of s q1(s),
// has an isochronous center at the origin.
inline NewtonSystem gen_lienard_isochronous(const Poly1& q1) {
    if (!q1.is_univariate_x()) throw PreconditionViolated("gen_lienard_isochronous: q1 must be univariate in x");
    for (const auto& [m, c] : q1.terms())
        if (m.deg_x % 2 == 0) throw NotOdd();
    const Poly2 X = Poly2::x();
    const Poly1 I = (X * q1).antiderivative_x();
    auto ratio = exact_div(I * I, X.pow(3));
    if (!ratio) throw VerificationFailed("gen_lienard_isochronous: x^3 must divide I^2 for odd q1");
    return {X + *ratio + q1 * Poly2::y()};
}

// Contrast family (-y, f(x) (1 + y)): a center for f = x + O(x^2), but not
// isochronous in general (period grows with amplitude for f = x).
inline NewtonSystem lienard_linear_velocity(const Poly1& f) {
    if (!f.is_univariate_x())
        throw PreconditionViolated("lienard_linear_velocity: f must be univariate in x");
    return {f * (Poly2::constant(1) + Poly2::y())};
}

// Homogeneous perturbation of the harmonic oscillator:
//   y' = x + x^(2m-1) y (x^2 + y^2), m >= 1.
// Isochronous (period 2pi at every amplitude) yet with trivial centralizer.
inline NewtonSystem homogeneous_perturbation(unsigned m) {
    if (m < 1) throw PreconditionViolated("homogeneous_perturbation: m must be >= 1");
    const Poly2 X = Poly2::x(), Y = Poly2::y();
    return {X + Poly2::monomial(2 * m - 1, 0, 1) * Y * (X.pow(2) + Y.pow(2))};
}

}  // namespace isochron
