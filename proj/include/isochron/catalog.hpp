#pragma once

// Built-in planar systems used by the CLI demos and the verification report:
// the classical commuting pairs, the generated families, and the two
// contrast systems that are centers without being isochronous (or
// isochronous without a commuting partner).

#include "isochron/field.hpp"
#include "isochron/newton_abel.hpp"
#include "isochron/parse.hpp"
#include "isochron/rational.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace isochron {

enum class Isochrony { isochronous, not_isochronous, unknown };

inline std::string_view to_string(Isochrony e) {
    switch (e) {
        case Isochrony::isochronous: return "isochronous";
        case Isochrony::not_isochronous: return "not_isochronous";
        default: return "unknown";
    }
}

struct CatalogEntry {
    std::string id;
    VectorField system;
    std::optional<VectorField> claimed_partner;
    Isochrony expected = Isochrony::unknown;
    std::string source;  // citation attached to reports, e.g. "Example 2"
};

// The cubic Kolmogorov-type family, symbolic in a: commutes with its printed
// partner for every value of the parameter.
inline CatalogEntry kolmogorov_cubic(const Rational& a) {
    const Poly2 x = Poly2::x(), y = Poly2::y();
    CatalogEntry e;
    e.id = "kolmogorov-cubic@a=" + to_string(a);
    e.source = "Example 3";
    e.expected = Isochrony::isochronous;
    e.system = {-y + rational(2) * x * y - a * x.pow(2) * y,
                x - x.pow(2) + y.pow(2) - a * x * y.pow(2)};
    e.claimed_partner = VectorField{x - x.pow(2) + y.pow(2) - a * x * y.pow(2),
                                    y - rational(2) * x * y - a * y.pow(3)};
    return e;
}

// The quadratic-plus-cubic family, symbolic in (alpha, beta).
inline CatalogEntry cubic_family(const Rational& alpha, const Rational& beta) {
    const Poly2 x = Poly2::x(), y = Poly2::y();
    const Poly2 mix = Poly2::constant(alpha) + alpha * x + beta * y;
    CatalogEntry e;
    e.id = "cubic-family@alpha=" + to_string(alpha) + ",beta=" + to_string(beta);
    e.source = "Example 4";
    e.expected = Isochrony::isochronous;
    e.system = {-y - rational(2) * x * y + x.pow(2) * mix,
                x + x.pow(2) - y.pow(2) + x * y * mix};
    e.claimed_partner =
        VectorField{x + x.pow(2) - y.pow(2) + x * y * mix,
                    y + rational(2) * x * y + y.pow(2) * mix};
    return e;
}

// Fixed catalog, in source order. Ids are stable; reports sort by them.
inline const std::vector<CatalogEntry>& catalog() {
    static const std::vector<CatalogEntry> entries = [] {
        auto f = [](const char* p, const char* q) {
            return VectorField{parse_poly(p), parse_poly(q)};
        };
        std::vector<CatalogEntry> v;

        v.push_back({"cubic-symmetric-a",
                     f("-y - 3*x^2*y + y^3", "x + x^3 - 3*x*y^2"),
                     f("x + x^3 - 3*x*y^2", "y + 3*x^2*y - y^3"),
                     Isochrony::isochronous, "Example 1, first pair"});
        v.push_back({"cubic-symmetric-b",
                     f("-y + x^2*y", "x + x*y^2"),
                     f("x - x^3", "y - x^2*y"),
                     Isochrony::isochronous, "Example 1, second pair"});
        v.push_back({"cubic-symmetric-c",
                     f("-y + 3*x^2*y", "x - 2*x^3 + 9*x*y^2"),
                     f("x - 5*x^3 + 6*x^5", "y - 9*x^2*y + 18*x^4*y"),
                     Isochrony::isochronous, "Example 1, third pair"});
        v.push_back({"cubic-symmetric-d",
                     f("-y - 3*x^2*y", "x + 2*x^3 - 9*x*y^2"),
                     f("x + 5*x^3 + 6*x^5", "y + 9*x^2*y + 18*x^4*y"),
                     Isochrony::isochronous, "Example 1, fourth pair"});

        v.push_back({"kukles",
                     f("-y", "x + 3*x*y + x^3"),
                     f("x + x*y + x^3", "y - x^2 + y^2 - x^4"),
                     Isochrony::isochronous, "Example 2"});

        v.push_back(kolmogorov_cubic(Rational(1)));
        v.push_back(cubic_family(Rational(1), Rational(2)));

        {
            // area-preserving map (u, v) = (x, y + x^2) pulled back to a
            // commuting oscillator/dilation pair
            auto [ham, partner] = hamiltonian_from_area_preserving(
                parse_poly("x"), parse_poly("y + x^2"));
            v.push_back({"area-preserving-hamiltonian", ham, partner,
                         Isochrony::isochronous, "Example 5"});
        }

        {
            AbelSystem s = generate_abel({Rational(0), Poly2::constant(1)});
            v.push_back({"abel-cubic-velocity", s.field(), transversal_partner(s),
                         Isochrony::isochronous,
                         "Theorem 8 instance a=0, h=1 (force x(1+y)^3)"});
        }
        {
            AbelSystem s = generate_abel({rational(1, 3), Poly2::zero()});
            v.push_back({"sabatini-lienard-linear", s.field(), transversal_partner(s),
                         Isochrony::isochronous,
                         "Theorem 7 / Sabatini class, q1 = x"});
        }

        v.push_back({"lienard-monotone-period", lienard_linear_velocity(Poly2::x()).field(),
                     std::nullopt, Isochrony::not_isochronous,
                     "Liénard contrast family, force x(1+y)"});

        v.push_back({"homogeneous-perturbation@m=1", homogeneous_perturbation(1).field(),
                     std::nullopt, Isochrony::isochronous, "system (5), m=1"});
        v.push_back({"homogeneous-perturbation@m=2", homogeneous_perturbation(2).field(),
                     std::nullopt, Isochrony::isochronous, "system (5), m=2"});

        // coexistence example: one isochronous center next to two
        // non-isochronous ones, so no flag for the system as a whole
        v.push_back({"devlin-quartic",
                     f("-y - x^4 + 4*x^2*y^2 + y^4", "x - 4*x^3*y"),
                     std::nullopt, Isochrony::unknown, "Devlin coexistence example"});

        return v;
    }();
    return entries;
}

inline const CatalogEntry* catalog_find(std::string_view id) {
    for (const auto& e : catalog())
        if (e.id == id) return &e;
    return nullptr;
}

}  // namespace isochron
