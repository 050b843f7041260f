// Go/no-go gate for the whole toolkit: ten checks covering exact algebra,
// centralizer dimensions, generated families, measured periods, and the
// rendering-grade numerics. One line per criterion; exit 0 only when every
// criterion holds. Tolerances are the published contract of the library, so
// they are pinned here rather than shared with the unit suite.

#include "isochron/catalog.hpp"
#include "isochron/centralizer.hpp"
#include "isochron/field.hpp"
#include "isochron/flow.hpp"
#include "isochron/newton_abel.hpp"
#include "isochron/parse.hpp"
#include "isochron/poly2.hpp"
#include "isochron/verify.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

using namespace isochron;

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr unsigned long kSeed = 20260816;

struct Outcome {
    bool pass = false;
    std::string detail;  // worst metric or first failure, for the log line
};

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

Rational draw_rational(std::mt19937_64& rng, long span) {
    std::uniform_int_distribution<long> num(-span, span);
    std::uniform_int_distribution<long> den(1, span);
    return rational(num(rng), den(rng));
}

Poly2 draw_poly_x(std::mt19937_64& rng, int max_deg, long span) {
    Poly2 h = Poly2::zero();
    for (int k = 0; k <= max_deg; ++k) h += Poly2::monomial(k, 0, draw_rational(rng, span));
    return h;
}

Poly2 draw_poly_xy(std::mt19937_64& rng, unsigned max_deg, unsigned max_terms, long span) {
    std::uniform_int_distribution<unsigned> nterms(0, max_terms);
    std::uniform_int_distribution<unsigned> deg(0, max_deg);
    Poly2 p;
    const unsigned n = nterms(rng);
    for (unsigned k = 0; k < n; ++k)
        p += Poly2::monomial(deg(rng), deg(rng), draw_rational(rng, span));
    return p;
}

// 1. Every printed commuting pair brackets to zero exactly; the two
//    parameterized families are checked on evaluation grids wide enough to
//    force the polynomial identity in the parameters.
Outcome criterion_printed_pairs() {
    const std::vector<std::string> fixed = {
        "cubic-symmetric-a", "cubic-symmetric-b", "cubic-symmetric-c", "cubic-symmetric-d",
        "kukles"};
    for (const auto& id : fixed) {
        const CatalogEntry* e = catalog_find(id);
        if (!e || !e->claimed_partner || !commutes(e->system, *e->claimed_partner))
            return {false, "fixed pair " + id};
    }
    const std::vector<Rational> grid = {Rational(0), Rational(1), Rational(-1), Rational(2),
                                        rational(1, 2)};
    for (const auto& a : grid) {
        CatalogEntry e = kolmogorov_cubic(a);
        if (!commutes(e.system, *e.claimed_partner)) return {false, "first family"};
    }
    for (const auto& al : grid)
        for (const auto& be : grid) {
            CatalogEntry e = cubic_family(al, be);
            if (!commutes(e.system, *e.claimed_partner)) return {false, "second family"};
        }
    auto [sys, partner] = hamiltonian_from_area_preserving(
        Poly2::x(), Poly2::y() + Poly2::x() * Poly2::x());
    if (!commutes(sys, partner)) return {false, "area-preserving construction"};
    return {true, "all pairs bracket to zero"};
}

// 2. The homogeneous oscillator perturbations admit only proportional
//    commuters at the stated degree bounds.
Outcome criterion_homog_centralizer() {
    const std::size_t d1 = centralizer(homogeneous_perturbation(1).field(), 4).dimension();
    const std::size_t d2 = centralizer(homogeneous_perturbation(2).field(), 6).dimension();
    if (d1 != 1) return {false, "m=1 dimension " + std::to_string(d1)};
    if (d2 != 1) return {false, "m=2 dimension " + std::to_string(d2)};
    return {true, "dimensions 1 and 1"};
}

// Random normalized second-order force law with top velocity power n pinned
// nonzero. Shared by criterion 3.
NewtonSystem draw_newton(std::mt19937_64& rng, int n) {
    Poly2 q = Poly2::x();
    for (int k = 2; k <= 3; ++k) q += Poly2::monomial(k, 0, draw_rational(rng, 3));
    for (int d = 1; d <= 2; ++d) q += Poly2::monomial(d, 1, draw_rational(rng, 3));
    for (int k = 2; k <= n; ++k)
        for (int d = 0; d <= 2; ++d) q += Poly2::monomial(d, k, draw_rational(rng, 3));
    if (q.coeff_of_y(n).is_zero()) q += Poly2::monomial(1, n, Rational(1));
    return NewtonSystem{q};
}

// 3. Random force laws with velocity degree 4, 5 (20 draws) and 2 (20 draws)
//    all have trivial centralizers at the field's own degree.
Outcome criterion_newton_trivial() {
    std::mt19937_64 rng(kSeed);
    int checked = 0;
    for (int n : {4, 5, 2}) {
        const int draws = (n == 2) ? 20 : 10;
        for (int iter = 0; iter < draws; ++iter) {
            NewtonSystem sys = draw_newton(rng, n);
            if (!is_normalized_newton(sys)) return {false, "draw not normalized"};
            CentralizerBasis b = centralizer(sys.field(), sys.field().degree());
            if (b.dimension() != 1)
                return {false, "n=" + std::to_string(n) + " dimension " +
                                   std::to_string(b.dimension())};
            ++checked;
        }
    }
    return {true, std::to_string(checked) + " systems, all dimension 1"};
}

// 4. 200 random generator inputs: the two normal-form conditions hold
//    exactly, the completed partner commutes exactly, and the parameters
//    round-trip through recovery. Ten spot checks confirm the centralizer is
//    exactly the span of the system and its partner.
Outcome criterion_generator_family() {
    std::mt19937_64 rng(kSeed);
    for (int iter = 0; iter < 200; ++iter) {
        const AbelGeneratorInput in{draw_rational(rng, 3), draw_poly_x(rng, 4, 3)};
        const AbelSystem s = generate_abel(in);
        if (!check_abel_conditions(s).holds) return {false, "conditions, draw " + std::to_string(iter)};
        if (!commutes(s.field(), transversal_partner(s)))
            return {false, "partner bracket, draw " + std::to_string(iter)};
        const auto back = recover_abel_parameters(s.q0, s.q1);
        if (!back || !(*back == in)) return {false, "recovery, draw " + std::to_string(iter)};
    }
    std::mt19937_64 rng2(kSeed + 1);
    for (int iter = 0; iter < 10;) {
        const AbelGeneratorInput in{draw_rational(rng2, 2), draw_poly_x(rng2, 1, 2)};
        if (in.a == Rational(0) && in.h.is_zero()) continue;  // the unperturbed oscillator
        const AbelSystem s = generate_abel(in);
        const VectorField partner = transversal_partner(s);
        const int bound = std::max(s.field().degree(), partner.degree());
        CentralizerBasis b = centralizer(s.field(), bound);
        if (b.dimension() != 2)
            return {false, "spot check dimension " + std::to_string(b.dimension())};
        ++iter;
    }
    return {true, "200 draws exact, 10 spot checks dimension 2"};
}

// 5. Measured periods of the cubic velocity field with three centers and of
//    the m=1 homogeneous perturbation match the published values.
Outcome criterion_periods() {
    const HolomorphicCenterReport rep =
        holomorphic_centers(ComplexPoly({{0, 0}, {0, 1}, {0, 0}, {0, -1}}));
    if (rep.equilibria.size() != 3) return {false, "equilibrium count"};
    const double expect[3] = {kPi, 2 * kPi, kPi};  // centers at -1, 0, 1
    double worst = 0;
    for (int k = 0; k < 3; ++k) {
        const auto& e = rep.equilibria[k];
        if (!e.is_center || !e.period) return {false, "center flags"};
        worst = std::max(worst, std::abs(*e.period - expect[k]));
    }
    if (worst > 1e-6) return {false, "period error " + fmt(worst)};
    if (std::abs(rep.residue_sum) > 1e-12)
        return {false, "residue sum " + fmt(std::abs(rep.residue_sum))};
    if (std::abs(rep.signed_period_sum) > 1e-9)
        return {false, "signed period sum " + fmt(std::abs(rep.signed_period_sum))};

    const PeriodProbe p = isochronicity_probe(homogeneous_perturbation(1).field(), {0, 0},
                                              {0.2, 0.4, 0.6, 0.8});
    double worst_m1 = 0;
    for (const auto& row : p.rows) worst_m1 = std::max(worst_m1, std::abs(row.period - 2 * kPi));
    if (worst_m1 > 1e-6) return {false, "m=1 period error " + fmt(worst_m1)};
    return {true, "period error " + fmt(std::max(worst, worst_m1)) + ", residue " +
                      fmt(std::abs(rep.residue_sum))};
}

// 6. Period ladders: five isochronous constructions stay flat to 1e-6 for
//    amplitudes up to 0.4, while the linear-velocity contrast system shows
//    strictly increasing periods.
Outcome criterion_probes() {
    const std::vector<double> amps = {0.1, 0.2, 0.3, 0.4};
    std::vector<VectorField> flat;
    for (const char* id : {"kukles", "abel-cubic-velocity", "sabatini-lienard-linear",
                           "area-preserving-hamiltonian"})
        flat.push_back(catalog_find(id)->system);
    flat.push_back(generate_abel({Rational(0), Poly2::x()}).field());
    double worst = 0;
    for (const auto& F : flat)
        worst = std::max(worst, isochronicity_probe(F, {0, 0}, amps).max_deviation);
    if (worst > 1e-6) return {false, "deviation " + fmt(worst)};

    const PeriodProbe mono = isochronicity_probe(lienard_linear_velocity(Poly2::x()).field(),
                                                 {0, 0}, {0.1, 0.2, 0.3, 0.4, 0.5});
    for (std::size_t k = 1; k < mono.rows.size(); ++k)
        if (mono.rows[k].period <= mono.rows[k - 1].period)
            return {false, "contrast ladder not increasing"};
    return {true, "flat to " + fmt(worst) + ", contrast strictly increasing"};
}

// 7. Flowing (0.5, 0) out to x = 0.8 and then around for half the middle
//    period lands on the image point; the reverse order lands on its mirror.
Outcome criterion_composition() {
    const VectorField U = from_holomorphic(ComplexPoly({{0, 0}, {0, 1}, {0, 0}, {0, -1}}));
    const VectorField V = orthogonal(U);
    const auto sigma = time_to_reach_x(V, {0.5, 0.0}, 0.8);
    if (!sigma) return {false, "outward leg did not reach x = 0.8"};
    Trajectory leg1 = integrate(V, {0.5, 0.0}, *sigma);
    Trajectory leg2 = integrate(U, {leg1.back().x, leg1.back().y}, kPi);
    const double d1 = detail::hypot2(leg2.back().x - 0.8, leg2.back().y);
    Trajectory leg3 = integrate(U, {0.5, 0.0}, kPi);
    Trajectory leg4 = integrate(V, {leg3.back().x, leg3.back().y}, *sigma);
    const double d2 = detail::hypot2(leg4.back().x + 0.8, leg4.back().y);
    const double worst = std::max(d1, d2);
    if (worst > 1e-5) return {false, "landing error " + fmt(worst)};
    return {true, "landing error " + fmt(worst)};
}

// 8. The variable change onto the fixed-point normal form has residual below
//    1e-9; the exponential-chart first integral is conserved along measured
//    orbits; and its conservation for the cubic velocity force is also a
//    polynomial identity.
Outcome criterion_reduction_and_integral() {
    std::mt19937_64 rng(kSeed + 1);
    std::uniform_real_distribution<double> box(-0.4, 0.4);
    double worst_res = 0;
    for (int iter = 0; iter < 20; ++iter) {
        const AbelGeneratorInput in{draw_rational(rng, 2), draw_poly_x(rng, 1, 2)};
        std::vector<std::array<double, 2>> pts;
        while (pts.size() < 100) {
            const double x = box(rng), y = box(rng);
            if (std::abs(1.0 + in.h.eval(x, 0) * y) < 0.2) continue;
            pts.push_back({x, y});
        }
        worst_res = std::max(worst_res, kukles_reduction_residual(in, pts));
    }
    if (worst_res > 1e-9) return {false, "reduction residual " + fmt(worst_res)};

    double worst_drift = 0;
    const std::vector<AbelGeneratorInput> inputs = {
        {Rational(1), Poly2::zero()},        // fixed point of the reduction
        {Rational(0), Poly2::constant(1)}};  // cubic velocity force
    for (const auto& in : inputs) {
        const AbelSystem s = generate_abel(in);
        Trajectory orb = integrate(s.field(), {0.4, 0.0}, 7.0);
        worst_drift = std::max(worst_drift, first_integral_drift(s.q0, s.q1, orb));
    }
    if (worst_drift > 1e-8) return {false, "integral drift " + fmt(worst_drift)};

    const CatalogEntry* e = catalog_find("abel-cubic-velocity");
    const Poly2 onep = Poly2::constant(1) + Poly2::y();
    const Poly2 lhs = Poly2::x() * e->system.p * onep.pow(3) + Poly2::y() * e->system.q;
    if (!lhs.is_zero()) return {false, "hand identity not exact"};
    return {true, "residual " + fmt(worst_res) + ", drift " + fmt(worst_drift) +
                      ", identity exact"};
}

// 9. Randomized algebra: ring axioms, bracket antisymmetry / bilinearity /
//    Jacobi, and parse-print round-trips, 1000 cases each.
Outcome criterion_property_suites() {
    std::mt19937_64 rng(kSeed);
    for (int iter = 0; iter < 1000; ++iter) {
        const Poly2 p = draw_poly_xy(rng, 4, 4, 5);
        const Poly2 q = draw_poly_xy(rng, 4, 4, 5);
        const Poly2 r = draw_poly_xy(rng, 4, 4, 5);
        if (!((p + q) + r == p + (q + r))) return {false, "associativity of +"};
        if (!(p * q == q * p)) return {false, "commutativity of *"};
        if (!((p * q) * r == p * (q * r))) return {false, "associativity of *"};
        if (!(p * (q + r) == p * q + p * r)) return {false, "distributivity"};
        if (!((p - p).is_zero())) return {false, "additive inverse"};
        if (!(p * Poly2::constant(1) == p)) return {false, "multiplicative unit"};
    }
    for (int iter = 0; iter < 1000; ++iter) {
        const VectorField F{draw_poly_xy(rng, 3, 3, 4), draw_poly_xy(rng, 3, 3, 4)};
        const VectorField G{draw_poly_xy(rng, 3, 3, 4), draw_poly_xy(rng, 3, 3, 4)};
        const VectorField H{draw_poly_xy(rng, 3, 3, 4), draw_poly_xy(rng, 3, 3, 4)};
        const Rational a = draw_rational(rng, 5), b = draw_rational(rng, 5);
        const VectorField fg = lie_bracket(F, G), gf = lie_bracket(G, F);
        if (!(fg.p == -gf.p && fg.q == -gf.q)) return {false, "antisymmetry"};
        const VectorField lin{a * F.p + b * G.p, a * F.q + b * G.q};
        const VectorField lhs = lie_bracket(lin, H);
        const VectorField fh = lie_bracket(F, H), gh = lie_bracket(G, H);
        if (!(lhs.p == a * fh.p + b * gh.p && lhs.q == a * fh.q + b * gh.q))
            return {false, "bilinearity"};
        const VectorField j1 = lie_bracket(F, lie_bracket(G, H));
        const VectorField j2 = lie_bracket(G, lie_bracket(H, F));
        const VectorField j3 = lie_bracket(H, lie_bracket(F, G));
        if (!((j1.p + j2.p + j3.p).is_zero() && (j1.q + j2.q + j3.q).is_zero()))
            return {false, "Jacobi identity"};
    }
    for (int iter = 0; iter < 1000; ++iter) {
        const Poly2 p = draw_poly_xy(rng, 5, 6, 9);
        if (!(parse_poly(p.to_string()) == p)) return {false, "parse/print round-trip"};
    }
    return {true, "3 suites x 1000 cases, zero failures"};
}

// 10. The trajectory from (1/sqrt 2, 0) stays on the invariant hyperbola and
//     matches its closed-form parametrization over t in [0, 1.2].
Outcome criterion_separatrix() {
    const VectorField U = from_holomorphic(ComplexPoly({{0, 0}, {0, 1}, {0, 0}, {0, -1}}));
    Trajectory tr = integrate(U, {1.0 / std::sqrt(2.0), 0.0}, 1.2);
    if (tr.reason != StopReason::Completed) return {false, "integration stopped early"};
    double worst_inv = 0, worst_form = 0;
    for (const auto& s : tr.samples) {
        worst_inv = std::max(worst_inv, std::abs(2 * s.x * s.x - 2 * s.y * s.y - 1.0));
        const double denom = std::sqrt(2.0 * std::cos(s.t));
        worst_form = std::max(worst_form, detail::hypot2(s.x - std::cos(0.5 * s.t) / denom,
                                                         s.y - std::sin(0.5 * s.t) / denom));
    }
    if (worst_inv > 1e-7) return {false, "invariant error " + fmt(worst_inv)};
    if (worst_form > 1e-6) return {false, "closed-form error " + fmt(worst_form)};
    return {true, "invariant " + fmt(worst_inv) + ", closed form " + fmt(worst_form)};
}

}  // namespace

int main() {
    struct Criterion {
        const char* label;
        Outcome (*run)();
    };
    const Criterion criteria[] = {
        {"printed pairs commute exactly", criterion_printed_pairs},
        {"homogeneous perturbations have trivial centralizers", criterion_homog_centralizer},
        {"random force laws have trivial centralizers", criterion_newton_trivial},
        {"generated family is exact and has two-dimensional centralizers",
         criterion_generator_family},
        {"measured periods and residue identities match published values", criterion_periods},
        {"isochronism probes flat, contrast system monotone", criterion_probes},
        {"commuting-flow composition lands on the image point", criterion_composition},
        {"normal-form reduction and first integrals hold", criterion_reduction_and_integral},
        {"randomized algebra property suites pass", criterion_property_suites},
        {"separatrix trajectory matches its closed form", criterion_separatrix},
    };

    int failures = 0;
    int index = 0;
    for (const auto& c : criteria) {
        ++index;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome out;
        try {
            out = c.run();
        } catch (const std::exception& e) {
            out = {false, std::string("exception: ") + e.what()};
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("[%s] criterion %2d: %s — %s (%.2fs)\n", out.pass ? "PASS" : "FAIL", index,
                    c.label, out.detail.c_str(), secs);
        if (!out.pass) ++failures;
    }
    std::printf("%d/10 criteria passed\n", 10 - failures);
    return failures == 0 ? 0 : 1;
}
