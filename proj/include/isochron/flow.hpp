#pragma once

// Numerical flow machinery: an embedded Runge-Kutta 5(4) integrator (Dormand-
// Prince coefficients, PI step control, 4th-order dense output, optional
// fixed-step mode), orbit-period measurement by winding angle, isochronicity
// probes, equilibrium analysis of holomorphic fields, flow-commutation
// defects, and the residual/first-integral checks for the two
// change-of-variables constructions.

#include "isochron/errors.hpp"
#include "isochron/field.hpp"
#include "isochron/newton_abel.hpp"
#include "isochron/poly2.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

namespace isochron {

// ---------------------------------------------------------------- evaluation

// Flat double-precision view of a field for tight integration loops.
struct CompiledField {
    struct Term {
        unsigned i, j;
        double c;
    };
    std::vector<Term> p, q;

    explicit CompiledField(const VectorField& F) {
        for (const auto& [m, c] : F.p.terms()) p.push_back({m.deg_x, m.deg_y, to_double(c)});
        for (const auto& [m, c] : F.q.terms()) q.push_back({m.deg_x, m.deg_y, to_double(c)});
    }

    static double eval_terms(const std::vector<Term>& terms, double x, double y) {
        double acc = 0;
        for (const auto& t : terms)
            acc += t.c * detail::pow_n<double>(x, t.i) * detail::pow_n<double>(y, t.j);
        return acc;
    }
    std::array<double, 2> operator()(double x, double y) const {
        return {eval_terms(p, x, y), eval_terms(q, x, y)};
    }
};

// ---------------------------------------------------------------- integrator

struct IntegratorOptions {
    double tol = 1e-12;                    // local error tolerance (abs and rel)
    double escape_radius = 1e3;            // |y| beyond this stops integration
    double singularity_threshold = 1e-13;  // |field| below this stops integration
    double max_step = 0.0;                 // 0 = unlimited
    double fixed_step = 0.0;               // > 0 switches off adaptivity
    std::size_t max_steps = 2'000'000;
};

enum class StopReason { Completed, Escaped, NearSingularity, StepLimit };

struct TrajectorySample {
    double t, x, y;
};

struct Trajectory {
    std::vector<TrajectorySample> samples;
    StopReason reason = StopReason::Completed;

    const TrajectorySample& back() const { return samples.back(); }
};

namespace detail {

// One accepted step [t0, t0+h] with the standard quartic interpolant.
struct DenseSegment {
    double t0 = 0, h = 0;
    std::array<double, 2> r1{}, r2{}, r3{}, r4{}, r5{};

    std::array<double, 2> eval(double t) const {
        const double th = (t - t0) / h;
        const double th1 = 1.0 - th;
        std::array<double, 2> out{};
        for (int d = 0; d < 2; ++d)
            out[d] = r1[d] + th * (r2[d] + th1 * (r3[d] + th * (r4[d] + th1 * r5[d])));
        return out;
    }
};

inline double hypot2(double a, double b) { return std::sqrt(a * a + b * b); }

// Dormand-Prince 5(4). Stages, the 5th-order weights (row 7, FSAL), the
// embedded error weights, and the dense-output weights.
struct Dopri5 {
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                            a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                            a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                            a75 = -2187.0 / 6784, a76 = 11.0 / 84;
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                            e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
    static constexpr double d1 = -12715105075.0 / 11282082432.0;
    static constexpr double d3 = 87487479700.0 / 32700410799.0;
    static constexpr double d4 = -10690763975.0 / 1880347072.0;
    static constexpr double d5 = 701980252875.0 / 199316789632.0;
    static constexpr double d6 = -1453857185.0 / 822651844.0;
    static constexpr double d7 = 69997945.0 / 29380423.0;
};

struct StepResult {
    std::array<double, 2> y1;
    std::array<double, 2> k7;  // FSAL: derivative at (t0+h, y1)
    double err_norm;           // scaled local error estimate
    DenseSegment dense;
};

inline StepResult dopri5_step(const CompiledField& f, double t0, const std::array<double, 2>& y0,
                              const std::array<double, 2>& k1, double h, double tol) {
    using D = Dopri5;
    auto at = [&](double cx, double cy) { return f(cx, cy); };
    std::array<double, 2> k2, k3, k4, k5, k6, k7, y1;

    auto stage = [&](double a1, double a2v, double a3v, double a4v, double a5v, double a6v,
                     const std::array<double, 2>& kk2, const std::array<double, 2>& kk3,
                     const std::array<double, 2>& kk4, const std::array<double, 2>& kk5,
                     const std::array<double, 2>& kk6) {
        std::array<double, 2> y;
        for (int d = 0; d < 2; ++d)
            y[d] = y0[d] + h * (a1 * k1[d] + a2v * kk2[d] + a3v * kk3[d] + a4v * kk4[d] +
                                a5v * kk5[d] + a6v * kk6[d]);
        return y;
    };

    std::array<double, 2> y;
    y = stage(D::a21, 0, 0, 0, 0, 0, k1, k1, k1, k1, k1);
    k2 = at(y[0], y[1]);
    y = stage(D::a31, D::a32, 0, 0, 0, 0, k2, k1, k1, k1, k1);
    k3 = at(y[0], y[1]);
    y = stage(D::a41, D::a42, D::a43, 0, 0, 0, k2, k3, k1, k1, k1);
    k4 = at(y[0], y[1]);
    y = stage(D::a51, D::a52, D::a53, D::a54, 0, 0, k2, k3, k4, k1, k1);
    k5 = at(y[0], y[1]);
    y = stage(D::a61, D::a62, D::a63, D::a64, D::a65, 0, k2, k3, k4, k5, k1);
    k6 = at(y[0], y[1]);
    for (int d = 0; d < 2; ++d)
        y1[d] = y0[d] + h * (D::a71 * k1[d] + D::a73 * k3[d] + D::a74 * k4[d] + D::a75 * k5[d] +
                             D::a76 * k6[d]);
    k7 = at(y1[0], y1[1]);

    double err = 0;
    for (int d = 0; d < 2; ++d) {
        const double e = h * (D::e1 * k1[d] + D::e3 * k3[d] + D::e4 * k4[d] + D::e5 * k5[d] +
                              D::e6 * k6[d] + D::e7 * k7[d]);
        const double sc = tol + tol * std::max(std::abs(y0[d]), std::abs(y1[d]));
        err += (e / sc) * (e / sc);
    }
    err = std::sqrt(err / 2.0);

    DenseSegment ds;
    ds.t0 = t0;
    ds.h = h;
    for (int d = 0; d < 2; ++d) {
        const double dy = y1[d] - y0[d];
        ds.r1[d] = y0[d];
        ds.r2[d] = dy;
        ds.r3[d] = h * k1[d] - dy;
        ds.r4[d] = dy - h * k7[d] - ds.r3[d];
        ds.r5[d] = h * (D::d1 * k1[d] + D::d3 * k3[d] + D::d4 * k4[d] + D::d5 * k5[d] +
                        D::d6 * k6[d] + D::d7 * k7[d]);
    }
    return {y1, k7, err, ds};
}

// Core driver. The observer sees every accepted step:
//   observer(const DenseSegment&, t_new, y_new) -> bool (false stops early).
// Returns the stop reason with final time/state.
template <typename Observer>
std::pair<StopReason, TrajectorySample> integrate_core(const CompiledField& f,
                                                       std::array<double, 2> y, double t_end,
                                                       const IntegratorOptions& opts,
                                                       Observer&& observer) {
    const double dir = (t_end >= 0) ? 1.0 : -1.0;
    double t = 0;
    std::array<double, 2> k1 = f(y[0], y[1]);

    const bool fixed = opts.fixed_step > 0;
    double h;
    if (fixed) {
        h = dir * opts.fixed_step;
    } else {
        // modest initial guess; the controller adapts within a few steps
        const double d0 = std::max(hypot2(y[0], y[1]), 1e-4);
        const double d1 = std::max(hypot2(k1[0], k1[1]), 1e-8);
        h = dir * std::clamp(0.01 * d0 / d1, 1e-8, 1e-1);
    }
    if (opts.max_step > 0) h = dir * std::min(std::abs(h), opts.max_step);

    for (std::size_t step = 0; step < opts.max_steps; ++step) {
        // gaps below rounding resolution count as arrival (fixed-step sums of
        // inexact h land 1 ulp short of t_end)
        if ((t_end - t) * dir <= 4e-16 * std::max(std::abs(t_end), 1.0))
            return {StopReason::Completed, {t_end, y[0], y[1]}};
        if (hypot2(k1[0], k1[1]) <= opts.singularity_threshold)
            return {StopReason::NearSingularity, {t, y[0], y[1]}};
        if ((t + h - t_end) * dir > 0) h = t_end - t;
        if (std::abs(h) < 4e-16 * std::max(std::abs(t), 1.0)) throw StepSizeUnderflow(t);

        StepResult res = dopri5_step(f, t, y, k1, h, opts.tol);
        if (!fixed && res.err_norm > 1.0) {
            // reject: shrink and retry
            h *= std::max(0.2, 0.9 * std::pow(res.err_norm, -0.2));
            continue;
        }
        t += h;
        y = res.y1;
        k1 = res.k7;
        if (!observer(res.dense, t, y)) return {StopReason::Completed, {t, y[0], y[1]}};
        if (hypot2(y[0], y[1]) >= opts.escape_radius) return {StopReason::Escaped, {t, y[0], y[1]}};
        if (!fixed) {
            double fac = 0.9 * std::pow(std::max(res.err_norm, 1e-10), -0.2);
            h *= std::clamp(fac, 0.2, 5.0);
            if (opts.max_step > 0 && std::abs(h) > opts.max_step) h = dir * opts.max_step;
        }
    }
    return {StopReason::StepLimit, {t, y[0], y[1]}};
}

}  // namespace detail

// Forward trajectory of F from `start` over [0, t_end], sampled at every
// accepted step.
inline Trajectory integrate(const VectorField& F, std::array<double, 2> start, double t_end,
                            const IntegratorOptions& opts = {}) {
    const CompiledField f(F);
    Trajectory out;
    out.samples.push_back({0.0, start[0], start[1]});
    auto [reason, last] = detail::integrate_core(
        f, start, t_end, opts, [&](const detail::DenseSegment&, double t, std::array<double, 2> y) {
            out.samples.push_back({t, y[0], y[1]});
            return true;
        });
    out.reason = reason;
    if (out.samples.back().t != last.t) out.samples.push_back(last);
    return out;
}

// ------------------------------------------------------------------- periods

namespace detail {
inline double signed_angle(double ax, double ay, double bx, double by) {
    return std::atan2(ax * by - ay * bx, ax * bx + ay * by);
}
}  // namespace detail

// Time for the orbit of F through `start` to wind once (2pi of accumulated
// angle) around `center`, refined until the angle overshoot is below 1e-12.
// nullopt when the orbit escapes, hits a singularity, or fails to close
// within opts-controlled max time.
inline std::optional<double> period(const VectorField& F, std::array<double, 2> start,
                                    std::array<double, 2> center = {0, 0},
                                    const IntegratorOptions& user_opts = {},
                                    double max_time = 200.0) {
    const CompiledField f(F);
    IntegratorOptions opts = user_opts;
    if (opts.max_step <= 0 || opts.max_step > 0.25) opts.max_step = 0.25;  // keep sweeps readable

    double cum = 0;
    double px = start[0] - center[0], py = start[1] - center[1];
    if (detail::hypot2(px, py) == 0)
        throw PreconditionViolated("period: start must differ from center");
    std::optional<double> result;

    auto [reason, last] = detail::integrate_core(
        f, start, max_time, opts,
        [&](const detail::DenseSegment& ds, double t, std::array<double, 2> ynew) {
            // subdivide the step so each measured wedge stays well under pi
            const double dx = ynew[0] - center[0], dy = ynew[1] - center[1];
            double gross = std::abs(detail::signed_angle(px, py, dx, dy));
            int m = std::max(1, static_cast<int>(std::ceil(std::max(gross, 0.15) / 0.15)));
            double ta = ds.t0;
            for (int k = 1; k <= m; ++k) {
                const double tb = ds.t0 + ds.h * k / m;
                const auto pb = ds.eval(tb);
                const double bx = pb[0] - center[0], by = pb[1] - center[1];
                const double delta = detail::signed_angle(px, py, bx, by);
                if (std::abs(cum + delta) >= 2.0 * 3.14159265358979323846) {
                    // crossing inside [ta, tb]: secant refine on the overshoot
                    const double target = (cum + delta > 0 ? 1.0 : -1.0) * 2.0 *
                                          3.14159265358979323846;
                    const double axp = px, ayp = py;  // frame at ta
                    auto g = [&](double tt) {
                        const auto pt = ds.eval(tt);
                        return cum + detail::signed_angle(axp, ayp, pt[0] - center[0],
                                                          pt[1] - center[1]) -
                               target;
                    };
                    double lo = ta, hi = tb, glo = g(lo), ghi = g(hi);
                    double tcur = hi, gcur = ghi;
                    for (int it = 0; it < 100 && std::abs(gcur) > 1e-12; ++it) {
                        double tn = (std::abs(ghi - glo) > 1e-300)
                                        ? hi - ghi * (hi - lo) / (ghi - glo)
                                        : 0.5 * (lo + hi);
                        if (!(tn > std::min(lo, hi) && tn < std::max(lo, hi)))
                            tn = 0.5 * (lo + hi);
                        const double gn = g(tn);
                        if ((gn > 0) == (ghi > 0)) {
                            hi = tn;
                            ghi = gn;
                        } else {
                            lo = tn;
                            glo = gn;
                        }
                        tcur = tn;
                        gcur = gn;
                    }
                    result = tcur;
                    return false;  // stop integrating
                }
                cum += delta;
                px = bx;
                py = by;
                ta = tb;
            }
            return true;
        });
    (void)reason;
    (void)last;
    return result;
}

struct PeriodProbeRow {
    double amplitude, period;
};

struct PeriodProbe {
    std::vector<PeriodProbeRow> rows;
    double max_deviation = 0;  // spread of the measured periods
};

// Measure the period at a ladder of amplitudes along the positive x-axis
// from `center`. Amplitudes must be positive and strictly increasing. An
// orbit that never closes raises OrbitNotClosed with its amplitude.
inline PeriodProbe isochronicity_probe(const VectorField& F, std::array<double, 2> center,
                                       const std::vector<double>& amplitudes,
                                       const IntegratorOptions& opts = {},
                                       double max_time = 200.0) {
    if (amplitudes.empty()) throw PreconditionViolated("probe: need at least one amplitude");
    for (std::size_t k = 0; k < amplitudes.size(); ++k) {
        if (amplitudes[k] <= 0) throw PreconditionViolated("probe: amplitudes must be positive");
        if (k > 0 && amplitudes[k] <= amplitudes[k - 1])
            throw PreconditionViolated("probe: amplitudes must be strictly increasing");
    }
    PeriodProbe out;
    double lo = 0, hi = 0;
    for (double A : amplitudes) {
        auto T = period(F, {center[0] + A, center[1]}, center, opts, max_time);
        if (!T) throw OrbitNotClosed(A);
        out.rows.push_back({A, *T});
        lo = out.rows.size() == 1 ? *T : std::min(lo, *T);
        hi = out.rows.size() == 1 ? *T : std::max(hi, *T);
    }
    out.max_deviation = hi - lo;
    return out;
}

// ------------------------------------------------- holomorphic equilibria

struct EquilibriumInfo {
    std::complex<double> z;       // root of f
    std::complex<double> fprime;  // f'(z)
    bool is_center = false;       // f'(z) purely imaginary (within tol), nonzero
    int direction = 0;            // +1 counterclockwise, -1 clockwise, 0 when not a center
    std::optional<double> period;  // 2pi / |Im f'(z)| for centers
};

struct HolomorphicCenterReport {
    std::vector<EquilibriumInfo> equilibria;  // sorted by (Re z, Im z)
    std::complex<double> residue_sum;         // sum over roots of 1/f'(z)
    double signed_period_sum = 0;             // sum over centers of 2pi / Im f'(z)
};

// Locate all equilibria of z' = f(z) (simple roots of f) and classify the
// centers. Roots via Durand-Kerner on the monic scaling with a Newton
// polish; a derivative magnitude <= tol at a root raises MultipleRoot.
inline HolomorphicCenterReport holomorphic_centers(const ComplexPoly& f, double tol = 1e-9) {
    const int n = f.degree();
    if (n < 2)
        throw PreconditionViolated("holomorphic_centers: polynomial degree must be >= 2");

    using C = std::complex<double>;
    std::vector<C> a(n + 1);
    for (int k = 0; k <= n; ++k)
        a[k] = C(to_double(f.coeffs[k].first), to_double(f.coeffs[k].second));
    std::vector<C> monic(n + 1);
    for (int k = 0; k <= n; ++k) monic[k] = a[k] / a[n];

    auto eval = [](const std::vector<C>& c, C z) {
        C acc(0, 0);
        for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * z + *it;
        return acc;
    };

    // Cauchy-style inclusion radius for the monic polynomial
    double radius = 0;
    for (int k = 0; k < n; ++k) radius = std::max(radius, std::abs(monic[k]));
    radius = 1.0 + radius;

    // perturbed-circle start; the angular offset breaks symmetric stalls
    std::vector<C> roots(n);
    for (int k = 0; k < n; ++k) {
        const double th = 2.0 * 3.14159265358979323846 * k / n + 0.4;
        roots[k] = radius * C(std::cos(th), std::sin(th));
    }

    bool converged = false;
    for (int iter = 0; iter < 500 && !converged; ++iter) {
        double worst = 0;
        for (int k = 0; k < n; ++k) {
            C denom(1, 0);
            for (int j = 0; j < n; ++j)
                if (j != k) denom *= roots[k] - roots[j];
            const C delta = eval(monic, roots[k]) / denom;
            roots[k] -= delta;
            worst = std::max(worst, std::abs(delta) / (1.0 + std::abs(roots[k])));
        }
        converged = worst < 1e-14;
    }
    if (!converged) throw NotConverged("holomorphic_centers: root iteration did not settle");

    const ComplexPoly fd = f.derivative();
    auto eval_fd = [&](C z) { return fd.eval(z); };

    // Newton polish against the monic form
    std::vector<C> dmonic(n);
    for (int k = 1; k <= n; ++k) dmonic[k - 1] = monic[k] * static_cast<double>(k);
    for (auto& z : roots) {
        for (int it = 0; it < 100; ++it) {
            const C fv = eval(monic, z);
            const C dv = eval(dmonic, z);
            if (std::abs(dv) == 0) break;
            const C step = fv / dv;
            z -= step;
            if (std::abs(step) <= 1e-16 * (1.0 + std::abs(z))) break;
        }
    }

    std::sort(roots.begin(), roots.end(), [](C u, C v) {
        if (u.real() != v.real()) return u.real() < v.real();
        return u.imag() < v.imag();
    });

    // A genuinely repeated root leaves the iteration stalled on a tight
    // cluster (separation ~ sqrt(eps)) where f' no longer certifies
    // simplicity, so detect multiplicity by pairwise distance as well.
    for (std::size_t i = 0; i + 1 < roots.size(); ++i)
        for (std::size_t j = i + 1; j < roots.size(); ++j)
            if (std::abs(roots[i] - roots[j]) <= 1e-6 * (1.0 + std::abs(roots[i])))
                throw MultipleRoot("holomorphic_centers: repeated equilibrium (root cluster)");

    HolomorphicCenterReport rep;
    C rsum(0, 0);
    for (const C& z : roots) {
        EquilibriumInfo info;
        info.z = z;
        info.fprime = eval_fd(z);
        if (std::abs(info.fprime) <= tol)
            throw MultipleRoot("holomorphic_centers: repeated equilibrium (f' vanishes)");
        info.is_center =
            std::abs(info.fprime.real()) <= tol && std::abs(info.fprime.imag()) >= tol;
        if (info.is_center) {
            info.direction = info.fprime.imag() > 0 ? +1 : -1;
            info.period = 2.0 * 3.14159265358979323846 / std::abs(info.fprime.imag());
            rep.signed_period_sum += 2.0 * 3.14159265358979323846 / info.fprime.imag();
        }
        rsum += 1.0 / info.fprime;
        rep.equilibria.push_back(info);
    }
    rep.residue_sum = rsum;
    return rep;
}

// ------------------------------------------------------- flow compositions

namespace detail {
inline std::array<double, 2> flow_to(const CompiledField& f, std::array<double, 2> start,
                                     double tau, const IntegratorOptions& opts) {
    auto [reason, last] = integrate_core(f, start, tau, opts,
                                         [](const DenseSegment&, double, std::array<double, 2>) {
                                             return true;
                                         });
    if (reason != StopReason::Completed)
        throw NotIntegrable("flow composition left the integrable region");
    return {last.x, last.y};
}
}  // namespace detail

// || Phi_F^tau ( Phi_G^sigma (start) ) - Phi_G^sigma ( Phi_F^tau (start) ) ||.
// Zero (to integration accuracy) for commuting flows on a common domain.
inline double commutation_defect(const VectorField& F, const VectorField& G, double tau,
                                 double sigma, std::array<double, 2> start,
                                 const IntegratorOptions& opts = {}) {
    const CompiledField cf(F), cg(G);
    const auto fg = detail::flow_to(cf, detail::flow_to(cg, start, sigma, opts), tau, opts);
    const auto gf = detail::flow_to(cg, detail::flow_to(cf, start, tau, opts), sigma, opts);
    return detail::hypot2(fg[0] - gf[0], fg[1] - gf[1]);
}

// First time the orbit's x-coordinate reaches x_target (sign change of
// x - x_target across a step, refined by bisection on the dense output).
inline std::optional<double> time_to_reach_x(const VectorField& F, std::array<double, 2> start,
                                             double x_target, double max_time = 200.0,
                                             const IntegratorOptions& opts = {}) {
    const CompiledField f(F);
    if (start[0] == x_target) return 0.0;
    double gprev = start[0] - x_target;
    std::optional<double> hit;
    detail::integrate_core(f, start, max_time, opts,
                           [&](const detail::DenseSegment& ds, double t, std::array<double, 2> y) {
                               const double gnow = y[0] - x_target;
                               if ((gprev < 0) != (gnow < 0) || gnow == 0) {
                                   double lo = ds.t0, hi = t;
                                   for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, hi);
                                        ++it) {
                                       const double mid = 0.5 * (lo + hi);
                                       const double gm = ds.eval(mid)[0] - x_target;
                                       if ((gm < 0) == (gprev < 0))
                                           lo = mid;
                                       else
                                           hi = mid;
                                   }
                                   hit = 0.5 * (lo + hi);
                                   return false;
                               }
                               gprev = gnow;
                               return true;
                           });
    return hit;
}

// ---------------------------------------------------------------- quadrature

namespace detail {
template <typename Fn>
double adaptive_simpson_rec(Fn&& fn, double a, double b, double fa, double fm, double fb,
                            double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = fn(lm), frm = fn(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    if (depth <= 0) throw QuadratureFailure("adaptive quadrature exhausted its depth budget");
    return adaptive_simpson_rec(fn, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson_rec(fn, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}
}  // namespace detail

template <typename Fn>
double adaptive_simpson(Fn&& fn, double a, double b, double tol = 1e-12, int max_depth = 48) {
    if (a == b) return 0.0;
    const double fa = fn(a), fb = fn(b), fm = fn(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return detail::adaptive_simpson_rec(fn, a, b, fa, fm, fb, whole, tol, max_depth);
}

// ------------------------------------------- change-of-variables residuals

// Residual of the chart Y = y / (1 + h(x) y) carrying the generated cubic
// system onto its Kukles-type normal form: at each sample point, compare
// (dX/dt, dY/dt) computed by the chain rule against the image field
//   ( -Y / lambda, (X + 3 a X Y + a^2 X^3) / lambda ),  lambda = 1 - h(X) Y.
// Points too close to the chart pole raise SingularChart.
inline double kukles_reduction_residual(const AbelGeneratorInput& in,
                                        const std::vector<std::array<double, 2>>& pts) {
    const AbelSystem sys = generate_abel(in);
    const CompiledField f(sys.field());
    const double a = to_double(in.a);
    double worst = 0;
    for (const auto& [x, y] : pts) {
        const double hx = in.h.eval(x, 0.0);
        const double hpx = in.h.diff(Var::x).eval(x, 0.0);
        const double denom = 1.0 + hx * y;
        if (std::abs(denom) <= 1e-6)
            throw SingularChart("kukles_reduction_residual: sample point at the chart pole");
        const auto [pd, qd] = f(x, y);
        const double Xv = x;
        const double Yv = y / denom;
        const double lambda = 1.0 - hx * Yv;  // = 1 / denom
        const double Xdot = pd;
        const double Ydot = (qd - y * y * hpx * pd) / (denom * denom);
        const double tx = -Yv / lambda;
        const double ty = (Xv + 3.0 * a * Xv * Yv + a * a * Xv * Xv * Xv) / lambda;
        worst = std::max(worst, detail::hypot2(Xdot - tx, Ydot - ty));
    }
    return worst;
}

// Relative drift of the first integral X^2 + Y^2 pulled back through the
// exponential chart X = x e^I(x), Y = x y e^I(x) / (q0 + q1 y), with
// I(x) the integral of (u - q0(u)) / (u^2 D(u)), D = q0/u. Requires the
// center normalization q0(0) = 0, q0'(0) = 1; both divisions are exact in
// the polynomial ring so the integrand is smooth through 0.
inline double first_integral_drift(const Poly1& q0, const Poly1& q1, const Trajectory& orbit) {
    if (!q0.is_univariate_x() || !q1.is_univariate_x())
        throw PreconditionViolated("first_integral_drift: coefficients must be univariate in x");
    if (sgn(q0.eval_exact(0, 0)) != 0 || q0.diff(Var::x).eval_exact(0, 0) != 1)
        throw PreconditionViolated("first_integral_drift: q0 must vanish at 0 with slope 1");
    const Poly2 X = Poly2::x();
    auto N = exact_div(X - q0, X.pow(2));
    auto D = exact_div(q0, X);
    if (!N || !D)
        throw PreconditionViolated("first_integral_drift: q0 must be x + O(x^2)");
    if (orbit.samples.empty()) throw PreconditionViolated("first_integral_drift: empty orbit");

    auto integrand = [&](double u) {
        const double dd = D->eval(u, 0.0);
        if (std::abs(dd) <= 1e-12)
            throw SingularChart("first_integral_drift: chart factor q0(x)/x vanished");
        return N->eval(u, 0.0) / dd;
    };

    // When x | q1 the x in the numerator of Y cancels exactly, keeping the
    // chart regular where the orbit crosses x = 0.
    const auto E = exact_div(q1, X);

    double h0 = 0, worst = 0;
    bool first = true;
    for (const auto& s : orbit.samples) {
        const double I = adaptive_simpson(integrand, 0.0, s.x, 1e-13);
        double y_over_denom;
        if (E) {
            const double denom = D->eval(s.x, 0.0) + E->eval(s.x, 0.0) * s.y;
            if (std::abs(denom) <= 1e-8)
                throw SingularChart("first_integral_drift: orbit crossed the chart pole");
            y_over_denom = s.y / denom;
        } else {
            const double denom = q0.eval(s.x, 0.0) + q1.eval(s.x, 0.0) * s.y;
            if (std::abs(denom) <= 1e-8)
                throw SingularChart("first_integral_drift: orbit crossed the chart pole");
            y_over_denom = s.x * s.y / denom;
        }
        const double Xv = s.x * std::exp(I);
        const double Yv = y_over_denom * std::exp(I);
        const double H = Xv * Xv + Yv * Yv;
        if (first) {
            h0 = H;
            first = false;
        }
        worst = std::max(worst, std::abs(H - h0));
    }
    return worst / std::max(std::abs(h0), 1e-300);
}

}  // namespace isochron
