#pragma once

// Phase-portrait data products: orbits integrated from a deterministic seed
// lattice, numerically located singular points, and two renderings (CSV for
// downstream tooling, standalone SVG for eyeballs).

#include "isochron/errors.hpp"
#include "isochron/field.hpp"
#include "isochron/flow.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

namespace isochron {

struct GridSpec {
    double xmin, xmax, ymin, ymax;
    int n_orbits = 0;
};

namespace detail {

// full round-trip precision, shortest form ("%.17g")
inline std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string fmt_svg(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return buf;
}

}  // namespace detail

// Accepts "xmin:xmax:ymin:ymax:n_orbits", e.g. "-2:2:-2:2:36".
inline GridSpec parse_grid(std::string_view src) {
    GridSpec g;
    std::size_t pos = 0;
    auto number = [&](double& out) {
        const std::string tail(src.substr(pos));
        char* end = nullptr;
        const double v = std::strtod(tail.c_str(), &end);
        if (end == tail.c_str())
            throw ParseError("grid spec: expected a number at offset " + std::to_string(pos),
                             pos, {"number"});
        pos += static_cast<std::size_t>(end - tail.c_str());
        out = v;
    };
    auto colon = [&] {
        if (pos >= src.size() || src[pos] != ':')
            throw ParseError("grid spec: expected ':' at offset " + std::to_string(pos), pos,
                             {"':'"});
        ++pos;
    };
    number(g.xmin);
    colon();
    number(g.xmax);
    colon();
    number(g.ymin);
    colon();
    number(g.ymax);
    colon();
    double n = 0;
    number(n);
    if (pos != src.size())
        throw ParseError("grid spec: trailing characters at offset " + std::to_string(pos), pos,
                         {"end of input"});
    if (!(g.xmin < g.xmax) || !(g.ymin < g.ymax))
        throw ParseError("grid spec: empty box (need xmin < xmax and ymin < ymax)", 0,
                         {"nonempty box"});
    if (n < 0 || n != std::floor(n) || n > 100000)
        throw ParseError("grid spec: orbit count must be a small nonnegative integer", 0,
                         {"integer in [0, 100000]"});
    g.n_orbits = static_cast<int>(n);
    return g;
}

struct PortraitOptions {
    double t_span = 8.0;        // integrate each seed this far forward and backward
    IntegratorOptions integ{};  // escape radius is widened to the box automatically
    int svg_size = 640;         // square canvas, pixels
};

struct Portrait {
    GridSpec grid;
    std::vector<Trajectory> orbits;                     // seed order, t ascending
    std::vector<std::array<double, 2>> singular_points;  // sorted by (x, y)
};

namespace detail {

// Newton iteration on F = 0 from a cell-center guess; the portrait marks
// only confidently converged points inside the box.
inline bool refine_singular_point(const VectorField& F, double& x, double& y) {
    const Poly2 px = F.p.diff(Var::x), py = F.p.diff(Var::y);
    const Poly2 qx = F.q.diff(Var::x), qy = F.q.diff(Var::y);
    for (int it = 0; it < 60; ++it) {
        const auto [fp, fq] = F.eval(x, y);
        const double a = px.eval(x, y), b = py.eval(x, y);
        const double c = qx.eval(x, y), d = qy.eval(x, y);
        const double det = a * d - b * c;
        if (det == 0 || !std::isfinite(det)) return false;
        const double dx = (d * fp - b * fq) / det;
        const double dy = (a * fq - c * fp) / det;
        x -= dx;
        y -= dy;
        if (!std::isfinite(x) || !std::isfinite(y)) return false;
        if (std::abs(dx) + std::abs(dy) <= 1e-14 * (1.0 + std::abs(x) + std::abs(y))) {
            const auto [rp, rq] = F.eval(x, y);
            return hypot2(rp, rq) <= 1e-10;
        }
    }
    return false;
}

}  // namespace detail

inline Portrait compute_portrait(const VectorField& F, const GridSpec& grid,
                                 PortraitOptions opts = {}) {
    if (F.p.is_zero() && F.q.is_zero()) throw ZeroField();
    Portrait out;
    out.grid = grid;

    // stop escaping orbits a little outside the viewport instead of at the
    // default far radius
    const double extent = std::max({std::abs(grid.xmin), std::abs(grid.xmax),
                                    std::abs(grid.ymin), std::abs(grid.ymax)});
    IntegratorOptions integ = opts.integ;
    if (integ.max_step <= 0) integ.max_step = 0.1;
    integ.escape_radius = std::min(integ.escape_radius, 4.0 * extent + 1.0);

    // seeds at the cell centers of a near-square lattice, row-major from the
    // bottom-left; the first n_orbits cells are used
    if (grid.n_orbits > 0) {
        const int cols = static_cast<int>(std::ceil(std::sqrt(double(grid.n_orbits))));
        const int rows = (grid.n_orbits + cols - 1) / cols;
        for (int k = 0; k < grid.n_orbits; ++k) {
            const int i = k % cols, j = k / cols;
            const double sx = grid.xmin + (grid.xmax - grid.xmin) * (i + 0.5) / cols;
            const double sy = grid.ymin + (grid.ymax - grid.ymin) * (j + 0.5) / rows;

            Trajectory fwd = integrate(F, {sx, sy}, opts.t_span, integ);
            Trajectory bwd = integrate(F, {sx, sy}, -opts.t_span, integ);
            Trajectory merged;
            merged.reason = fwd.reason;
            for (auto it = bwd.samples.rbegin(); it != bwd.samples.rend(); ++it)
                merged.samples.push_back(*it);
            // both halves contain the seed at t = 0; keep one copy
            if (!merged.samples.empty()) merged.samples.pop_back();
            for (const auto& s : fwd.samples) merged.samples.push_back(s);
            out.orbits.push_back(std::move(merged));
        }
    }

    // singular points: coarse scan, Newton refinement, dedupe
    constexpr int kScan = 48;
    for (int j = 0; j < kScan; ++j)
        for (int i = 0; i < kScan; ++i) {
            double x = grid.xmin + (grid.xmax - grid.xmin) * (i + 0.5) / kScan;
            double y = grid.ymin + (grid.ymax - grid.ymin) * (j + 0.5) / kScan;
            if (!detail::refine_singular_point(F, x, y)) continue;
            if (x < grid.xmin || x > grid.xmax || y < grid.ymin || y > grid.ymax) continue;
            bool dup = false;
            for (const auto& s : out.singular_points)
                dup = dup || (std::abs(s[0] - x) + std::abs(s[1] - y) <= 1e-6);
            if (!dup) out.singular_points.push_back({x, y});
        }
    std::sort(out.singular_points.begin(), out.singular_points.end(),
              [](const auto& u, const auto& v) {
                  if (u[0] != v[0]) return u[0] < v[0];
                  return u[1] < v[1];
              });
    return out;
}

// One "t,x,y" block per orbit, blank-line separated, LF endings, full float
// precision. An empty portrait is just the header.
inline void write_portrait_csv(const Portrait& portrait, std::ostream& os) {
    os << "t,x,y\n";
    bool first = true;
    for (const auto& orbit : portrait.orbits) {
        if (!first) os << "\n";
        first = false;
        for (const auto& s : orbit.samples)
            os << detail::fmt17(s.t) << ',' << detail::fmt17(s.x) << ',' << detail::fmt17(s.y)
               << '\n';
    }
}

// Self-contained SVG: axes, orbit polylines, singular points. No external
// assets, so the file opens anywhere.
inline void write_portrait_svg(const Portrait& portrait, std::ostream& os, int size = 640) {
    const GridSpec& g = portrait.grid;
    const double pad = 0.04 * size;
    const double w = size - 2 * pad, h = size - 2 * pad;
    auto X = [&](double x) { return pad + (x - g.xmin) / (g.xmax - g.xmin) * w; };
    auto Y = [&](double y) { return pad + (g.ymax - y) / (g.ymax - g.ymin) * h; };

    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size << "\" height=\"" << size
       << "\" viewBox=\"0 0 " << size << ' ' << size << "\">\n";
    os << "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    // coordinate axes, when visible
    if (g.ymin < 0 && g.ymax > 0)
        os << "  <line x1=\"" << detail::fmt_svg(X(g.xmin)) << "\" y1=\"" << detail::fmt_svg(Y(0))
           << "\" x2=\"" << detail::fmt_svg(X(g.xmax)) << "\" y2=\"" << detail::fmt_svg(Y(0))
           << "\" stroke=\"#cccccc\" stroke-width=\"1\"/>\n";
    if (g.xmin < 0 && g.xmax > 0)
        os << "  <line x1=\"" << detail::fmt_svg(X(0)) << "\" y1=\"" << detail::fmt_svg(Y(g.ymin))
           << "\" x2=\"" << detail::fmt_svg(X(0)) << "\" y2=\"" << detail::fmt_svg(Y(g.ymax))
           << "\" stroke=\"#cccccc\" stroke-width=\"1\"/>\n";

    for (const auto& orbit : portrait.orbits) {
        if (orbit.samples.size() < 2) continue;
        os << "  <polyline fill=\"none\" stroke=\"#33658a\" stroke-width=\"1\" "
              "stroke-opacity=\"0.8\" points=\"";
        bool first = true;
        for (const auto& s : orbit.samples) {
            // clip far-flung escape tails; the viewer would autoscale them away
            if (s.x < g.xmin - 1 || s.x > g.xmax + 1 || s.y < g.ymin - 1 || s.y > g.ymax + 1)
                continue;
            if (!first) os << ' ';
            first = false;
            os << detail::fmt_svg(X(s.x)) << ',' << detail::fmt_svg(Y(s.y));
        }
        os << "\"/>\n";
    }

    for (const auto& s : portrait.singular_points)
        os << "  <circle cx=\"" << detail::fmt_svg(X(s[0])) << "\" cy=\""
           << detail::fmt_svg(Y(s[1])) << "\" r=\"3\" fill=\"#d1495b\"/>\n";

    os << "</svg>\n";
}

}  // namespace isochron
