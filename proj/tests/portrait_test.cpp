#include "isochron/portrait.hpp"

#include "isochron/catalog.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <sstream>

using namespace isochron;

namespace {
const VectorField kRotation{-Poly2::y(), Poly2::x()};

std::string csv_of(const Portrait& p) {
    std::ostringstream os;
    write_portrait_csv(p, os);
    return os.str();
}

std::string svg_of(const Portrait& p) {
    std::ostringstream os;
    write_portrait_svg(p, os);
    return os.str();
}

std::size_t count_substr(const std::string& hay, const std::string& needle) {
    std::size_t n = 0;
    for (std::size_t at = hay.find(needle); at != std::string::npos;
         at = hay.find(needle, at + needle.size()))
        ++n;
    return n;
}
}  // namespace

TEST_CASE("grid spec parsing") {
    GridSpec g = parse_grid("-2:2:-1.5:1.5:36");
    REQUIRE(g.xmin == -2.0);
    REQUIRE(g.xmax == 2.0);
    REQUIRE(g.ymin == -1.5);
    REQUIRE(g.ymax == 1.5);
    REQUIRE(g.n_orbits == 36);

    REQUIRE(parse_grid("0:1:0:1:0").n_orbits == 0);

    REQUIRE_THROWS_AS(parse_grid("1:2:3"), ParseError);
    REQUIRE_THROWS_AS(parse_grid("2:1:0:1:5"), ParseError);   // empty box
    REQUIRE_THROWS_AS(parse_grid("0:1:0:1:-3"), ParseError);  // negative count
    REQUIRE_THROWS_AS(parse_grid("0:1:0:1:2.5"), ParseError); // fractional count
    REQUIRE_THROWS_AS(parse_grid("0:1:0:1:5junk"), ParseError);
    REQUIRE_THROWS_AS(parse_grid(""), ParseError);
    try {
        parse_grid("0:1;0:1:5");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        REQUIRE(e.offset == 3);
    }
}

TEST_CASE("portrait computation") {
    SECTION("rotation: one singular point, closed orbit samples") {
        Portrait p = compute_portrait(kRotation, parse_grid("-2:2:-2:2:9"));
        REQUIRE(p.orbits.size() == 9);
        REQUIRE(p.singular_points.size() == 1);
        REQUIRE(std::abs(p.singular_points[0][0]) <= 1e-10);
        REQUIRE(std::abs(p.singular_points[0][1]) <= 1e-10);
        std::size_t curves = 0;
        for (const auto& orbit : p.orbits) {
            // a seed that lands on the equilibrium legitimately yields a
            // single stationary sample
            if (orbit.samples.size() == 1) continue;
            ++curves;
            REQUIRE(orbit.samples.size() >= 3);
            for (std::size_t k = 1; k < orbit.samples.size(); ++k)
                REQUIRE(orbit.samples[k].t > orbit.samples[k - 1].t);
            // backward and forward halves both present
            REQUIRE(orbit.samples.front().t < 0);
            REQUIRE(orbit.samples.back().t > 0);
        }
        REQUIRE(curves >= 8);
    }
    SECTION("three centers of the separatrix field are located") {
        const ComplexPoly f({{0, 0}, {0, 1}, {0, 0}, {0, -1}});  // i z (1 - z^2)
        Portrait p = compute_portrait(from_holomorphic(f), parse_grid("-2:2:-2:2:0"));
        REQUIRE(p.orbits.empty());
        REQUIRE(p.singular_points.size() == 3);
        REQUIRE(std::abs(p.singular_points[0][0] + 1.0) <= 1e-8);
        REQUIRE(std::abs(p.singular_points[1][0]) <= 1e-8);
        REQUIRE(std::abs(p.singular_points[2][0] - 1.0) <= 1e-8);
        for (const auto& s : p.singular_points) REQUIRE(std::abs(s[1]) <= 1e-8);
    }
    SECTION("zero field is rejected") {
        REQUIRE_THROWS_AS(compute_portrait({Poly2::zero(), Poly2::zero()},
                                           parse_grid("-1:1:-1:1:4")),
                          ZeroField);
    }
}

TEST_CASE("CSV rendering") {
    Portrait p = compute_portrait(kRotation, parse_grid("-1:1:-1:1:4"));
    const std::string csv = csv_of(p);
    REQUIRE(csv.rfind("t,x,y\n", 0) == 0);
    REQUIRE(count_substr(csv, "\n\n") == 3);  // blank line between the 4 blocks
    REQUIRE(csv.find("\r") == std::string::npos);

    // every data row parses back to three finite numbers
    std::istringstream lines(csv.substr(6));
    std::string line;
    std::size_t rows = 0;
    while (std::getline(lines, line)) {
        if (line.empty()) continue;
        double t, x, y;
        REQUIRE(std::sscanf(line.c_str(), "%lf,%lf,%lf", &t, &x, &y) == 3);
        ++rows;
    }
    std::size_t expect = 0;
    for (const auto& orbit : p.orbits) expect += orbit.samples.size();
    REQUIRE(rows == expect);

    SECTION("empty portrait is just the header") {
        Portrait empty = compute_portrait(kRotation, parse_grid("-1:1:-1:1:0"));
        REQUIRE(csv_of(empty) == "t,x,y\n");
    }
    SECTION("byte-stable across runs") {
        Portrait again = compute_portrait(kRotation, parse_grid("-1:1:-1:1:4"));
        REQUIRE(csv_of(again) == csv);
    }
}

TEST_CASE("SVG rendering") {
    const ComplexPoly f({{0, 0}, {0, 1}, {0, 0}, {0, -1}});
    Portrait p = compute_portrait(from_holomorphic(f), parse_grid("-2:2:-2:2:16"));
    const std::string svg = svg_of(p);

    REQUIRE(svg.rfind("<svg xmlns=", 0) == 0);
    REQUIRE(svg.find("</svg>\n") == svg.size() - 7);
    REQUIRE(count_substr(svg, "<circle") == 3);
    REQUIRE(count_substr(svg, "<polyline") <= 16);
    REQUIRE(count_substr(svg, "<polyline") >= 1);
    // no external references: self-contained by construction
    REQUIRE(svg.find("href") == std::string::npos);
    REQUIRE(svg.find("url(") == std::string::npos);

    SECTION("empty portrait still renders a frame") {
        Portrait empty = compute_portrait(kRotation, parse_grid("-1:1:-1:1:0"));
        const std::string s = svg_of(empty);
        REQUIRE(s.rfind("<svg xmlns=", 0) == 0);
        REQUIRE(count_substr(s, "<polyline") == 0);
        REQUIRE(count_substr(s, "<circle") == 1);
    }
    SECTION("byte-stable across runs") {
        Portrait again = compute_portrait(from_holomorphic(f), parse_grid("-2:2:-2:2:16"));
        REQUIRE(svg_of(again) == svg);
    }
}
