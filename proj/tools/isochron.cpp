// isochron — exact and numeric analysis of commuting planar polynomial
// systems.
//
// Subcommands: bracket, centralizer, gen, probe, portrait, verify-paper.
// Exit codes: 0 ok, 1 property false, 2 parse error, 3 precondition
// violated, 4 numeric non-closure, 5 file I/O.

#include "isochron/catalog.hpp"
#include "isochron/centralizer.hpp"
#include "isochron/errors.hpp"
#include "isochron/field.hpp"
#include "isochron/flow.hpp"
#include "isochron/newton_abel.hpp"
#include "isochron/parse.hpp"
#include "isochron/poly2.hpp"
#include "isochron/portrait.hpp"
#include "isochron/verify.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

using nlohmann::json;
using namespace isochron;

namespace {

struct IoError : std::runtime_error {
    explicit IoError(const std::string& path) : std::runtime_error("cannot write " + path) {}
};

// Settings shared by every subcommand.
struct Global {
    bool as_json = false;
    double tol = 1e-12;
    unsigned long seed = 20260816;
    double escape_radius = 1e3;
    double singularity_threshold = 1e-13;

    IntegratorOptions integrator() const {
        IntegratorOptions o;
        o.tol = tol;
        o.escape_radius = escape_radius;
        o.singularity_threshold = singularity_threshold;
        return o;
    }
};

json field_json(const VectorField& F) {
    return json{{"p", F.p.to_string()}, {"q", F.q.to_string()}};
}

void write_file(const std::string& path, const std::function<void(std::ostream&)>& writer) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError(path);
    writer(os);
    os.flush();
    if (!os) throw IoError(path);
}

std::vector<double> parse_double_list(const std::string& src) {
    std::vector<double> out;
    std::size_t pos = 0;
    while (pos < src.size()) {
        const std::string tail = src.substr(pos);
        char* end = nullptr;
        const double v = std::strtod(tail.c_str(), &end);
        if (end == tail.c_str())
            throw ParseError("expected a number at offset " + std::to_string(pos), pos,
                             {"number"});
        pos += static_cast<std::size_t>(end - tail.c_str());
        out.push_back(v);
        if (pos < src.size()) {
            if (src[pos] != ',')
                throw ParseError("expected ',' at offset " + std::to_string(pos), pos, {"','"});
            ++pos;
        }
    }
    if (out.empty()) throw ParseError("empty list", 0, {"number"});
    return out;
}

// ----------------------------------------------------------------- bracket

int cmd_bracket(const Global& g, const std::vector<std::string>& polys) {
    const VectorField F{parse_poly(polys[0]), parse_poly(polys[1])};
    const VectorField G{parse_poly(polys[2]), parse_poly(polys[3])};
    const VectorField b = lie_bracket(F, G);
    const bool zero = b.p.is_zero() && b.q.is_zero();
    if (g.as_json) {
        json j = field_json(b);
        j["commute"] = zero;
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "bracket.p: " << b.p.to_string() << "\n";
        std::cout << "bracket.q: " << b.q.to_string() << "\n";
        std::cout << "commute: " << (zero ? "yes" : "no") << "\n";
    }
    return zero ? 0 : 1;
}

// ------------------------------------------------------------- centralizer

int cmd_centralizer(const Global& g, const std::string& p, const std::string& q, int degree) {
    const VectorField F{parse_poly(p), parse_poly(q)};
    const CentralizerBasis basis = centralizer(F, degree);
    if (g.as_json) {
        json j;
        j["degree_bound"] = basis.degree_bound;
        j["dimension"] = basis.dimension();
        j["basis"] = json::array();
        for (const auto& G : basis.basis) j["basis"].push_back(field_json(G));
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "degree_bound: " << basis.degree_bound << "\n";
        std::cout << "dimension: " << basis.dimension() << "\n";
        for (std::size_t k = 0; k < basis.basis.size(); ++k)
            std::cout << "basis[" << k << "]: " << basis.basis[k].to_string() << "\n";
    }
    return 0;
}

// --------------------------------------------------------------------- gen

int emit_system(const Global& g, const VectorField& sys,
                const std::optional<VectorField>& partner) {
    if (g.as_json) {
        json j;
        j["system"] = field_json(sys);
        j["partner"] = partner ? field_json(*partner) : json(nullptr);
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "system.p: " << sys.p.to_string() << "\n";
        std::cout << "system.q: " << sys.q.to_string() << "\n";
        if (partner) {
            std::cout << "partner.p: " << partner->p.to_string() << "\n";
            std::cout << "partner.q: " << partner->q.to_string() << "\n";
        }
    }
    return 0;
}

int cmd_gen_abel(const Global& g, const std::string& a_text, const std::string& h_text) {
    const AbelGeneratorInput input{parse_rational(a_text), parse_poly(h_text)};
    const AbelSystem s = generate_abel(input);
    return emit_system(g, s.field(), transversal_partner(s));
}

int cmd_gen_lienard(const Global& g, const std::string& q1_text) {
    const Poly2 q1 = parse_poly(q1_text);
    const NewtonSystem sys = gen_lienard_isochronous(q1);
    // the constructed force is linear in velocity: recover the commuting
    // partner through the cubic normal form when the conditions allow it
    std::optional<VectorField> partner;
    try {
        AbelSystem abel{sys.q.coeff_of_y(0), rational(1, 3) * sys.q.coeff_of_y(1),
                        Poly2::zero(), Poly2::zero()};
        partner = transversal_partner(abel);
    } catch (const PreconditionViolated&) {
        // no partner printed; the generated system itself is still valid
    }
    return emit_system(g, sys.field(), partner);
}

int cmd_gen_hamiltonian(const Global& g, const std::string& u_text, const std::string& v_text) {
    auto [sys, partner] = hamiltonian_from_area_preserving(parse_poly(u_text), parse_poly(v_text));
    return emit_system(g, sys, partner);
}

int cmd_gen_homog(const Global& g, int m) {
    return emit_system(g, homogeneous_perturbation(m).field(), std::nullopt);
}

// ------------------------------------------------------------------- probe

int cmd_probe(const Global& g, const std::string& p, const std::string& q,
              const std::vector<double>& center, const std::string& amplitudes_text,
              const std::string& csv_path, double threshold) {
    const VectorField F{parse_poly(p), parse_poly(q)};
    const std::vector<double> amplitudes = parse_double_list(amplitudes_text);
    const PeriodProbe probe =
        isochronicity_probe(F, {center[0], center[1]}, amplitudes, g.integrator());
    const bool flat = probe.max_deviation < threshold;

    if (!csv_path.empty())
        write_file(csv_path, [&](std::ostream& os) {
            os << "amplitude,period\n";
            for (const auto& row : probe.rows)
                os << isochron::detail::fmt17(row.amplitude) << ','
                   << isochron::detail::fmt17(row.period) << '\n';
        });

    if (g.as_json) {
        json j;
        j["center"] = {center[0], center[1]};
        j["rows"] = json::array();
        for (const auto& row : probe.rows)
            j["rows"].push_back({{"amplitude", row.amplitude}, {"period", row.period}});
        j["max_deviation"] = probe.max_deviation;
        j["threshold"] = threshold;
        j["isochronous"] = flat;
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "amplitude period\n";
        for (const auto& row : probe.rows)
            std::cout << isochron::detail::fmt17(row.amplitude) << ' '
                      << isochron::detail::fmt17(row.period) << "\n";
        std::cout << "max_deviation: " << isochron::detail::fmt17(probe.max_deviation) << "\n";
        std::cout << "isochronous: " << (flat ? "yes" : "no") << "\n";
    }
    return flat ? 0 : 1;
}

// ----------------------------------------------------------------- portrait

int cmd_portrait(const Global& g, const std::string& p, const std::string& q,
                 const std::string& grid_text, const std::string& svg_path,
                 const std::string& csv_path, double t_span) {
    const VectorField F{parse_poly(p), parse_poly(q)};
    const GridSpec grid = parse_grid(grid_text);
    PortraitOptions opts;
    opts.t_span = t_span;
    opts.integ = g.integrator();
    const Portrait portrait = compute_portrait(F, grid, opts);

    if (!csv_path.empty())
        write_file(csv_path, [&](std::ostream& os) { write_portrait_csv(portrait, os); });
    if (!svg_path.empty())
        write_file(svg_path, [&](std::ostream& os) { write_portrait_svg(portrait, os); });

    if (g.as_json) {
        json j;
        j["orbits"] = portrait.orbits.size();
        std::size_t samples = 0;
        for (const auto& orbit : portrait.orbits) samples += orbit.samples.size();
        j["samples"] = samples;
        j["singular_points"] = json::array();
        for (const auto& s : portrait.singular_points)
            j["singular_points"].push_back({s[0], s[1]});
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "orbits: " << portrait.orbits.size() << "\n";
        std::cout << "singular_points: " << portrait.singular_points.size() << "\n";
        for (const auto& s : portrait.singular_points)
            std::cout << "  (" << isochron::detail::fmt17(s[0]) << ", "
                      << isochron::detail::fmt17(s[1]) << ")\n";
    }
    return 0;
}

// -------------------------------------------------------------- verify-paper

int cmd_verify(const Global& g, bool corrupt_fixture) {
    VerifyOptions opts;
    opts.seed = g.seed;
    opts.corrupt_fixture = corrupt_fixture;
    const VerifyReport report = run_verification(opts);

    if (g.as_json) {
        json j = json::array();
        for (const auto& row : report.rows)
            j.push_back({{"claim", row.id + ": " + row.claim},
                         {"citation", row.citation},
                         {"status", row.pass ? "pass" : "fail"},
                         {"metric", row.metric}});
        std::cout << j.dump(2) << "\n";
    } else {
        std::size_t passed = 0;
        for (const auto& row : report.rows) {
            std::cout << (row.pass ? "[PASS] " : "[FAIL] ") << row.id << " (" << row.citation
                      << ") metric=" << isochron::detail::fmt17(row.metric);
            if (!row.note.empty()) std::cout << " note=" << row.note;
            std::cout << "\n";
            passed += row.pass;
        }
        std::cout << "claims: " << report.rows.size() << " passed: " << passed
                  << " failed: " << (report.rows.size() - passed) << "\n";
    }
    return report.all_pass ? 0 : 1;
}

// Shared exception-to-exit-code map. ZeroField counts as bad input text, not
// a precondition, per the external contract.
int guarded(const std::function<int()>& action) {
    try {
        return action();
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ZeroField& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const PreconditionViolated& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const OrbitNotClosed& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 5;
    } catch (const std::runtime_error& e) {
        // integrator/root-finder trouble: step underflow, escape, divergence
        std::cerr << "numeric error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 70;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact and numeric analysis of commuting planar polynomial systems"};
    app.require_subcommand(1);

    Global g;
    app.add_flag("--json", g.as_json, "machine-readable JSON on stdout");
    app.add_option("--tol", g.tol, "integrator tolerance")->capture_default_str();
    app.add_option("--seed", g.seed, "seed for randomized verification sweeps")
        ->capture_default_str();
    app.add_option("--escape-radius", g.escape_radius, "stop integrating past this radius")
        ->capture_default_str();
    app.add_option("--singularity-threshold", g.singularity_threshold,
                   "stop integrating when |F| falls below this")
        ->capture_default_str();

    std::function<int()> action;

    // bracket P Q R S
    {
        auto* sub = app.add_subcommand("bracket", "Lie bracket of two fields (p,q) and (r,s)");
        sub->fallthrough();
        auto polys = std::make_shared<std::vector<std::string>>();
        sub->add_option("polys", *polys, "four polynomials: p q r s")->expected(4)->required();
        sub->callback([&, polys] { action = [&, polys] { return cmd_bracket(g, *polys); }; });
    }

    // centralizer P Q --degree D
    {
        auto* sub = app.add_subcommand("centralizer",
                                       "basis of all fields of degree <= d commuting with (p,q)");
        sub->fallthrough();
        auto p = std::make_shared<std::string>();
        auto q = std::make_shared<std::string>();
        auto d = std::make_shared<int>(0);
        sub->add_option("p", *p, "first component")->required();
        sub->add_option("q", *q, "second component")->required();
        sub->add_option("--degree", *d, "degree bound")->required()
            ->check(CLI::NonNegativeNumber);
        sub->callback(
            [&, p, q, d] { action = [&, p, q, d] { return cmd_centralizer(g, *p, *q, *d); }; });
    }

    // gen (--abel A H | --lienard Q1 | --hamiltonian U V | --homog M)
    {
        auto* sub = app.add_subcommand("gen", "construct systems with known behavior");
        sub->fallthrough();
        auto abel = std::make_shared<std::vector<std::string>>();
        auto lienard = std::make_shared<std::string>();
        auto ham = std::make_shared<std::vector<std::string>>();
        auto homog = std::make_shared<int>(0);
        auto* o1 = sub->add_option("--abel", *abel,
                                   "normal-form generator: rational a, polynomial h(x)")
                       ->expected(2);
        auto* o2 = sub->add_option("--lienard", *lienard,
                                   "isochronous linear-velocity force from odd q1(x)");
        auto* o3 = sub->add_option("--hamiltonian", *ham,
                                   "commuting pair from an area-preserving map (u, v)")
                       ->expected(2);
        auto* o4 = sub->add_option("--homog", *homog,
                                   "homogeneous oscillator perturbation, index m >= 1")
                       ->check(CLI::PositiveNumber);
        o1->excludes(o2, o3, o4);
        o2->excludes(o3, o4);
        o3->excludes(o4);
        sub->callback([&, sub, abel, lienard, ham, homog] {
            if (sub->count("--abel"))
                action = [&, abel] { return cmd_gen_abel(g, (*abel)[0], (*abel)[1]); };
            else if (sub->count("--lienard"))
                action = [&, lienard] { return cmd_gen_lienard(g, *lienard); };
            else if (sub->count("--hamiltonian"))
                action = [&, ham] { return cmd_gen_hamiltonian(g, (*ham)[0], (*ham)[1]); };
            else if (sub->count("--homog"))
                action = [&, homog] { return cmd_gen_homog(g, *homog); };
            else
                throw CLI::RequiredError("gen: one of --abel/--lienard/--hamiltonian/--homog");
        });
    }

    // probe P Q [--center CX CY] [--amplitudes LIST] [--csv PATH] [--threshold T]
    {
        auto* sub = app.add_subcommand("probe", "measure periods at a ladder of amplitudes");
        sub->fallthrough();
        auto p = std::make_shared<std::string>();
        auto q = std::make_shared<std::string>();
        auto center = std::make_shared<std::vector<double>>(std::vector<double>{0.0, 0.0});
        auto amps = std::make_shared<std::string>("0.1,0.2,0.3,0.4");
        auto csv = std::make_shared<std::string>();
        auto threshold = std::make_shared<double>(1e-6);
        sub->add_option("p", *p, "first component")->required();
        sub->add_option("q", *q, "second component")->required();
        sub->add_option("--center", *center, "center coordinates")->expected(2);
        sub->add_option("--amplitudes", *amps, "comma-separated offsets along +x")
            ->capture_default_str();
        sub->add_option("--csv", *csv, "write amplitude,period rows to this file");
        sub->add_option("--threshold", *threshold, "isochronism verdict bound")
            ->capture_default_str();
        sub->callback([&, p, q, center, amps, csv, threshold] {
            action = [&, p, q, center, amps, csv, threshold] {
                return cmd_probe(g, *p, *q, *center, *amps, *csv, *threshold);
            };
        });
    }

    // portrait P Q --grid SPEC [--svg PATH] [--csv PATH] [--t-span T]
    {
        auto* sub = app.add_subcommand("portrait", "integrate an orbit lattice and render it");
        sub->fallthrough();
        auto p = std::make_shared<std::string>();
        auto q = std::make_shared<std::string>();
        auto grid = std::make_shared<std::string>();
        auto svg = std::make_shared<std::string>();
        auto csv = std::make_shared<std::string>();
        auto t_span = std::make_shared<double>(8.0);
        sub->add_option("p", *p, "first component")->required();
        sub->add_option("q", *q, "second component")->required();
        sub->add_option("--grid", *grid, "xmin:xmax:ymin:ymax:n_orbits")->required();
        sub->add_option("--svg", *svg, "write a standalone SVG here");
        sub->add_option("--csv", *csv, "write t,x,y orbit blocks here");
        sub->add_option("--t-span", *t_span, "integration span per direction")
            ->capture_default_str();
        sub->callback([&, p, q, grid, svg, csv, t_span] {
            action = [&, p, q, grid, svg, csv, t_span] {
                return cmd_portrait(g, *p, *q, *grid, *svg, *csv, *t_span);
            };
        });
    }

    // verify-paper
    {
        auto* sub = app.add_subcommand("verify-paper",
                                       "run every cited claim check and report pass/fail");
        sub->fallthrough();
        auto corrupt = std::make_shared<bool>(false);
        sub->add_flag("--corrupt-fixture", *corrupt,
                      "testing hook: sabotage one fixture to exercise the failure path")
            ->group("");  // hidden from help
        sub->callback([&, corrupt] { action = [&, corrupt] { return cmd_verify(g, *corrupt); }; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;  // bad command line is a parse error
    }

    return guarded(action);
}
