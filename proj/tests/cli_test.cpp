// End-to-end checks of the command-line tool. Each case spawns the real
// binary (path supplied by the build through ISOCHRON_CLI), captures stdout,
// stderr, and the exit status, and checks the external contract: output
// formats, file side effects, and the exit-code map.

#include <catch2/catch_amalgamated.hpp>

#include <json.hpp>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace {

namespace fs = std::filesystem;

std::string shell_quote(const std::string& s) {
    std::string out = "'";
    for (char c : s) {
        if (c == '\'')
            out += "'\\''";
        else
            out += c;
    }
    out += "'";
    return out;
}

std::string slurp(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

fs::path temp_path(const std::string& stem) {
    static int counter = 0;
    return fs::temp_directory_path() /
           ("isochron_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter++) + "_" +
            stem);
}

struct RunResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

RunResult run_cli(const std::vector<std::string>& args) {
    const char* bin = std::getenv("ISOCHRON_CLI");
    REQUIRE(bin != nullptr);

    const fs::path out_file = temp_path("stdout");
    const fs::path err_file = temp_path("stderr");
    std::string cmd = shell_quote(bin);
    for (const auto& a : args) cmd += " " + shell_quote(a);
    cmd += " > " + shell_quote(out_file.string()) + " 2> " + shell_quote(err_file.string());

    const int status = std::system(cmd.c_str());
    REQUIRE(WIFEXITED(status));

    RunResult r;
    r.exit_code = WEXITSTATUS(status);
    r.out = slurp(out_file);
    r.err = slurp(err_file);
    fs::remove(out_file);
    fs::remove(err_file);
    return r;
}

bool contains(const std::string& hay, const std::string& needle) {
    return hay.find(needle) != std::string::npos;
}

}  // namespace

TEST_CASE("bracket subcommand") {
    SECTION("a commuting pair reports zero and exits 0") {
        const auto r = run_cli({"bracket", "--", "-y - 3*x^2*y + y^3", "x + x^3 - 3*x*y^2",
                                "x + x^3 - 3*x*y^2", "y + 3*x^2*y - y^3"});
        REQUIRE(r.exit_code == 0);
        REQUIRE(r.out == "bracket.p: 0\nbracket.q: 0\ncommute: yes\n");
    }

    SECTION("a noncommuting pair prints the bracket and exits 1") {
        const auto r = run_cli({"bracket", "--", "-y", "x", "x", "0"});
        REQUIRE(r.exit_code == 1);
        REQUIRE(r.out == "bracket.p: y\nbracket.q: x\ncommute: no\n");
    }

    SECTION("json output carries the components and the verdict") {
        const auto r = run_cli({"--json", "bracket", "--", "-y", "x", "x", "y"});
        REQUIRE(r.exit_code == 0);
        const auto j = nlohmann::json::parse(r.out);
        REQUIRE(j.at("p").get<std::string>() == "0");
        REQUIRE(j.at("q").get<std::string>() == "0");
        REQUIRE(j.at("commute").get<bool>() == true);
    }

    SECTION("malformed polynomial text exits 2") {
        const auto r = run_cli({"bracket", "--", "x +", "x", "x", "0"});
        REQUIRE(r.exit_code == 2);
        REQUIRE(contains(r.err, "parse error"));
    }
}

TEST_CASE("centralizer subcommand") {
    SECTION("json schema and the two-dimensional example") {
        const auto r = run_cli(
            {"--json", "centralizer", "--degree", "4", "--", "-y", "x + 3*x*y + x^3"});
        REQUIRE(r.exit_code == 0);
        const auto j = nlohmann::json::parse(r.out);
        REQUIRE(j.at("degree_bound").get<int>() == 4);
        REQUIRE(j.at("dimension").get<int>() == 2);
        REQUIRE(j.at("basis").is_array());
        REQUIRE(j.at("basis").size() == 2);
        for (const auto& e : j.at("basis")) {
            REQUIRE(e.at("p").is_string());
            REQUIRE(e.at("q").is_string());
        }
    }

    SECTION("text output names the dimension") {
        const auto r = run_cli({"centralizer", "--degree", "4", "--", "-y", "x + 3*x*y + x^3"});
        REQUIRE(r.exit_code == 0);
        REQUIRE(contains(r.out, "dimension: 2\n"));
        REQUIRE(contains(r.out, "basis[0]:"));
        REQUIRE(contains(r.out, "basis[1]:"));
    }

    SECTION("the zero field is rejected as bad input") {
        const auto r = run_cli({"centralizer", "--degree", "3", "--", "0", "0"});
        REQUIRE(r.exit_code == 2);
        REQUIRE(contains(r.err, "identically zero"));
    }
}

TEST_CASE("gen subcommand") {
    SECTION("normal-form generator, simplest instance") {
        const auto r = run_cli({"gen", "--abel", "0", "1"});
        REQUIRE(r.exit_code == 0);
        REQUIRE(r.out ==
                "system.p: -y\n"
                "system.q: x + 3*x*y + 3*x*y^2 + x*y^3\n"
                "partner.p: x + x*y\n"
                "partner.q: y - x^2 + y^2 - 3*x^2*y - 3*x^2*y^2 - x^2*y^3\n");
    }

    SECTION("linear-velocity force from an odd coefficient") {
        const auto r = run_cli({"gen", "--lienard", "x"});
        REQUIRE(r.exit_code == 0);
        REQUIRE(r.out ==
                "system.p: -y\n"
                "system.q: x + x*y + 1/9*x^3\n"
                "partner.p: x + 1/3*x*y + 1/9*x^3\n"
                "partner.q: y - 1/3*x^2 + 1/3*y^2 - 1/27*x^4\n");
    }

    SECTION("an even coefficient violates the construction's hypothesis") {
        const auto r = run_cli({"gen", "--lienard", "x^2"});
        REQUIRE(r.exit_code == 3);
        REQUIRE(contains(r.err, "odd"));
    }

    SECTION("a map that does not preserve area is rejected") {
        const auto r = run_cli({"gen", "--hamiltonian", "x", "x"});
        REQUIRE(r.exit_code == 3);
        REQUIRE(contains(r.err, "jacobian"));
    }

    SECTION("homogeneous perturbation has no partner in json output") {
        const auto r = run_cli({"--json", "gen", "--homog", "1"});
        REQUIRE(r.exit_code == 0);
        const auto j = nlohmann::json::parse(r.out);
        REQUIRE(j.at("partner").is_null());
        REQUIRE(j.at("system").at("p").is_string());
        REQUIRE(!j.at("system").at("q").get<std::string>().empty());
    }

    SECTION("a mode flag is required") {
        const auto r = run_cli({"gen"});
        REQUIRE(r.exit_code == 2);
        REQUIRE(contains(r.err, "--abel"));
    }
}

TEST_CASE("probe subcommand") {
    const std::string kukles_p = "-y";
    const std::string kukles_q = "x + 3*x*y + x^3";

    SECTION("an isochronous center exits 0 and writes the ladder as csv") {
        const fs::path csv = temp_path("probe.csv");
        const auto r = run_cli(
            {"probe", "--csv", csv.string(), "--", kukles_p, kukles_q});
        REQUIRE(r.exit_code == 0);
        REQUIRE(contains(r.out, "isochronous: yes\n"));

        const std::string body = slurp(csv);
        fs::remove(csv);
        REQUIRE(body.rfind("amplitude,period\n", 0) == 0);
        // header + one row per default amplitude
        REQUIRE(std::count(body.begin(), body.end(), '\n') == 5);
        std::istringstream is(body);
        std::string line;
        std::getline(is, line);  // header
        while (std::getline(is, line)) {
            double a = 0.0, t = 0.0;
            REQUIRE(std::sscanf(line.c_str(), "%lf,%lf", &a, &t) == 2);
            REQUIRE(std::abs(t - 6.283185307179586) < 1e-6);
        }
    }

    SECTION("a center with amplitude-dependent period exits 1") {
        const auto r = run_cli({"probe", "--", "-y", "x + x*y"});
        REQUIRE(r.exit_code == 1);
        REQUIRE(contains(r.out, "isochronous: no\n"));
    }

    SECTION("an open orbit is a numeric failure, exit 4") {
        const auto r = run_cli({"probe", "--", "x", "y"});
        REQUIRE(r.exit_code == 4);
        REQUIRE(contains(r.err, "did not close"));
    }

    SECTION("json output is byte-stable across runs") {
        const std::vector<std::string> args = {"--json", "probe", "--amplitudes", "0.1,0.3",
                                               "--", kukles_p, kukles_q};
        const auto r1 = run_cli(args);
        const auto r2 = run_cli(args);
        REQUIRE(r1.exit_code == 0);
        REQUIRE(r1.out == r2.out);
        const auto j = nlohmann::json::parse(r1.out);
        REQUIRE(j.at("rows").size() == 2);
        REQUIRE(j.at("isochronous").get<bool>() == true);
        REQUIRE(j.at("max_deviation").get<double>() < 1e-6);
    }
}

TEST_CASE("portrait subcommand") {
    const std::string sep_p = "-y + 3*x^2*y - y^3";
    const std::string sep_q = "x - x^3 + 3*x*y^2";

    SECTION("writes svg and csv files and reports equilibria") {
        const fs::path svg = temp_path("portrait.svg");
        const fs::path csv = temp_path("portrait.csv");
        const auto r = run_cli({"--json", "portrait", "--grid", "-1.5:1.5:-1:1:4", "--svg",
                                svg.string(), "--csv", csv.string(), "--", sep_p, sep_q});
        REQUIRE(r.exit_code == 0);

        const auto j = nlohmann::json::parse(r.out);
        REQUIRE(j.at("singular_points").size() == 3);
        REQUIRE(j.at("orbits").get<int>() >= 1);

        const std::string svg_body = slurp(svg);
        const std::string csv_body = slurp(csv);
        fs::remove(svg);
        fs::remove(csv);
        REQUIRE(svg_body.rfind("<svg xmlns=", 0) == 0);
        REQUIRE(svg_body.size() >= 8);
        REQUIRE(svg_body.substr(svg_body.size() - 7) == "</svg>\n");
        REQUIRE(csv_body.rfind("t,x,y\n", 0) == 0);
    }

    SECTION("an unwritable output path exits 5") {
        const auto r = run_cli({"portrait", "--grid", "-1:1:-1:1:1", "--svg",
                                "/nonexistent-dir-xyz/out.svg", "--", "-y", "x"});
        REQUIRE(r.exit_code == 5);
        REQUIRE(contains(r.err, "cannot write"));
    }

    SECTION("a malformed grid spec exits 2") {
        const auto r = run_cli({"portrait", "--grid", "0:1;0:1:5", "--", "-y", "x"});
        REQUIRE(r.exit_code == 2);
    }
}

TEST_CASE("verify-paper subcommand") {
    SECTION("every claim passes and the json schema holds") {
        const auto r = run_cli({"--json", "verify-paper"});
        REQUIRE(r.exit_code == 0);
        const auto j = nlohmann::json::parse(r.out);
        REQUIRE(j.is_array());
        REQUIRE(j.size() == 34);
        bool saw_example_2 = false;
        for (const auto& row : j) {
            REQUIRE(row.at("claim").is_string());
            REQUIRE(row.at("citation").is_string());
            REQUIRE(row.at("status").get<std::string>() == "pass");
            REQUIRE(row.at("metric").is_number());
            saw_example_2 = saw_example_2 || row.at("citation").get<std::string>() == "Example 2";
        }
        REQUIRE(saw_example_2);
    }

    SECTION("a sabotaged fixture is caught and named") {
        const auto r = run_cli({"verify-paper", "--corrupt-fixture"});
        REQUIRE(r.exit_code == 1);
        REQUIRE(contains(r.out, "[FAIL] 05-commute-kukles (Example 2)"));
        REQUIRE(contains(r.out, "failed: 1\n"));
    }
}

TEST_CASE("top-level command-line behavior") {
    SECTION("--help exits 0 and lists the subcommands") {
        const auto r = run_cli({"--help"});
        REQUIRE(r.exit_code == 0);
        for (const char* name :
             {"bracket", "centralizer", "gen", "probe", "portrait", "verify-paper"})
            REQUIRE(contains(r.out, name));
    }

    SECTION("an unknown subcommand exits 2") {
        const auto r = run_cli({"frobnicate"});
        REQUIRE(r.exit_code == 2);
    }

    SECTION("global flags are accepted after the subcommand name") {
        const auto r = run_cli({"portrait", "--grid", "-1:1:-1:1:0", "--json", "--", "-y", "x"});
        REQUIRE(r.exit_code == 0);
        const auto j = nlohmann::json::parse(r.out);
        REQUIRE(j.at("orbits").get<int>() == 0);
    }
}
