#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "specmoment/cli.hpp"

using namespace specmoment;

namespace {

struct RunResult {
    int code;
    std::string out;
    std::string err;
};

RunResult run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cli::run_cli(std::move(args), out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::string> split_lines(const std::string& s) {
    std::vector<std::string> lines;
    std::istringstream is(s);
    std::string line;
    while (std::getline(is, line)) lines.push_back(line);
    return lines;
}

}  // namespace

TEST_CASE("moment subcommand, plain output") {
    auto r = run({"moment", "--model", "exponential", "--function", "sinc:band=0.5"});
    CHECK(r.code == 0);
    CHECK(r.out.find("route = FastPath") != std::string::npos);
    CHECK(r.out.find("value = 0.4636476") != std::string::npos);
    CHECK(r.out.find("bound = ") != std::string::npos);
    // The execution plan echo goes to the diagnostic stream.
    CHECK(r.err.find("# plan:") != std::string::npos);
}

TEST_CASE("identical invocations produce identical bytes") {
    const std::vector<std::string> args = {"moment", "--model", "free:beta=2,hbar=1",
                                           "--function", "sinc:band=0.5", "--format", "csv"};
    auto a = run(args);
    auto b = run(args);
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(a.err == b.err);
}

TEST_CASE("moment csv format and header") {
    auto r = run({"moment", "--model", "exponential", "--function", "sinc:band=0.5",
                  "--format", "csv"});
    CHECK(r.code == 0);
    auto lines = split_lines(r.out);
    REQUIRE(lines.size() == 2);
    CHECK(lines[0] == "value,apriori_bound,route,n_nodes");
    CHECK(lines[1].find("0.46364760900080") == 0);
    CHECK(lines[1].find("FastPath") != std::string::npos);
}

TEST_CASE("moment json output parses and matches") {
    auto r = run({"moment", "--model", "exponential", "--function", "sinc:band=0.5",
                  "--format", "json"});
    CHECK(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j.at("route").get<std::string>() == "FastPath");
    CHECK(j.at("value").get<double>() == doctest::Approx(std::atan(0.5)).epsilon(1e-12));
    CHECK(j.at("apriori_bound").get<double>() <= 1e-10);
    CHECK(j.at("n_nodes").get<int>() >= 2);
}

TEST_CASE("validate prints plans and rejections") {
    auto ok = run({"validate", "--model", "strip:tau0=1", "--function", "exp:t=1.5"});
    CHECK(ok.code == 0);
    CHECK(ok.out.find("StripBandLimited") != std::string::npos);
    CHECK(ok.out.find("justification") != std::string::npos);

    auto bad = run({"validate", "--model", "strip:tau0=1", "--function", "exp:t=2.5"});
    CHECK(bad.code == 2);
    CHECK(bad.out.find("no valid route") != std::string::npos);
    // Rejection reasons enumerate the alternatives, one per line.
    CHECK(split_lines(bad.out).size() >= 4);
}

TEST_CASE("moment exits 2 when no route admits the function") {
    auto r = run({"moment", "--model", "gaussian", "--function", "gauss"});
    CHECK(r.code == 2);
    CHECK(r.err.find("no valid route") != std::string::npos);
}

TEST_CASE("bad flags and models exit 1") {
    CHECK(run({"moment", "--model", "exponential", "--nonsense"}).code == 1);
    CHECK(run({"moment", "--model", "not_a_model"}).code == 1);
    CHECK(run({}).code == 1);  // missing subcommand
    CHECK(run({"moment", "--model", "uniform:r=-1"}).code == 1);
}

TEST_CASE("help exits 0") {
    auto r = run({"--help"});
    CHECK(r.code == 0);
    CHECK(r.out.find("moment") != std::string::npos);
}

TEST_CASE("reconstruct csv output") {
    auto r = run({"reconstruct", "--model", "free:beta=2,hbar=1", "--times", "0,1",
                  "--format", "csv"});
    CHECK(r.code == 0);
    auto lines = split_lines(r.out);
    REQUIRE(lines.size() == 3);
    CHECK(lines[0] == "t,value_re,value_im,route,n_nodes");
    const auto re_of = [](const std::string& line) {
        return std::stod(line.substr(line.find(',') + 1));
    };
    const double pref = 1.0 / (4.0 * std::numbers::pi);
    CHECK(re_of(lines[1]) == doctest::Approx(pref).epsilon(1e-10));
    CHECK(re_of(lines[2]) == doctest::Approx(pref * std::pow(2.0, -1.5)).epsilon(1e-8));
    CHECK(lines[2].find("BranchCutAnalytic") != std::string::npos);
}

TEST_CASE("spectrum csv scan with grid expansion") {
    auto r = run({"spectrum", "--model", "exponential", "--function", "bump:band=1",
                  "--grid", "-0.7:0.7:0.7", "--sigma", "1", "--format", "csv"});
    CHECK(r.code == 0);
    auto lines = split_lines(r.out);
    REQUIRE(lines.size() == 4);  // header + three grid points
    CHECK(lines[0] == "omega0,sigma,value,route,bound");
    const auto v = [](const std::string& line) {
        const auto a = line.find(',', line.find(',') + 1);
        return std::stod(line.substr(a + 1));
    };
    CHECK(v(lines[2]) == doctest::Approx(1.0612716695454795).epsilon(1e-10));
    // Even measure: first and last rows hold the same value.
    CHECK(v(lines[1]) == doctest::Approx(v(lines[3])).epsilon(1e-9));
}

TEST_CASE("spectrum comma grids and partial failure reporting") {
    auto r = run({"spectrum", "--model", "strip:tau0=1", "--function", "sinc:band=1",
                  "--grid", "0,0.5", "--sigma", "0.4", "--format", "csv"});
    // Every point fails: exit 2, per-point reasons on the diagnostic stream.
    CHECK(r.code == 2);
    CHECK(r.err.find("# point omega0=") != std::string::npos);
    auto lines = split_lines(r.out);
    REQUIRE(lines.size() == 3);
    CHECK(lines[1].find(",,") != std::string::npos);
}

TEST_CASE("converge emits the pinned header and decreasing errors") {
    auto r = run({"converge", "--model", "exponential", "--function", "sinc:band=0.5",
                  "--n-list", "8,16,32,64", "--tau", "0.75"});
    CHECK(r.code == 0);
    auto lines = split_lines(r.out);
    REQUIRE(lines.size() == 5);
    CHECK(lines[0] == "n_nodes,value,abs_error,apriori_bound,route");
    double prev = 1e300;
    for (size_t i = 1; i < lines.size(); ++i) {
        std::istringstream is(lines[i]);
        std::string tok;
        std::getline(is, tok, ',');  // n_nodes
        std::getline(is, tok, ',');  // value
        std::getline(is, tok, ',');  // abs_error
        const double e = std::stod(tok);
        CHECK(e < prev);
        prev = e;
    }
}

TEST_CASE("converge refuses non-collapsible problems") {
    auto r = run({"converge", "--model", "strip:tau0=1", "--function", "exp:t=1.5",
                  "--n-list", "8,16"});
    CHECK(r.code == 2);
    CHECK(r.err.find("collapsed fast route") != std::string::npos);
    CHECK(r.err.find("StripBandLimited") != std::string::npos);
}

TEST_CASE("config file supplies defaults, flags override") {
    const char* path = "specmoment_test_config.json";
    {
        std::ofstream os(path);
        os << R"({"model": "strip:tau0=1", "function": {"name": "exp", "t": 1.5},)"
           << R"( "format": "csv"})";
    }
    auto r = run({"moment", "--config", path});
    CHECK(r.code == 0);
    auto lines = split_lines(r.out);
    REQUIRE(lines.size() == 2);
    CHECK(lines[0] == "value,apriori_bound,route,n_nodes");
    CHECK(std::stod(lines[1]) == doctest::Approx(1.0 / 3.25).epsilon(1e-8));
    CHECK(lines[1].find("StripBandLimited") != std::string::npos);

    // A flag beats the config value: t = 2.5 has no admissible route.
    auto o = run({"moment", "--config", path, "--function", "exp:t=2.5"});
    CHECK(o.code == 2);
    std::remove(path);
}

TEST_CASE("missing config file exits 1") {
    auto r = run({"moment", "--config", "no_such_file.json"});
    CHECK(r.code == 1);
    CHECK_FALSE(r.err.empty());
}

TEST_CASE("monomial and polynomial function descriptors") {
    auto r = run({"moment", "--model", "exponential", "--function", "mono:k=2",
                  "--format", "csv"});
    CHECK(r.code == 0);
    CHECK(std::stod(split_lines(r.out)[1]) == doctest::Approx(2.0).epsilon(1e-8));
    auto p = run({"moment", "--model", "exponential", "--function", "poly:coeffs=1|0|1",
                  "--format", "csv"});
    CHECK(p.code == 0);
    CHECK(std::stod(split_lines(p.out)[1]) == doctest::Approx(3.0).epsilon(1e-8));
}

TEST_CASE("explicit contour flags are honored") {
    auto r = run({"moment", "--model", "exponential", "--function", "sinc:band=0.5",
                  "--tau", "0.75", "--nodes", "64", "--format", "csv"});
    CHECK(r.code == 0);
    const auto line = split_lines(r.out)[1];
    CHECK(line.find(",64") != std::string::npos);
    // Pinned low node count leaves the documented aliasing-level error.
    const double v = std::stod(line.substr(0, line.find(',')));
    CHECK(std::abs(v - std::atan(0.5)) > 1e-10);
    CHECK(std::abs(v - std::atan(0.5)) < 1e-7);
}
