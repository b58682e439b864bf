#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "grr/scenario.hpp"

#include <fstream>
#include <sstream>

using namespace grr;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

}  // namespace

TEST_CASE("minimal scenario") {
    auto r = run_text("space X = proj 2\n"
                      "immersion line = sub_linear X 1\n"
                      "check self_intersection line 1\n");
    CHECK(r.exit_code == 0);
    CHECK(r.report.find("pass self_intersection") != std::string::npos);
}

TEST_CASE("empty scenario") {
    auto r = run_text("");
    CHECK(r.exit_code == 0);
    CHECK(r.report.empty());
}

TEST_CASE("diagnostics carry locations") {
    SUBCASE("undeclared bundle name") {
        auto r = run_text("space X = proj 2\ncheck whitney E F\n");
        CHECK(r.exit_code == 2);
        CHECK(r.report.find("unknown bundle E") != std::string::npos);
    }
    SUBCASE("malformed rational 1/0") {
        try {
            parse_scenario("space X = proj 2\nclass a on X = 1/0\n");
            FAIL("expected ParseError");
        } catch (const Error& e) {
            CHECK(e.code() == Errc::ParseError);
            CHECK(std::string(e.what()).find("line 2") != std::string::npos);
        }
    }
    SUBCASE("type error with location") {
        auto r = run_text("space X = proj 2\nbundle E on X = rank 1 chern [h]\n"
                          "eval X : E + 1\n");
        CHECK(r.exit_code == 2);
        CHECK(r.report.find("TypeError") != std::string::npos);
    }
}

TEST_CASE("expected values and exit codes") {
    SUBCASE("hrr value in the report") {
        auto r = run_text("check hrr 2 1\n");
        CHECK(r.exit_code == 0);
        CHECK(r.report.find("value=3") != std::string::npos);
    }
    SUBCASE("wrong expectation prints the discrepancy polynomial") {
        auto r = run_text("space X = proj 2\nexpect X : (1+h)^2 == 1 + h\n");
        CHECK(r.exit_code == 1);
        CHECK(r.report.find("discrepancy = h + h^2") != std::string::npos);
    }
}

TEST_CASE("rendered classes re-parse to equal elements") {
    auto first = run_text("space X = proj 3\neval X : (1 + 2*h - 3/2*h^2)^3\n");
    REQUIRE(first.exit_code == 0);
    // the eval line reads "X : <polynomial>"
    auto pos = first.report.find(" : ");
    REQUIRE(pos != std::string::npos);
    std::string rendered = first.report.substr(pos + 3);
    rendered.pop_back();  // newline
    auto second = run_text("space X = proj 3\nexpect X : " + rendered +
                           " == (1 + 2*h - 3/2*h^2)^3\n");
    CHECK(second.exit_code == 0);
}

TEST_CASE("deterministic reports") {
    std::string text = slurp(SCENARIO_DIR "/basic.gsc");
    auto a = run_text(text);
    auto b = run_text(text);
    CHECK(a.exit_code == 0);
    CHECK(a.report == b.report);
    SUBCASE("golden file") {
        std::string golden = slurp(SCENARIO_DIR "/basic.golden");
        CHECK(a.report == golden);
    }
}

TEST_CASE("blowup declarations in scenarios") {
    auto r = run_text("space X = proj 2\n"
                      "immersion pt = sub_linear X 0\n"
                      "space B = blowup X pt\n"
                      "expect B : push(B_E, 1) * push(B_E, 1) == -1 * pull(B_p, h^2)\n");
    CHECK(r.exit_code == 0);
}

TEST_CASE("product and bundle declarations") {
    auto r = run_text("space X = proj 1\n"
                      "space W = product_p1 X\n"
                      "expect W : t * t == 0\n"
                      "expect W : integral(h * t) == 1\n"
                      "bundle E on X = rank 2 chern [2*h]\n"
                      "space P = projbundle X E\n"
                      "expect X : push(P_pi, z) == 1\n");
    CHECK(r.exit_code == 0);
}

TEST_CASE("expand subcommands") {
    auto td = expand_todd(2, 2, false);
    CHECK(td.find("td_1 = 1/2*c1") != std::string::npos);
    CHECK(td.find("td_2 = 1/12*c1^2 + 1/12*c2") != std::string::npos);
    auto nw = expand_newton(2, 3, false);
    CHECK(nw.find("ch_1 = c1") != std::string::npos);
    CHECK(nw.find("ch_2 = 1/2*c1^2 - c2") != std::string::npos);
}

TEST_CASE("smith runner") {
    std::string text = slurp(SCENARIO_DIR "/pinch.mat");
    auto r = run_smith(text, -1, false, false);
    CHECK(r.exit_code == 0);
    CHECK(r.report.find("d_1 = x") != std::string::npos);
    CHECK(r.report.find("d_2 = x^2") != std::string::npos);
    CHECK(r.report.find("phi_2 = x") != std::string::npos);
    CHECK(r.report.find("certificate: pass") != std::string::npos);

    SUBCASE("precision override survives") {
        auto r2 = run_smith(text, 8, false, false);
        CHECK(r2.exit_code == 0);
    }
    SUBCASE("non-principal input reports the level") {
        auto bad = run_smith("2 16 x y\nx\ny\ny\nx\n", -1, false, false);
        CHECK(bad.exit_code == 1);
        CHECK(bad.report.find("level 1") != std::string::npos);
    }
}
