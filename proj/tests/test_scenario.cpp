#include <string>

#include "catch_amalgamated.hpp"
#include "support.hpp"

using namespace lexseq;

namespace {

std::string replaced(std::string text, const std::string& from, const std::string& to) {
    const auto pos = text.find(from);
    REQUIRE(pos != std::string::npos);
    text.replace(pos, from.size(), to);
    return text;
}

void check_same(const Scenario& a, const Scenario& b) {
    CHECK(a.name == b.name);
    CHECK(a.base_dim == b.base_dim);
    CHECK(a.lo == b.lo);
    CHECK(a.hi == b.hi);
    CHECK(a.split == b.split);
    CHECK(a.symmetric == b.symmetric);
    CHECK(a.samples == b.samples);
    CHECK(a.criticals == b.criticals);
    CHECK(a.gluing == b.gluing);
    CHECK(a.twists == b.twists);
    REQUIRE(a.lifts.size() == b.lifts.size());
    for (const auto& [stage, lifts] : a.lifts) {
        REQUIRE(b.lifts.count(stage));
        const auto& other = b.lifts.at(stage);
        REQUIRE(lifts.size() == other.size());
        for (std::size_t k = 0; k < lifts.size(); ++k) {
            CHECK(lifts[k].label == other[k].label);
            CHECK(lifts[k].degree == other[k].degree);
            CHECK(lifts[k].boundary == other[k].boundary);
        }
    }
}

}  // namespace

TEST_CASE("scenario files match the built-in scenarios") {
    check_same(load_scenario(std::string(LEXSEQ_SCENARIO_DIR) + "/mcduff.scn"), mcduff());
    check_same(load_scenario(std::string(LEXSEQ_SCENARIO_DIR) + "/trivial.scn"), trivial_scenario());
}

TEST_CASE("built-in McDuff data") {
    const Scenario sc = mcduff();
    CHECK(sc.base_dim == 4);
    CHECK(sc.samples.size() == 5);
    CHECK(sc.euler_at(0).is_zero());
    CHECK(sc.euler_at(Rational(3, 2)) == -sigma(4, {4, 2}));
    CHECK(sc.euler_at(Rational(7, 2)) == -sigma(4, {3, 1}) - sigma(4, {4, 2}));
    CHECK(sc.euler_at(Rational(11, 2)) == -sigma(4, {3, 1}));
    CHECK(sc.euler_at(7).is_zero());
    REQUIRE(sc.criticals.size() == 4);
    CHECK(sc.criticals[0] == CriticalLevel{1, {1, 3}});
    CHECK(sc.criticals[1] == CriticalLevel{2, {2, 4}});
    CHECK(sc.criticals[2] == CriticalLevel{5, {1, 3}});
    CHECK(sc.criticals[3] == CriticalLevel{6, {2, 4}});
    CHECK(sc.gluing == std::vector<int>{3, 4, 1, 2});
    CHECK(sc.lifts.at("W").size() == 4);
    CHECK(sc.critical_in(Rational(3, 2), Rational(7, 2))->lambda == 2);
    CHECK_FALSE(sc.critical_in(Rational(5, 2), 3));
}

TEST_CASE("exact numbers only") {
    const std::string base = mcduff_text();
    CHECK_THROWS_AS(parse_scenario(replaced(base, "sample 1.5 =", "sample 15e-1 =")), parse_error);
    CHECK_THROWS_AS(parse_scenario(replaced(base, "range = 0 7", "range = 0 inf")), parse_error);
    CHECK_THROWS_AS(parse_scenario(replaced(base, "split = 3.5", "split = nan")), parse_error);
    CHECK_THROWS_AS(parse_scenario(replaced(base, "sample 1.5 = -s42", "sample 1.5 = -1.0e0 s42")), parse_error);
    // a fraction is fine and equals the decimal
    CHECK(parse_scenario(replaced(base, "split = 3.5", "split = 7/2")).split == Rational(7, 2));
}

TEST_CASE("malformed scenario text") {
    const std::string base = mcduff_text();
    CHECK_THROWS_AS(parse_scenario(base + "colour = red\n"), parse_error);
    CHECK_THROWS_AS(parse_scenario(base + "no equals sign\n"), parse_error);
    CHECK_THROWS_AS(parse_scenario(replaced(base, "gluing = 3 4 1 2\n", "")), parse_error);
    CHECK_THROWS_AS(parse_scenario(replaced(base, "(G61, 2, LF^0)", "(G61 2 LF^0)")), parse_error);
    CHECK_THROWS_AS(parse_scenario(replaced(base, "(L24^0, 2,", "(L42^0, 2,")), parse_error);
    CHECK_THROWS_AS(parse_scenario(base + "sample 0 = 0\n"), parse_error);
    CHECK_THROWS_AS(load_scenario("/nonexistent/file.scn"), parse_error);
    // comments and blank lines are ignored
    CHECK_NOTHROW(parse_scenario("# header\n\n" + base + "   # trailing\n"));
}

TEST_CASE("inconsistent scenario data") {
    const std::string base = mcduff_text();
    CHECK_THROWS_AS(parse_scenario(replaced(base, "critical 2 = L24", "critical 2 = L13")), inconsistent_scenario);
    CHECK_THROWS_AS(parse_scenario(replaced(base, "gluing = 3 4 1 2", "gluing = 2 3 4 1")), inconsistent_scenario);
    CHECK_THROWS_AS(parse_scenario(replaced(base, "gluing = 3 4 1 2", "gluing = 1 1 2 3")), inconsistent_scenario);
    CHECK_THROWS_AS(parse_scenario(replaced(base, "sample 1.5 = -s42", "sample 1.5 = -1/2 s42")), inconsistent_scenario);
    CHECK_THROWS_AS(parse_scenario(replaced(base, "critical 1 = L13\n", "")), inconsistent_scenario);
    CHECK_THROWS_AS(parse_scenario(replaced(base, "sample 5.5 = -s31", "sample 5.5 = -s42")), inconsistent_scenario);
    CHECK_THROWS_AS(parse_scenario(replaced(base, "critical 6 = L24", "critical 6.5 = L24")), inconsistent_scenario);
}
