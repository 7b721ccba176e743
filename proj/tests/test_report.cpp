#include <doctest.h>

#include <cmath>
#include <fstream>
#include <iterator>

#include "helpers.hpp"
#include "tileregu/fixtures.hpp"
#include "tileregu/report.hpp"

using namespace tileregu;
using report::json;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

std::string message_of(const json& j) {
    try {
        report::parse_system(j);
    } catch (const Error& e) {
        return e.what();
    }
    return {};
}

} // namespace

TEST_SUITE("report") {

TEST_CASE("numbers keep twelve significant digits") {
    CHECK(report::num(0.1 + 0.2).dump() == "0.3");
    CHECK(report::num(1.0 / 3).dump() == "0.333333333333");
    CHECK(report::num(std::sqrt(2.0)).dump() == "1.41421356237");
    CHECK(report::num(NAN).is_null());
}

TEST_CASE("system parsing") {
    DilationSystem s = report::parse_system(json::parse(R"({"name":"ex","matrix":[[3]],"digits":[0,1,5]})"));
    CHECK(s.m() == 3);
    CHECK(s.name == "ex");
    CHECK(s.Delta.digits == std::vector<IVec>{{0}, {1}, {2}});
    DilationSystem d = report::parse_system(
        json::parse(R"({"matrix":[[2,0],[0,2]],"digits":[[0,0],[1,0],[0,1],[1,1]],"basic_digits":[[0,0],[1,0],[0,1],[-1,-1]]})"));
    CHECK(d.Delta.digits.back() == IVec{-1, -1});
}

TEST_CASE("system parse errors carry field paths") {
    CHECK(message_of(json::parse(R"({"digits":[0]})")).rfind("matrix", 0) == 0);
    CHECK(message_of(json::parse(R"({"matrix":[[1,1],[1]],"digits":[]})")).rfind("matrix[1]", 0) == 0);
    CHECK(message_of(json::parse(R"({"matrix":[[2,0],[0,2]],"digits":[[0,0],[1,0],[0,1],[1]]})")).rfind("digits[3]", 0) == 0);
    CHECK(message_of(json::parse(R"({"matrix":[[3]],"digits":[0,1,"x"]})")).rfind("digits[2]", 0) == 0);
    CHECK(message_of(json::parse(R"({"matrix":[[3]],"digits":[0,1,5],"basic_digits":[0,3,1]})")).rfind("basic_digits", 0) == 0);
    const std::string eq = message_of(json::parse(R"({"matrix":[[3]],"digits":[0,1,4]})"));
    CHECK(eq.rfind("digits", 0) == 0);
    CHECK(eq.find("congruent") != std::string::npos);
    CHECK(kind_of([] { report::parse_system(json::parse(R"({"matrix":[[3]],"digits":[0,1,4]})")); }) ==
          ErrorKind::EquivalentPair);
    CHECK(kind_of([] { report::parse_system(json::parse(R"({"matrix":[[1,0],[0,1]],"digits":[[0,0]]})")); }) ==
          ErrorKind::NotExpanding);
}

TEST_CASE("automaton parsing") {
    Automaton a = report::parse_automaton(json::parse(R"({"states":3,"actions":[[1,2,0],[0,0,2]]})"));
    CHECK(a.n_states == 3);
    CHECK(a.actions[1] == std::vector<std::uint32_t>{0, 0, 2});
    Automaton b = report::parse_automaton(json::parse(R"({"matrices":[[[0,0,1],[1,0,0],[0,1,0]]]})"));
    CHECK(b.actions[0] == std::vector<std::uint32_t>{1, 2, 0});
    CHECK(kind_of([] { report::parse_automaton(json::parse(R"({"matrices":[[[1,1],[1,0]]]})")); }) ==
          ErrorKind::InvalidInput);
    CHECK(kind_of([] { report::parse_automaton(json::parse(R"({"states":2,"actions":[[0,2]]})")); }) ==
          ErrorKind::InvalidInput);
}

TEST_CASE("exit codes") {
    CHECK(report::exit_code(ErrorKind::EquivalentPair) == 2);
    CHECK(report::exit_code(ErrorKind::InvalidInput) == 2);
    CHECK(report::exit_code(ErrorKind::Unsupported) == 3);
    CHECK(report::exit_code(ErrorKind::CapExceeded) == 4);
    CHECK(report::exit_code(ErrorKind::BudgetExceeded) == 4);
}

TEST_CASE("analyze output matches the golden files") {
    for (auto name : {"ex20", "square", "dragon", "bear", "quasisierpinski"}) {
        const std::string golden = slurp(std::string(TILEREGU_GOLDEN_DIR) + "/analyze_" + name + ".json");
        REQUIRE_FALSE(golden.empty());
        CHECK_MESSAGE(report::analyze(system_fixture(name)).dump(2) + "\n" == golden, name);
    }
}

TEST_CASE("analyze is byte-identical across runs") {
    DilationSystem bear = system_fixture("bear");
    CHECK(report::analyze(bear).dump() == report::analyze(bear).dump());
}

TEST_CASE("analyze of the M = 3 tile") {
    json doc = report::analyze(system_fixture("ex20"));
    CHECK(doc["spectral"]["s"].get<double>() == doctest::Approx(0.197739187782).epsilon(1e-11));
    CHECK(doc["spectral"]["bound_kind"] == "Exact");
    CHECK(doc["tile_check"]["verdict"] == "Tile");
    CHECK_FALSE(doc.contains("warnings"));
    CHECK(report::human(doc).find("lambda_max") != std::string::npos);
}

TEST_CASE("oracle reports") {
    json doc = report::oracle(system_fixture("ex20"));
    CHECK(std::abs(doc["oracle"]["growth_slope"].get<double>() - 0.198) <= 0.05);
    json th10 = report::oracle_intervals("th10");
    CHECK(th10["segments"] == 200);
    CHECK(th10["doubling"] == true);
    json qc = report::oracle_intervals("quasicantor");
    CHECK(qc["growth_slope"].get<double>() >= 0.9);
}

TEST_CASE("automaton reports") {
    json c = report::automaton(automaton_fixture("cerny4"));
    CHECK(c["reset_length"] == 9);
    CHECK(c["p"].get<double>() < 1.0);
    json p = report::automaton(automaton_fixture("permutation"));
    CHECK(p["p"].get<double>() == 1.0);
    CHECK(p["shortest_reset"].is_null());
    CHECK(p["has_reset"] == false);

    report::AutomatonOptions opt;
    opt.mc_trials = 20000;
    opt.mc_length = 9;
    json mc = report::automaton(automaton_fixture("cerny4"), opt);
    CHECK(std::abs(mc["monte_carlo"]["estimate"].get<double>() - mc["monte_carlo"]["exact"].get<double>()) <=
          3 * mc["monte_carlo"]["sigma"].get<double>());
}

TEST_CASE("automaton from the M = 3 tile") {
    json doc = report::automaton_from_tile(system_fixture("ex20"));
    CHECK(doc["p"].get<double>() == doctest::Approx(0.804737854124).epsilon(1e-11));
    CHECK(doc["tile_bridge"]["residual"].get<double>() < 2e-2);
}

TEST_CASE("verify passes on the tiles") {
    for (auto name : {"ex20", "dragon"}) {
        json doc = report::verify(system_fixture(name));
        CHECK_MESSAGE(doc["pass"] == true, name << "\n" << report::human(doc));
    }
}

TEST_CASE("verify on a non-tile skips tile-only checks") {
    json doc = report::verify(system_fixture("triple"));
    CHECK(doc["spectral"]["bound_kind"] == "LowerBoundOnAlpha");
    int skipped = 0;
    for (auto& c : doc["checks"]) skipped += c.contains("skipped");
    CHECK(skipped == 4);
    CHECK(doc["pass"] == true);
}

TEST_CASE("anisotropic input is unsupported") {
    DilationSystem diag = make_system(IntMatrix::from_rows({{2, 0}, {0, 3}}),
                                      {{0, 0}, {1, 0}, {0, 1}, {1, 1}, {0, 2}, {1, 2}});
    CHECK(kind_of([&] { report::analyze(diag); }) == ErrorKind::Unsupported);
    CHECK(kind_of([&] { report::verify(diag); }) == ErrorKind::Unsupported);
}

}
