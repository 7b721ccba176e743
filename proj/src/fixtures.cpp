#include "tileregu/fixtures.hpp"

#include <map>

#include "tileregu/error.hpp"

namespace tileregu {

namespace {

struct SysDef {
    std::vector<IVec> matrix;
    std::vector<IVec> digits;
};

const std::map<std::string, SysDef>& systems() {
    static const std::map<std::string, SysDef> defs{
        {"ex20", {{{3}}, {{0}, {1}, {5}}}},
        {"square", {{{0, -2}, {1, 0}}, {{0, 0}, {1, 0}}}},
        {"dragon", {{{1, 1}, {-1, 1}}, {{0, 0}, {1, 0}}}},
        {"bear", {{{1, -2}, {1, 0}}, {{0, 0}, {1, 0}}}},
        {"quasisierpinski", {{{2, 0}, {0, 2}}, {{0, 0}, {1, 0}, {0, 1}, {-1, -1}}}},
        {"square4", {{{2, 0}, {0, 2}}, {{0, 0}, {1, 0}, {0, 1}, {1, 1}}}},
        {"segment", {{{2}}, {{0}, {1}}}},
        {"triple", {{{2}}, {{0}, {3}}}},
    };
    return defs;
}

} // namespace

FixtureKind fixture_kind(const std::string& name) {
    if (systems().count(name)) return FixtureKind::System;
    if (name == "th10" || name == "quasicantor") return FixtureKind::Intervals;
    if (name == "cerny4" || name == "permutation") return FixtureKind::Automaton;
    return FixtureKind::Unknown;
}

std::vector<std::string> fixture_names() {
    std::vector<std::string> out;
    for (auto& [k, v] : systems()) out.push_back(k);
    out.insert(out.end(), {"th10", "quasicantor", "cerny4", "permutation"});
    return out;
}

std::vector<std::string> tile_fixture_names() { return {"ex20", "square", "dragon", "bear", "quasisierpinski"}; }

DilationSystem system_fixture(const std::string& name) {
    auto it = systems().find(name);
    if (it == systems().end()) fail(ErrorKind::InvalidInput, "unknown system fixture '" + name + "'");
    return make_system(IntMatrix::from_rows(it->second.matrix), it->second.digits, std::nullopt, name);
}

IntervalSet interval_fixture(const std::string& name) {
    if (name == "th10") return th10_set(kTh10Terms);
    if (name == "quasicantor") return quasi_cantor_set(kQuasiCantorLevels);
    fail(ErrorKind::InvalidInput, "unknown interval fixture '" + name + "'");
}

Automaton automaton_fixture(const std::string& name) {
    if (name == "cerny4") return cerny_automaton(4);
    if (name == "permutation") return make_automaton(3, {{1, 2, 0}, {0, 2, 1}});
    fail(ErrorKind::InvalidInput, "unknown automaton fixture '" + name + "'");
}

} // namespace tileregu
