#pragma once

#include <string>
#include <vector>

#include "tileregu/attractor.hpp"
#include "tileregu/automata.hpp"
#include "tileregu/oracle.hpp"

namespace tileregu {

enum class FixtureKind { System, Intervals, Automaton, Unknown };

FixtureKind fixture_kind(const std::string& name);
std::vector<std::string> fixture_names();

// The four plane tiles plus the M = 3 line tile.
std::vector<std::string> tile_fixture_names();

DilationSystem system_fixture(const std::string& name);
IntervalSet interval_fixture(const std::string& name);
Automaton automaton_fixture(const std::string& name);

constexpr int kTh10Terms = 200;
constexpr int kQuasiCantorLevels = 5;

} // namespace tileregu
