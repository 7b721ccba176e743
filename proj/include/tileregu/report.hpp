#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "tileregu/attractor.hpp"
#include "tileregu/automata.hpp"
#include "tileregu/error.hpp"
#include "tileregu/oracle.hpp"

namespace tileregu::report {

using json = nlohmann::json;

// Floats are serialised with 12 significant digits.
json num(double v);

json load_json_file(const std::string& path);

// Errors carry the offending field path, e.g. "digits[2]: expected 2 integers".
DilationSystem parse_system(const json& j, const std::optional<std::vector<IVec>>& basic_override = std::nullopt);
std::vector<IVec> parse_vectors(const json& j, const std::string& path);
Automaton parse_automaton(const json& j);

json echo_system(const DilationSystem& sys);
json tile_json(const TileVerdict& v);

struct AnalyzeOptions {
    std::optional<int> depth; // tile-check depth
};
json analyze(const DilationSystem& sys, const AnalyzeOptions& opt = {});

struct OracleOptions {
    std::optional<int> depth;
    std::optional<double> cell, eps_min, eps_max;
};
json oracle(const DilationSystem& sys, const OracleOptions& opt = {});
json oracle_intervals(const std::string& fixture, const OracleOptions& opt = {});

// Default slope windows for the interval fixtures.
std::pair<double, double> interval_window(const std::string& fixture);

struct AutomatonOptions {
    int kmax = 40;
    std::uint64_t mc_trials = 0;
    std::uint64_t seed = 1;
    std::optional<int> mc_length; // defaults to kmax
};
json automaton(const Automaton& a, const AutomatonOptions& opt = {});
json automaton_from_tile(const DilationSystem& sys, const AutomatonOptions& opt = {});

json verify(const DilationSystem& sys);

std::string human(const json& doc);

int exit_code(ErrorKind k);

} // namespace tileregu::report
