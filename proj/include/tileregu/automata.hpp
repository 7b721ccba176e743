#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "tileregu/attractor.hpp"
#include "tileregu/spectral.hpp"

namespace tileregu {

using Rational = boost::multiprecision::cpp_rational;
using Word = std::vector<std::uint32_t>;

// actions[a][s] = f_a(s); equivalently B_a has (B_a)_{ij} = 1 iff f_a(j) = i.
struct Automaton {
    std::size_t n_states = 0;
    std::vector<std::vector<std::uint32_t>> actions;

    std::size_t n_actions() const { return actions.size(); }
    std::vector<SimpleMatrix> matrices() const;
    bool permutation_only() const;
    // Runs the word left to right (word[0] acts first) on a single state.
    std::uint32_t run(std::uint32_t state, const Word& word) const;
};

Automaton make_automaton(std::size_t n_states, std::vector<std::vector<std::uint32_t>> actions);
Automaton from_transition_family(const TransitionFamily& fam);

// Classic Cerny automaton C_n: a is the cyclic shift, b sends 0 to 1.
Automaton cerny_automaton(std::size_t n);

bool has_reset_word(const Automaton& a);

std::optional<Word> shortest_reset_word(const Automaton& a, std::size_t cap);

// P_k for k = 1..k_max: probability that a uniform length-k word is not a reset word.
std::vector<Rational> pk_exact(const Automaton& a, int k_max);

struct SyncParameter {
    double p = 0;
    double lambda_max = 0;
    bool has_reset = false;
    bool consistent = true; // has_reset == (p < 1 - 1e-9)
};

SyncParameter sync_parameter(const Automaton& a);

struct MonteCarloResult {
    double estimate = 0;
    std::uint64_t not_reset = 0;
    std::uint64_t trials = 0;
};

// Trials are split over a fixed number of shards. Shard i draws from
// mt19937_64 seeded with the i-th SplitMix64 output of `seed`; each step
// picks action rng() % m. The result does not depend on the thread count.
MonteCarloResult monte_carlo_pk(const Automaton& a, int k, std::uint64_t trials, std::uint64_t seed);

struct TileSyncCheck {
    double p_spectral = 0;   // rho of the lifted operator of the tile automaton
    double p_dp = 0;         // (P_k / P_{k-10})^(1/10) from exact counts
    double p_dp_root = 0;    // P_k^(1/k)
    double r_pow_minus_s = 0;
    double residual = 0;     // |p_dp - r^-s|
    double s = 0;
    int k = 0;
};

TileSyncCheck tile_sync_check(const DilationSystem& sys, int k = 40, const RegularityOptions& opt = {});

// Windowed extrapolation (P_k / P_{k-w})^(1/w) of an exact P table.
double pk_window_rate(const std::vector<Rational>& pk, int k, int window = 10);

} // namespace tileregu
