#include "tileregu/automata.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <random>
#include <string>

#include "image_dp.hpp"
#include "tileregu/error.hpp"
#include "tileregu/parallel.hpp"
#include "tileregu/spectral.hpp"

namespace tileregu {

std::vector<SimpleMatrix> Automaton::matrices() const {
    std::vector<SimpleMatrix> out;
    for (auto& f : actions) out.push_back(SimpleMatrix{n_states, f});
    return out;
}

bool Automaton::permutation_only() const {
    for (auto& B : matrices())
        if (!B.is_permutation()) return false;
    return true;
}

std::uint32_t Automaton::run(std::uint32_t state, const Word& word) const {
    for (auto a : word) state = actions.at(a).at(state);
    return state;
}

Automaton make_automaton(std::size_t n_states, std::vector<std::vector<std::uint32_t>> actions) {
    if (n_states < 1) fail(ErrorKind::InvalidInput, "automaton needs at least one state");
    if (actions.empty()) fail(ErrorKind::InvalidInput, "automaton needs at least one action");
    for (std::size_t a = 0; a < actions.size(); ++a) {
        if (actions[a].size() != n_states)
            fail(ErrorKind::InvalidInput, "actions[" + std::to_string(a) + "] must list " + std::to_string(n_states) + " targets");
        for (std::size_t s = 0; s < n_states; ++s)
            if (actions[a][s] >= n_states)
                fail(ErrorKind::InvalidInput,
                     "actions[" + std::to_string(a) + "][" + std::to_string(s) + "] is not a state");
    }
    return Automaton{n_states, std::move(actions)};
}

Automaton from_transition_family(const TransitionFamily& fam) {
    std::vector<std::vector<std::uint32_t>> acts;
    for (auto& T : fam.mats) acts.push_back(T.col_to_row);
    return make_automaton(fam.N(), std::move(acts));
}

Automaton cerny_automaton(std::size_t n) {
    std::vector<std::uint32_t> a(n), b(n);
    for (std::size_t s = 0; s < n; ++s) {
        a[s] = static_cast<std::uint32_t>((s + 1) % n);
        b[s] = static_cast<std::uint32_t>(s);
    }
    if (n > 1) b[0] = 1;
    return make_automaton(n, {a, b});
}

bool has_reset_word(const Automaton& a) {
    const std::size_t N = a.n_states;
    if (N == 1) return true;
    auto pid = [N](std::size_t i, std::size_t j) { return i < j ? i * N + j : j * N + i; };
    std::vector<std::vector<std::size_t>> rev(N * N);
    std::vector<char> good(N * N, 0);
    std::deque<std::size_t> queue;
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = i + 1; j < N; ++j)
            for (auto& f : a.actions) {
                if (f[i] == f[j]) {
                    if (!good[pid(i, j)]) {
                        good[pid(i, j)] = 1;
                        queue.push_back(pid(i, j));
                    }
                } else {
                    rev[pid(f[i], f[j])].push_back(pid(i, j));
                }
            }
    while (!queue.empty()) {
        const std::size_t q = queue.front();
        queue.pop_front();
        for (auto p : rev[q])
            if (!good[p]) {
                good[p] = 1;
                queue.push_back(p);
            }
    }
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = i + 1; j < N; ++j)
            if (!good[pid(i, j)]) return false;
    return true;
}

std::optional<Word> shortest_reset_word(const Automaton& a, std::size_t cap) {
    const std::size_t N = a.n_states;
    if (N > 24) fail(ErrorKind::TooLarge, "shortest reset word search supports at most 24 states");
    if (a.n_actions() > 65535) fail(ErrorKind::TooLarge, "too many actions");
    if (N == 1) return Word{};
    detail::ImageMapper mapper(a.actions, N);
    constexpr std::uint16_t kUnseen = 0xFFFF;
    std::vector<std::uint16_t> via(std::size_t{1} << N, kUnseen);
    std::vector<std::uint32_t> parent(std::size_t{1} << N, 0);
    const auto full = static_cast<std::uint32_t>(mapper.full());
    via[full] = 0;
    std::vector<std::uint32_t> frontier{full}, next;
    for (std::size_t depth = 1; !frontier.empty(); ++depth) {
        if (depth > cap) fail(ErrorKind::CapExceeded, "no reset word of length <= " + std::to_string(cap));
        next.clear();
        for (auto set : frontier)
            for (std::size_t act = 0; act < a.n_actions(); ++act) {
                const auto img = static_cast<std::uint32_t>(mapper.image(act, set));
                if (via[img] != kUnseen) continue;
                via[img] = static_cast<std::uint16_t>(act);
                parent[img] = set;
                if (detail::is_singleton(img)) {
                    Word w;
                    for (std::uint32_t cur = img; cur != full; cur = parent[cur]) w.push_back(via[cur]);
                    std::reverse(w.begin(), w.end());
                    return w;
                }
                next.push_back(img);
            }
        frontier.swap(next);
    }
    return std::nullopt;
}

std::vector<Rational> pk_exact(const Automaton& a, int k_max) {
    if (k_max < 1 || k_max > 200) fail(ErrorKind::InvalidInput, "k_max must be in 1..200");
    detail::ImageMapper mapper(a.actions, a.n_states);
    auto counts = detail::nonsingleton_counts_exact(mapper, k_max);
    std::vector<Rational> out;
    boost::multiprecision::cpp_int denom = 1;
    for (int k = 1; k <= k_max; ++k) {
        denom *= static_cast<unsigned>(a.n_actions());
        out.emplace_back(counts[k - 1], denom);
    }
    return out;
}

SyncParameter sync_parameter(const Automaton& a) {
    SyncParameter sp;
    sp.has_reset = has_reset_word(a);
    if (a.n_states == 1) {
        sp.p = sp.lambda_max = 0;
    } else if (a.permutation_only()) {
        sp.p = sp.lambda_max = 1;
    } else {
        auto rho = rho2_of_family(restrict_to_W(a.matrices(), a.n_states));
        sp.p = sp.lambda_max = rho.lambda_max;
    }
    sp.consistent = sp.has_reset == (sp.p < 1 - 1e-9);
    return sp;
}

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

constexpr std::size_t kShards = 64;

} // namespace

MonteCarloResult monte_carlo_pk(const Automaton& a, int k, std::uint64_t trials, std::uint64_t seed) {
    if (trials < 1) fail(ErrorKind::InvalidInput, "trials must be >= 1");
    detail::ImageMapper mapper(a.actions, a.n_states);
    std::vector<std::uint64_t> seeds(kShards), hits(kShards, 0);
    std::uint64_t st = seed;
    for (auto& s : seeds) s = splitmix64(st);
    const std::uint64_t m = a.n_actions();
    parallel_for(kShards, [&](std::size_t b, std::size_t e) {
        for (std::size_t sh = b; sh < e; ++sh) {
            std::mt19937_64 rng(seeds[sh]);
            const std::uint64_t n = trials / kShards + (sh < trials % kShards ? 1 : 0);
            std::uint64_t cnt = 0;
            for (std::uint64_t t = 0; t < n; ++t) {
                std::uint64_t set = mapper.full();
                for (int step = 0; step < k; ++step) set = mapper.image(rng() % m, set);
                if (!detail::is_singleton(set)) ++cnt;
            }
            hits[sh] = cnt;
        }
    });
    MonteCarloResult res;
    res.trials = trials;
    for (auto h : hits) res.not_reset += h;
    res.estimate = static_cast<double>(res.not_reset) / static_cast<double>(trials);
    return res;
}

double pk_window_rate(const std::vector<Rational>& pk, int k, int window) {
    if (k > static_cast<int>(pk.size()) || k - window < 1) fail(ErrorKind::InvalidInput, "window outside P_k table");
    const Rational& lo = pk[k - window - 1];
    if (lo == 0) return 0.0;
    const double ratio = Rational(pk[k - 1] / lo).convert_to<double>();
    return std::pow(ratio, 1.0 / window);
}

TileSyncCheck tile_sync_check(const DilationSystem& sys, int k, const RegularityOptions& opt) {
    auto rep = regularity_report(sys, opt);
    if (!rep.tile_verified) fail(ErrorKind::InvalidInput, "tile_sync_check needs a tile-verified system");
    auto fam = transition_matrices(sys, rep.S);
    Automaton a = from_transition_family(fam);
    TileSyncCheck out;
    out.k = k;
    out.s = rep.s;
    out.p_spectral = sync_parameter(a).p;
    auto pk = pk_exact(a, k);
    out.p_dp = pk_window_rate(pk, k);
    out.p_dp_root = std::pow(pk[k - 1].convert_to<double>(), 1.0 / k);
    out.r_pow_minus_s = std::pow(rep.r, -rep.s);
    out.residual = std::abs(out.p_dp - out.r_pow_minus_s);
    return out;
}

} // namespace tileregu
