#include "tileregu/report.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "tileregu/fixtures.hpp"
#include "tileregu/spectral.hpp"

namespace tileregu::report {

json num(double v) {
    if (!std::isfinite(v)) return nullptr;
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return std::strtod(buf, nullptr);
}

json load_json_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) fail(ErrorKind::IoError, "cannot open " + path);
    try {
        return json::parse(f);
    } catch (const json::parse_error& e) {
        fail(ErrorKind::InvalidInput, path + ": " + e.what());
    }
}

namespace {

std::int64_t get_int(const json& j, const std::string& path) {
    if (!j.is_number_integer()) fail(ErrorKind::InvalidInput, path + ": expected an integer");
    if (j.is_number_unsigned() && j.get<std::uint64_t>() > static_cast<std::uint64_t>(INT64_MAX))
        fail(ErrorKind::Overflow, path + ": integer out of range");
    return j.get<std::int64_t>();
}

json vec_json(const IVec& v) {
    json a = json::array();
    for (auto x : v) a.push_back(x);
    return a;
}

json vecs_json(const std::vector<IVec>& vs) {
    json a = json::array();
    for (auto& v : vs) a.push_back(vec_json(v));
    return a;
}

json pairs_json(const Pairs& p) {
    json a = json::array();
    for (auto& [x, y] : p) a.push_back(json::array({num(x), num(y)}));
    return a;
}

[[noreturn]] void rethrow_with(const Error& e, const std::string& prefix) {
    if (auto* ep = dynamic_cast<const EquivalentPairError*>(&e))
        throw EquivalentPairError(ep->first(), ep->second(), prefix + ": " + e.what());
    throw Error(e.kind(), prefix + ": " + e.what());
}

std::string rational_string(const Rational& r) {
    std::ostringstream os;
    os << numerator(r) << '/' << denominator(r);
    return os.str();
}

json check(const std::string& name, bool pass, double value, double tol, const std::string& detail = {}) {
    json c{{"name", name}, {"pass", pass}, {"value", num(value)}, {"tolerance", num(tol)}};
    if (!detail.empty()) c["detail"] = detail;
    return c;
}

json skipped(const std::string& name, const std::string& why) {
    return json{{"name", name}, {"skipped", true}, {"detail", why}};
}

} // namespace

std::vector<IVec> parse_vectors(const json& j, const std::string& path) {
    if (!j.is_array()) fail(ErrorKind::InvalidInput, path + ": expected an array");
    std::vector<IVec> out;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const std::string p = path + "[" + std::to_string(i) + "]";
        if (j[i].is_number()) {
            out.push_back({get_int(j[i], p)});
        } else if (j[i].is_array()) {
            IVec v;
            for (std::size_t k = 0; k < j[i].size(); ++k) v.push_back(get_int(j[i][k], p + "[" + std::to_string(k) + "]"));
            out.push_back(std::move(v));
        } else {
            fail(ErrorKind::InvalidInput, p + ": expected an integer vector");
        }
    }
    return out;
}

DilationSystem parse_system(const json& j, const std::optional<std::vector<IVec>>& basic_override) {
    if (!j.is_object()) fail(ErrorKind::InvalidInput, "<root>: expected a JSON object");
    if (!j.contains("matrix")) fail(ErrorKind::InvalidInput, "matrix: missing");
    if (!j.contains("digits")) fail(ErrorKind::InvalidInput, "digits: missing");
    const json& jm = j["matrix"];
    if (!jm.is_array() || jm.empty()) fail(ErrorKind::InvalidInput, "matrix: expected a non-empty array of rows");
    std::vector<IVec> rows;
    for (std::size_t i = 0; i < jm.size(); ++i) {
        const std::string p = "matrix[" + std::to_string(i) + "]";
        if (!jm[i].is_array() || jm[i].size() != jm.size())
            fail(ErrorKind::InvalidInput, p + ": expected a row of " + std::to_string(jm.size()) + " integers");
        IVec row;
        for (std::size_t k = 0; k < jm[i].size(); ++k) row.push_back(get_int(jm[i][k], p + "[" + std::to_string(k) + "]"));
        rows.push_back(std::move(row));
    }
    DilationSystem sys;
    try {
        sys.M = IntMatrix::from_rows(rows);
        sys.profile = analyze_dilation(sys.M);
    } catch (const Error& e) {
        rethrow_with(e, "matrix");
    }
    auto digits = parse_vectors(j["digits"], "digits");
    for (std::size_t i = 0; i < digits.size(); ++i)
        if (static_cast<int>(digits[i].size()) != sys.M.dim())
            fail(ErrorKind::InvalidInput, "digits[" + std::to_string(i) + "]: expected " + std::to_string(sys.M.dim()) + " integers");
    std::optional<std::vector<IVec>> basic = basic_override;
    if (!basic && j.contains("basic_digits") && !j["basic_digits"].is_null())
        basic = parse_vectors(j["basic_digits"], "basic_digits");
    std::string name;
    if (j.contains("name")) {
        if (!j["name"].is_string()) fail(ErrorKind::InvalidInput, "name: expected a string");
        name = j["name"].get<std::string>();
    }
    try {
        sys.D = validate_digits(sys.M, digits);
    } catch (const Error& e) {
        rethrow_with(e, "digits");
    }
    try {
        DilationSystem full = make_system(sys.M, digits, basic, name);
        return full;
    } catch (const Error& e) {
        rethrow_with(e, "basic_digits");
    }
}

Automaton parse_automaton(const json& j) {
    if (!j.is_object()) fail(ErrorKind::InvalidInput, "<root>: expected a JSON object");
    std::vector<std::vector<std::uint32_t>> acts;
    std::size_t N = 0;
    if (j.contains("actions")) {
        if (!j.contains("states")) fail(ErrorKind::InvalidInput, "states: missing");
        const auto n = get_int(j["states"], "states");
        if (n < 1 || n > 64) fail(ErrorKind::InvalidInput, "states: must be in 1..64");
        N = static_cast<std::size_t>(n);
        const json& ja = j["actions"];
        if (!ja.is_array() || ja.empty()) fail(ErrorKind::InvalidInput, "actions: expected a non-empty array");
        for (std::size_t a = 0; a < ja.size(); ++a) {
            const std::string p = "actions[" + std::to_string(a) + "]";
            if (!ja[a].is_array() || ja[a].size() != N)
                fail(ErrorKind::InvalidInput, p + ": expected " + std::to_string(N) + " target states");
            std::vector<std::uint32_t> f;
            for (std::size_t s = 0; s < N; ++s) {
                const auto t = get_int(ja[a][s], p + "[" + std::to_string(s) + "]");
                if (t < 0 || t >= n) fail(ErrorKind::InvalidInput, p + "[" + std::to_string(s) + "]: not a state");
                f.push_back(static_cast<std::uint32_t>(t));
            }
            acts.push_back(std::move(f));
        }
    } else if (j.contains("matrices")) {
        const json& jm = j["matrices"];
        if (!jm.is_array() || jm.empty()) fail(ErrorKind::InvalidInput, "matrices: expected a non-empty array");
        for (std::size_t a = 0; a < jm.size(); ++a) {
            const std::string p = "matrices[" + std::to_string(a) + "]";
            const json& B = jm[a];
            if (!B.is_array() || B.empty()) fail(ErrorKind::InvalidInput, p + ": expected a square 0/1 matrix");
            if (a == 0) N = B.size();
            if (B.size() != N || N > 64) fail(ErrorKind::InvalidInput, p + ": expected " + std::to_string(N) + " rows");
            std::vector<std::int64_t> target(N, -1);
            for (std::size_t i = 0; i < N; ++i) {
                if (!B[i].is_array() || B[i].size() != N)
                    fail(ErrorKind::InvalidInput, p + "[" + std::to_string(i) + "]: expected " + std::to_string(N) + " entries");
                for (std::size_t c = 0; c < N; ++c) {
                    const auto v = get_int(B[i][c], p + "[" + std::to_string(i) + "][" + std::to_string(c) + "]");
                    if (v != 0 && v != 1)
                        fail(ErrorKind::InvalidInput, p + "[" + std::to_string(i) + "][" + std::to_string(c) + "]: expected 0 or 1");
                    if (v == 1) {
                        if (target[c] >= 0)
                            fail(ErrorKind::InvalidInput, p + ": column " + std::to_string(c) + " has more than one 1 (not simple)");
                        target[c] = static_cast<std::int64_t>(i);
                    }
                }
            }
            std::vector<std::uint32_t> f;
            for (std::size_t c = 0; c < N; ++c) {
                if (target[c] < 0) fail(ErrorKind::InvalidInput, p + ": column " + std::to_string(c) + " has no 1 (not simple)");
                f.push_back(static_cast<std::uint32_t>(target[c]));
            }
            acts.push_back(std::move(f));
        }
    } else {
        fail(ErrorKind::InvalidInput, "<root>: expected \"actions\" or \"matrices\"");
    }
    return make_automaton(N, std::move(acts));
}

json echo_system(const DilationSystem& sys) {
    std::vector<IVec> rows;
    for (int i = 0; i < sys.dim(); ++i) {
        IVec r;
        for (int k = 0; k < sys.dim(); ++k) r.push_back(sys.M.at(i, k));
        rows.push_back(r);
    }
    json j{{"matrix", vecs_json(rows)}, {"digits", vecs_json(sys.D.digits)}, {"basic_digits", vecs_json(sys.Delta.digits)}};
    if (!sys.name.empty()) j["name"] = sys.name;
    return j;
}

json tile_json(const TileVerdict& v) {
    return json{{"verdict", verdict_name(v.kind)}, {"coarse_estimate", num(v.coarse)}, {"fine_estimate", num(v.fine)},
                {"measure", v.measure}, {"depth", v.depth}, {"cell", num(v.cell)},
                {"fine_depth", v.fine_depth}, {"fine_cell", num(v.fine_cell)}};
}

namespace {

json profile_json(const SpectralProfile& p) {
    json groups = json::array();
    for (auto& g : p.groups) groups.push_back(json{{"r", num(g.r)}, {"multiplicity", g.multiplicity}});
    json mods = json::array();
    for (double m : p.moduli) mods.push_back(num(m));
    return json{{"moduli", mods}, {"groups", groups}, {"q", p.q}, {"isotropic", p.isotropic}, {"r", num(p.r)}, {"det_abs", p.det_abs}};
}

json spectral_json(const RegularityReport& rep) {
    return json{{"N", rep.N},
                {"S", vecs_json(rep.S.points())},
                {"rho2", num(rep.rho2)},
                {"lambda_max", num(rep.lambda_max)},
                {"rho1", num(rep.rho1)},
                {"r", num(rep.r)},
                {"s", num(rep.s)},
                {"d", num(rep.d)},
                {"alpha", num(rep.alpha)},
                {"exact", rep.exact},
                {"tile_verified", rep.tile_verified},
                {"bound_kind", bound_kind_name(rep.bound_kind)}};
}

void require_isotropic(const DilationSystem& sys) {
    if (!sys.profile.isotropic)
        fail(ErrorKind::Unsupported, "anisotropic dilation matrix: only the isotropic regularity formula is implemented");
}

} // namespace

json analyze(const DilationSystem& sys, const AnalyzeOptions& opt) {
    require_isotropic(sys);
    TileVerdict tv = tile_check(sys, opt.depth);
    RegularityOptions ro;
    ro.tile_verified = tv.kind == TileVerdict::Kind::Tile;
    auto rep = regularity_report(sys, ro);
    json doc{{"command", "analyze"}, {"input", echo_system(sys)}, {"profile", profile_json(sys.profile)},
             {"tile_check", tile_json(tv)}, {"spectral", spectral_json(rep)}};
    if (tv.kind != TileVerdict::Kind::Tile)
        doc["warnings"] = json::array({"attractor is not verified as a tile; s is reported as a lower bound"});
    return doc;
}

json oracle(const DilationSystem& sys, const OracleOptions& opt) {
    OracleConfig cfg = default_oracle_config(sys);
    if (opt.depth) cfg.depth = *opt.depth;
    if (opt.cell) {
        cfg.cell = *opt.cell;
        cfg.eps_min = 2 * cfg.cell;
    }
    if (opt.eps_min) cfg.eps_min = *opt.eps_min;
    if (opt.eps_max) cfg.eps_max = *opt.eps_max;
    OracleResult res = run_oracle(sys, cfg);
    json o{{"depth", res.config.depth},
           {"cell", num(res.config.cell)},
           {"eps_min", num(res.config.eps_min)},
           {"eps_max", num(res.config.eps_max)},
           {"base_measure", res.config.base_measure ? num(*res.config.base_measure) : json(nullptr)},
           {"raster_measure", num(res.raster_measure)},
           {"growth", pairs_json(res.growth)},
           {"shift", pairs_json(res.shift)},
           {"growth_slope", num(res.growth_fit.slope)},
           {"growth_r2", num(res.growth_fit.r_squared)},
           {"shift_slope", num(res.shift_fit.slope)},
           {"shift_r2", num(res.shift_fit.r_squared)}};
    return json{{"command", "oracle"}, {"input", echo_system(sys)}, {"tile_check", tile_json(res.verdict)}, {"oracle", o}};
}

std::pair<double, double> interval_window(const std::string& fixture) {
    if (fixture == "quasicantor") return {std::ldexp(1.0, -28), std::ldexp(1.0, -18)};
    return {std::ldexp(1.0, -16), std::ldexp(1.0, -6)};
}

json oracle_intervals(const std::string& fixture, const OracleOptions& opt) {
    IntervalSet s = interval_fixture(fixture);
    auto [lo, hi] = interval_window(fixture);
    if (opt.eps_min) lo = *opt.eps_min;
    if (opt.eps_max) hi = *opt.eps_max;
    Pairs growth, shift;
    bool doubling = true;
    for (double e : dyadic_range(lo, hi)) {
        growth.emplace_back(e, interval_eps_growth(s, e));
        shift.emplace_back(e, interval_l1_shift(s, e));
        doubling = doubling && doubling_check(s, e);
    }
    auto gf = fit_slope(growth), sf = fit_slope(shift);
    return json{{"command", "oracle"},
                {"fixture", fixture},
                {"segments", s.intervals.size()},
                {"measure", num(s.measure())},
                {"window", json::array({num(lo), num(hi)})},
                {"growth", pairs_json(growth)},
                {"shift", pairs_json(shift)},
                {"growth_slope", num(gf.slope)},
                {"shift_slope", num(sf.slope)},
                {"doubling", doubling}};
}

json automaton(const Automaton& a, const AutomatonOptions& opt) {
    json doc{{"command", "automaton"}, {"states", a.n_states}, {"actions", a.n_actions()}};
    const bool reset = has_reset_word(a);
    doc["has_reset"] = reset;
    if (a.n_states <= 24) {
        const std::size_t N = a.n_states;
        auto w = shortest_reset_word(a, (N * N * N - N) / 6 + 1);
        doc["shortest_reset"] = w ? json(*w) : json(nullptr);
        doc["reset_length"] = w ? json(w->size()) : json(nullptr);
    } else {
        doc["shortest_reset"] = nullptr;
        doc["reset_search"] = "skipped: more than 24 states";
    }
    auto sp = sync_parameter(a);
    doc["p"] = num(sp.p);
    doc["lambda_max"] = num(sp.lambda_max);
    doc["consistent"] = sp.consistent;
    auto pk = pk_exact(a, opt.kmax);
    json table = json::array();
    for (int k = 1; k <= opt.kmax; ++k)
        table.push_back(json{{"k", k}, {"exact", rational_string(pk[k - 1])}, {"value", num(pk[k - 1].convert_to<double>())}});
    doc["pk"] = table;
    doc["pk_root"] = num(std::pow(pk.back().convert_to<double>(), 1.0 / opt.kmax));
    if (opt.kmax > 10) doc["pk_window_rate"] = num(pk_window_rate(pk, opt.kmax));
    if (opt.mc_trials > 0) {
        const int k = opt.mc_length ? *opt.mc_length : opt.kmax;
        auto mc = monte_carlo_pk(a, k, opt.mc_trials, opt.seed);
        json mj{{"k", k}, {"trials", mc.trials}, {"seed", opt.seed}, {"not_reset", mc.not_reset}, {"estimate", num(mc.estimate)}};
        if (k <= opt.kmax) {
            const double exact = pk[k - 1].convert_to<double>();
            const double sigma = std::sqrt(exact * (1 - exact) / static_cast<double>(mc.trials));
            mj["exact"] = num(exact);
            mj["sigma"] = num(sigma);
        }
        doc["monte_carlo"] = mj;
    }
    return doc;
}

json automaton_from_tile(const DilationSystem& sys, const AutomatonOptions& opt) {
    require_isotropic(sys);
    TileVerdict tv = tile_check(sys);
    RegularityOptions ro;
    ro.tile_verified = tv.kind == TileVerdict::Kind::Tile;
    auto rep = regularity_report(sys, ro);
    auto fam = transition_matrices(sys, rep.S);
    json doc = automaton(from_transition_family(fam), opt);
    doc["input"] = echo_system(sys);
    doc["tile_check"] = tile_json(tv);
    if (ro.tile_verified && opt.kmax > 10) {
        ro.S = rep.S;
        auto tc = tile_sync_check(sys, opt.kmax, ro);
        doc["tile_bridge"] = json{{"s", num(tc.s)},
                                  {"r", num(rep.r)},
                                  {"r_pow_minus_s", num(tc.r_pow_minus_s)},
                                  {"p_spectral", num(tc.p_spectral)},
                                  {"p_dp", num(tc.p_dp)},
                                  {"p_dp_root", num(tc.p_dp_root)},
                                  {"residual", num(tc.residual)}};
    } else {
        doc["tile_bridge"] = json{{"skipped", true}, {"detail", "needs a verified tile and kmax > 10"}};
    }
    return doc;
}

json verify(const DilationSystem& sys) {
    require_isotropic(sys);
    TileVerdict tv = tile_check(sys);
    const bool tile = tv.kind == TileVerdict::Kind::Tile;
    RegularityOptions ro;
    ro.tile_verified = tile;
    auto rep = regularity_report(sys, ro);
    auto fam = transition_matrices(sys, rep.S);
    json checks = json::array();

    bool simple = true;
    for (auto& T : fam.mats) simple = simple && T.col_to_row.size() == fam.N() && T.N == fam.N();
    const bool invariant = eta_step(rep.S, to_lattice_set(sys.D), sys.Delta, sys.M).subset_of(rep.S);
    checks.push_back(check("transition_matrices_simple", simple && invariant, static_cast<double>(fam.N()), 0,
                           "simple, column-stochastic, S invariant"));
    checks.push_back(check("regularity_in_unit_interval", rep.s >= 0 && rep.s <= 1, rep.s, 0));

    Automaton a = from_transition_family(fam);
    auto pk = pk_exact(a, 40);
    const double window = pk_window_rate(pk, 40);
    const double root = std::pow(pk.back().convert_to<double>(), 1.0 / 40);
    checks.push_back(check("rho1_dp_vs_lambda", std::abs(window - rep.lambda_max) <= 2e-2,
                           std::abs(window - rep.lambda_max), 2e-2,
                           "(P_40/P_30)^(1/10); raw P_40^(1/40) = " + std::to_string(root)));
    auto sp = sync_parameter(a);
    checks.push_back(check("reset_iff_p_below_one", sp.consistent, sp.p, 1e-9));

    if (tile) {
        OracleResult orc = run_oracle(sys, default_oracle_config(sys), tv);
        const double dg = std::abs(orc.growth_fit.slope - rep.s);
        const double ds = std::abs(orc.shift_fit.slope - rep.s);
        checks.push_back(check("oracle_growth_slope", dg <= 0.05, orc.growth_fit.slope, 0.05));
        checks.push_back(check("oracle_shift_slope", ds <= 0.08, orc.shift_fit.slope, 0.08));
        const double rs = std::pow(rep.r, -rep.s);
        checks.push_back(check("sync_parameter_vs_r_pow_minus_s", std::abs(window - rs) <= 2e-2, std::abs(window - rs), 2e-2));
        RasterSet r = rasterize_attractor(sys, orc.config.depth, orc.config.cell, 32 * orc.config.cell);
        bool dbl = true;
        for (int f : {4, 8, 16}) dbl = dbl && doubling_check(r, f * r.cell, 1.0);
        checks.push_back(check("doubling_inequality", dbl, 0, 0, "r = 4h, 8h, 16h"));
    } else {
        for (auto name : {"oracle_growth_slope", "oracle_shift_slope", "sync_parameter_vs_r_pow_minus_s", "doubling_inequality"})
            checks.push_back(skipped(name, "attractor is not a verified tile"));
    }
    bool pass = true;
    for (auto& c : checks)
        if (c.contains("pass")) pass = pass && c["pass"].get<bool>();
    return json{{"command", "verify"},   {"input", echo_system(sys)}, {"tile_check", tile_json(tv)},
                {"spectral", spectral_json(rep)}, {"checks", checks}, {"pass", pass}};
}

namespace {

void human_rec(const json& j, const std::string& indent, std::ostringstream& os) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        const json& v = it.value();
        if (v.is_object()) {
            os << indent << it.key() << ":\n";
            human_rec(v, indent + "  ", os);
        } else if (v.is_array() && !v.empty() && v.size() > 12) {
            os << indent << it.key() << ": [" << v.size() << " entries]\n";
        } else if (v.is_array() && !v.empty() && v[0].is_object()) {
            os << indent << it.key() << ":\n";
            for (auto& e : v) {
                os << indent << "  -";
                for (auto f = e.begin(); f != e.end(); ++f) os << ' ' << f.key() << '=' << f.value().dump();
                os << '\n';
            }
        } else {
            os << indent << it.key() << ": " << (v.is_string() ? v.get<std::string>() : v.dump()) << '\n';
        }
    }
}

} // namespace

std::string human(const json& doc) {
    std::ostringstream os;
    human_rec(doc, "", os);
    return os.str();
}

int exit_code(ErrorKind k) {
    switch (k) {
    case ErrorKind::Unsupported: return 3;
    case ErrorKind::CapExceeded:
    case ErrorKind::BudgetExceeded:
    case ErrorKind::GridTooLarge:
    case ErrorKind::TooLarge:
    case ErrorKind::Overflow:
    case ErrorKind::NoConvergence: return 4;
    default: return 2;
    }
}

} // namespace tileregu::report
