// tileregu: surface regularity of self-affine tiles and attractors.

#include <cmath>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "tileregu/fixtures.hpp"
#include "tileregu/oracle.hpp"
#include "tileregu/render.hpp"
#include "tileregu/report.hpp"
#include "tileregu/spectral.hpp"

using namespace tileregu;
using report::json;

namespace {

struct Source {
    std::string path;
    std::string fixture;
};

void add_source(CLI::App* cmd, Source& src) {
    cmd->add_option("path", src.path, "JSON input file");
    cmd->add_option("--fixture", src.fixture, "built-in fixture name");
}

DilationSystem load_system(const Source& src, const std::optional<std::vector<IVec>>& basic = std::nullopt) {
    if (!src.fixture.empty()) {
        if (fixture_kind(src.fixture) != FixtureKind::System)
            fail(ErrorKind::InvalidInput, "fixture '" + src.fixture + "' is not a dilation system");
        DilationSystem sys = system_fixture(src.fixture);
        if (basic) sys = make_system(sys.M, sys.D.digits, basic, sys.name);
        return sys;
    }
    if (src.path.empty()) fail(ErrorKind::InvalidInput, "expected an input path or --fixture NAME");
    return report::parse_system(report::load_json_file(src.path), basic);
}

void emit(const json& doc, bool as_json) {
    if (as_json)
        std::cout << doc.dump(2) << '\n';
    else
        std::cout << report::human(doc);
}

std::string stem_of(const Source& src) {
    if (!src.fixture.empty()) return src.fixture;
    return std::filesystem::path(src.path).stem().string();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Surface regularity, dimension and synchronization parameter of self-affine tiles.\n"
                 "Eigenvalue moduli within 1e-6 of 1 count as non-expanding. TILEREGU_THREADS caps worker threads."};
    app.require_subcommand(1);
    bool as_json = false;

    Source src;
    std::string basic_digits;
    std::optional<int> depth;
    auto* analyze = app.add_subcommand("analyze", "spectral regularity report");
    add_source(analyze, src);
    analyze->add_flag("--json", as_json, "machine-readable output");
    analyze->add_option("--basic-digits", basic_digits, "basic digits as a JSON array, e.g. [[0,0],[1,0]]");
    analyze->add_option("--depth", depth, "tile-check enumeration depth");

    report::OracleOptions oopt;
    auto* oracle = app.add_subcommand("oracle", "brute-force raster / interval regularity estimates");
    add_source(oracle, src);
    oracle->add_flag("--json", as_json, "machine-readable output");
    oracle->add_option("--depth", oopt.depth, "enumeration depth (m^depth <= 2^24)");
    oracle->add_option("--cell", oopt.cell, "raster cell size");
    oracle->add_option("--eps-min", oopt.eps_min, "smallest eps / shift of the fit window");
    oracle->add_option("--eps-max", oopt.eps_max, "largest eps / shift of the fit window");

    report::AutomatonOptions aopt;
    bool from_tile = false;
    std::optional<int> mc_length;
    auto* automaton = app.add_subcommand("automaton", "reset words, P_k and the synchronization parameter");
    add_source(automaton, src);
    automaton->add_flag("--json", as_json, "machine-readable output");
    automaton->add_flag("--from-tile", from_tile, "build the automaton from a dilation system");
    automaton->add_option("--kmax", aopt.kmax, "P_k table length (1..200)")->check(CLI::Range(1, 200));
    automaton->add_option("--mc-trials", aopt.mc_trials, "Monte-Carlo trials (0 disables)");
    automaton->add_option("--mc-length", mc_length, "Monte-Carlo word length (default kmax)");
    automaton->add_option("--seed", aopt.seed, "Monte-Carlo seed");

    std::string out;
    double cell = std::ldexp(1.0, -8);
    bool tiling = false, antialias = false;
    auto* render = app.add_subcommand("render", "write a PGM (or PPM tiling patch) image");
    add_source(render, src);
    render->add_option("--out", out, "output file (default <name>.pgm / <name>_tiling.ppm)");
    render->add_option("--cell", cell, "raster cell size");
    render->add_option("--depth", depth, "enumeration depth (default: m^depth <= 2^20)");
    render->add_flag("--tiling", tiling, "draw neighbouring shifts in colour");
    render->add_flag("--antialias", antialias, "gray levels from 2x2 subcell counts");

    auto* verify = app.add_subcommand("verify", "cross-check spectral, oracle and automaton results");
    add_source(verify, src);
    verify->add_flag("--json", as_json, "machine-readable output");

    app.add_subcommand("fixtures", "list built-in fixtures");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (analyze->parsed()) {
            std::optional<std::vector<IVec>> basic;
            if (!basic_digits.empty()) {
                json j;
                try {
                    j = json::parse(basic_digits);
                } catch (const json::parse_error& e) {
                    fail(ErrorKind::InvalidInput, std::string("--basic-digits: ") + e.what());
                }
                basic = report::parse_vectors(j, "--basic-digits");
            }
            emit(report::analyze(load_system(src, basic), {depth}), as_json);
        } else if (oracle->parsed()) {
            if (!src.fixture.empty() && fixture_kind(src.fixture) == FixtureKind::Intervals)
                emit(report::oracle_intervals(src.fixture, oopt), as_json);
            else
                emit(report::oracle(load_system(src), oopt), as_json);
        } else if (automaton->parsed()) {
            aopt.mc_length = mc_length;
            if (from_tile) {
                emit(report::automaton_from_tile(load_system(src), aopt), as_json);
            } else {
                Automaton a;
                if (!src.fixture.empty()) {
                    if (fixture_kind(src.fixture) != FixtureKind::Automaton)
                        fail(ErrorKind::InvalidInput, "fixture '" + src.fixture + "' is not an automaton (use --from-tile)");
                    a = automaton_fixture(src.fixture);
                } else {
                    if (src.path.empty()) fail(ErrorKind::InvalidInput, "expected an input path or --fixture NAME");
                    a = report::parse_automaton(report::load_json_file(src.path));
                }
                emit(report::automaton(a, aopt), as_json);
            }
        } else if (render->parsed()) {
            DilationSystem sys = load_system(src);
            int k = 0;
            if (depth) {
                k = *depth;
            } else {
                std::uint64_t v = 1;
                while (v * sys.m() <= (std::uint64_t{1} << 20)) v *= sys.m(), ++k;
            }
            RasterSet r = rasterize_attractor(sys, k, cell, 0);
            if (tiling) {
                if (out.empty()) out = stem_of(src) + "_tiling.ppm";
                write_ppm(render_tiling(r, admissible_set(sys)), out);
            } else {
                if (out.empty()) out = stem_of(src) + ".pgm";
                write_pgm(render_raster(r, antialias ? RenderStyle::Antialiased : RenderStyle::Binary), out);
            }
            std::cout << "wrote " << out << '\n';
        } else if (verify->parsed()) {
            json doc = report::verify(load_system(src));
            emit(doc, as_json);
            return doc["pass"].get<bool>() ? 0 : 1;
        } else {
            for (auto& n : fixture_names()) std::cout << n << '\n';
        }
    } catch (const Error& e) {
        std::cerr << "error [" << kind_name(e.kind()) << "]: " << e.what() << '\n';
        return report::exit_code(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 4;
    }
    return 0;
}
