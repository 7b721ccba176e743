#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "tileregu/attractor.hpp"

namespace tileregu {

using Pairs = std::vector<std::pair<double, double>>;

struct PointCloud {
    int n = 0;
    std::vector<double> coords; // point i occupies coords[i*n .. i*n+n)
    std::size_t size() const { return n ? coords.size() / n : 0; }
};

constexpr std::uint64_t kPointBudget = std::uint64_t{1} << 24;
constexpr std::uint64_t kMaxCells = std::uint64_t{1} << 28;

// All m^k partial sums sum_{j<=k} M^-j a_j in digit-lexicographic order (a_1 most significant).
PointCloud enumerate_attractor(const DilationSystem& sys, int depth);

struct RasterSet {
    int n = 0;
    std::vector<double> origin;
    double cell = 0;
    std::vector<std::size_t> dims;  // dims[0] = columns (x), dims[1] = rows (y) in 2-D
    std::vector<std::uint8_t> bitmap; // index = y * dims[0] + x
    int depth = 0;

    std::size_t cells() const { return bitmap.size(); }
    std::size_t occupied() const;
    std::size_t boundary_cells() const;
};

RasterSet rasterize(const PointCloud& pts, double cell, double pad);

// Streams the m^k points straight into a grid covering gamma_outer_box(M, D) + pad.
RasterSet rasterize_attractor(const DilationSystem& sys, int depth, double cell, double pad);

double measure_estimate(const RasterSet& r);

struct TileVerdict {
    enum class Kind { Tile, AttractorMeasure, Inconclusive };
    Kind kind = Kind::Inconclusive;
    double coarse = 0;  // estimate at (depth, cell)
    double fine = 0;    // estimate at the refined pair
    std::int64_t measure = 0;
    int depth = 0, fine_depth = 0;
    double cell = 0, fine_cell = 0;
};

const char* verdict_name(TileVerdict::Kind k);

TileVerdict tile_check(const DilationSystem& sys, std::optional<int> depth = std::nullopt,
                       std::optional<double> cell = std::nullopt);

// (eps, |G_eps| - base) with base defaulting to the raster's own measure.
Pairs eps_growth(const RasterSet& r, const std::vector<double>& eps, std::optional<double> base = std::nullopt);

// (|shift|, ||chi(. + shift*dir) - chi||_1); shifts must be multiples of the cell.
Pairs holder_l1_shift(const RasterSet& r, const IVec& direction, const std::vector<double>& shifts);

struct SlopeFit {
    double slope = 0, intercept = 0, r_squared = 0;
    Pairs points; // (log eps, log value)
};

SlopeFit fit_slope(const Pairs& pairs);

// Powers of two in [lo, hi].
std::vector<double> dyadic_range(double lo, double hi);

// Segments may touch or degenerate to points once their length drops below
// double resolution; they never overlap.
struct IntervalSet {
    std::vector<std::pair<double, double>> intervals;
    double measure() const;
};

IntervalSet make_interval_set(std::vector<std::pair<double, double>> iv);
IntervalSet th10_set(int terms);
IntervalSet quasi_cantor_set(int levels);

// Cells meeting any segment.
RasterSet rasterize_intervals(const IntervalSet& s, double cell, double pad);
double interval_eps_measure(const IntervalSet& s, double eps);
double interval_eps_growth(const IntervalSet& s, double eps); // |G_eps| - |G| without cancellation
double interval_l1_shift(const IntervalSet& s, double t);

bool doubling_check(const IntervalSet& s, double r);
bool doubling_check(const RasterSet& rs, double r, std::optional<double> base = std::nullopt);

struct OracleConfig {
    int depth = 0;
    double cell = 0;
    double eps_min = 0, eps_max = 0;
    std::optional<double> base_measure;
};

// Depth fills the point budget; 2-D uses cell 2^-11, 1-D the smallest dyadic
// cell above four times the depth-k piece size. Window 2h .. diam/16.
OracleConfig default_oracle_config(const DilationSystem& sys);

struct OracleResult {
    OracleConfig config;
    TileVerdict verdict;
    double raster_measure = 0;
    Pairs growth, shift;
    SlopeFit growth_fit, shift_fit;
};

// Tile check, raster at the configured resolution, eps-growth and L1-shift
// slopes. The base measure is the verified integer measure when known.
OracleResult run_oracle(const DilationSystem& sys, const OracleConfig& cfg,
                        std::optional<TileVerdict> verdict = std::nullopt);

} // namespace tileregu
