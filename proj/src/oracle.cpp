#include "tileregu/oracle.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <string>

#include "tileregu/error.hpp"
#include "tileregu/parallel.hpp"

namespace tileregu {

namespace {

using DMat = std::vector<double>;

DMat dmul(const DMat& A, const DMat& B, int n) {
    DMat C(n * n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k)
            for (int j = 0; j < n; ++j) C[i * n + j] += A[i * n + k] * B[k * n + j];
    return C;
}

DMat inverse_power(const IntMatrix& M, int k) {
    const int n = M.dim();
    DMat P(n * n, 0.0);
    for (int i = 0; i < n; ++i) P[i * n + i] = 1;
    const DMat inv = inverse_double(M);
    for (int j = 0; j < k; ++j) P = dmul(P, inv, n);
    return P;
}

double inf_norm(const DMat& A, int n) {
    double best = 0;
    for (int i = 0; i < n; ++i) {
        double s = 0;
        for (int j = 0; j < n; ++j) s += std::abs(A[i * n + j]);
        best = std::max(best, s);
    }
    return best;
}

std::uint64_t pow_budget(std::uint64_t m, int k) {
    std::uint64_t v = 1;
    for (int i = 0; i < k; ++i) {
        if (v > kPointBudget) return kPointBudget + 1;
        v *= m;
    }
    return v;
}

int max_depth(std::uint64_t m) {
    int k = 0;
    while (pow_budget(m, k + 1) <= kPointBudget) ++k;
    return k;
}

constexpr std::uint32_t kInf = std::numeric_limits<std::uint32_t>::max();

// Exact 1-D squared distance transform (lower envelope of parabolas); kInf marks empty samples.
void dt1d(const std::uint32_t* f, std::size_t stride, std::size_t n, std::uint32_t* out, std::vector<std::int64_t>& v,
          std::vector<double>& z, std::vector<std::int64_t>& fv) {
    v.resize(n);
    z.resize(n + 1);
    fv.resize(n);
    for (std::size_t q = 0; q < n; ++q) fv[q] = f[q * stride] == kInf ? -1 : static_cast<std::int64_t>(f[q * stride]);
    std::ptrdiff_t k = -1;
    auto inter = [&](std::int64_t q, std::int64_t p) {
        return static_cast<double>((fv[q] + q * q) - (fv[p] + p * p)) / static_cast<double>(2 * (q - p));
    };
    for (std::size_t qq = 0; qq < n; ++qq) {
        if (fv[qq] < 0) continue;
        const auto q = static_cast<std::int64_t>(qq);
        if (k < 0) {
            k = 0;
            v[0] = q;
            z[0] = -INFINITY;
            z[1] = INFINITY;
            continue;
        }
        double s = inter(q, v[k]);
        while (s <= z[k]) {
            --k;
            s = inter(q, v[k]);
        }
        ++k;
        v[k] = q;
        z[k] = s;
        z[k + 1] = INFINITY;
    }
    if (k < 0) {
        for (std::size_t q = 0; q < n; ++q) out[q * stride] = kInf;
        return;
    }
    std::ptrdiff_t j = 0;
    for (std::size_t qq = 0; qq < n; ++qq) {
        const double q = static_cast<double>(qq);
        while (z[j + 1] < q) ++j;
        const std::int64_t dx = static_cast<std::int64_t>(qq) - v[j];
        const std::int64_t d = dx * dx + fv[v[j]];
        out[qq * stride] = d >= static_cast<std::int64_t>(kInf) ? kInf - 1 : static_cast<std::uint32_t>(d);
    }
}

// Squared Euclidean distance (in cells) from each cell to the nearest occupied cell.
std::vector<std::uint32_t> distance_transform(const RasterSet& r) {
    std::vector<std::uint32_t> d(r.cells());
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = r.bitmap[i] ? 0 : kInf;
    const std::size_t W = r.dims[0];
    const std::size_t H = r.n == 2 ? r.dims[1] : 1;
    parallel_for(H, [&](std::size_t b, std::size_t e) {
        std::vector<std::int64_t> v, fv;
        std::vector<double> z;
        std::vector<std::uint32_t> tmp(W);
        for (std::size_t y = b; y < e; ++y) {
            dt1d(d.data() + y * W, 1, W, tmp.data(), v, z, fv);
            std::copy(tmp.begin(), tmp.end(), d.begin() + static_cast<std::ptrdiff_t>(y * W));
        }
    });
    if (r.n == 2) {
        parallel_for(W, [&](std::size_t b, std::size_t e) {
            std::vector<std::int64_t> v, fv;
            std::vector<double> z;
            std::vector<std::uint32_t> col(H), tmp(H);
            for (std::size_t x = b; x < e; ++x) {
                for (std::size_t y = 0; y < H; ++y) col[y] = d[y * W + x];
                dt1d(col.data(), 1, H, tmp.data(), v, z, fv);
                for (std::size_t y = 0; y < H; ++y) d[y * W + x] = tmp[y];
            }
        });
    }
    return d;
}

RasterSet empty_grid(int n, const std::vector<double>& lo, const std::vector<double>& hi, double cell, double pad,
                     int depth) {
    if (!(cell > 0)) fail(ErrorKind::InvalidInput, "cell size must be positive");
    if (n < 1 || n > 2) fail(ErrorKind::Unsupported, "rasterization supports dimensions 1 and 2 only");
    RasterSet r;
    r.n = n;
    r.cell = cell;
    r.depth = depth;
    double total = 1;
    for (int i = 0; i < n; ++i) {
        const double o = std::floor((lo[i] - pad) / cell) * cell;
        r.origin.push_back(o);
        const double cnt = std::floor((hi[i] + pad - o) / cell) + 1;
        total *= cnt;
        if (total > static_cast<double>(kMaxCells))
            fail(ErrorKind::GridTooLarge, "raster grid would exceed 2^28 cells");
        r.dims.push_back(static_cast<std::size_t>(cnt));
    }
    r.bitmap.assign(static_cast<std::size_t>(total), 0);
    return r;
}

inline std::size_t cell_index(const RasterSet& r, const double* x) {
    std::size_t idx = 0, mul = 1;
    for (int i = 0; i < r.n; ++i) {
        double c = std::floor((x[i] - r.origin[i]) / r.cell);
        c = std::clamp(c, 0.0, static_cast<double>(r.dims[i] - 1));
        idx += static_cast<std::size_t>(c) * mul;
        mul *= r.dims[i];
    }
    return idx;
}

} // namespace

PointCloud enumerate_attractor(const DilationSystem& sys, int depth) {
    if (depth < 0) fail(ErrorKind::InvalidInput, "depth must be >= 0");
    const std::uint64_t m = sys.m();
    if (pow_budget(m, depth) > kPointBudget)
        fail(ErrorKind::BudgetExceeded, "m^depth exceeds the 2^24 point budget");
    const int n = sys.dim();
    const DMat inv = inverse_double(sys.M);
    PointCloud cur{n, std::vector<double>(n, 0.0)};
    // Horner: x <- M^-1 (x + a); the new digit becomes the most significant.
    for (int level = 0; level < depth; ++level) {
        PointCloud next{n, {}};
        next.coords.reserve(cur.coords.size() * m);
        std::vector<double> y(n);
        for (auto& a : sys.D.digits)
            for (std::size_t p = 0; p < cur.size(); ++p) {
                for (int i = 0; i < n; ++i) y[i] = cur.coords[p * n + i] + static_cast<double>(a[i]);
                for (int i = 0; i < n; ++i) {
                    double s = 0;
                    for (int j = 0; j < n; ++j) s += inv[i * n + j] * y[j];
                    next.coords.push_back(s);
                }
            }
        cur = std::move(next);
    }
    return cur;
}

std::size_t RasterSet::occupied() const {
    std::size_t c = 0;
    for (auto b : bitmap) c += b ? 1 : 0;
    return c;
}

std::size_t RasterSet::boundary_cells() const {
    const std::size_t W = dims[0];
    const std::size_t H = n == 2 ? dims[1] : 1;
    std::size_t c = 0;
    for (std::size_t y = 0; y < H; ++y)
        for (std::size_t x = 0; x < W; ++x) {
            if (!bitmap[y * W + x]) continue;
            bool edge = x == 0 || x + 1 == W || !bitmap[y * W + x - 1] || !bitmap[y * W + x + 1];
            if (n == 2) edge = edge || y == 0 || y + 1 == H || !bitmap[(y - 1) * W + x] || !bitmap[(y + 1) * W + x];
            c += edge ? 1 : 0;
        }
    return c;
}

RasterSet rasterize(const PointCloud& pts, double cell, double pad) {
    const int n = pts.n;
    std::vector<double> lo(n, INFINITY), hi(n, -INFINITY);
    for (std::size_t p = 0; p < pts.size(); ++p)
        for (int i = 0; i < n; ++i) {
            lo[i] = std::min(lo[i], pts.coords[p * n + i]);
            hi[i] = std::max(hi[i], pts.coords[p * n + i]);
        }
    if (pts.size() == 0) lo = hi = std::vector<double>(n, 0.0);
    RasterSet r = empty_grid(n, lo, hi, cell, pad, 0);
    for (std::size_t p = 0; p < pts.size(); ++p) r.bitmap[cell_index(r, &pts.coords[p * n])] = 1;
    return r;
}

RasterSet rasterize_attractor(const DilationSystem& sys, int depth, double cell, double pad) {
    const int n = sys.dim();
    if (pow_budget(sys.m(), depth) > kPointBudget)
        fail(ErrorKind::BudgetExceeded, "m^depth exceeds the 2^24 point budget");
    GammaBox box = gamma_outer_box(sys.M, to_lattice_set(sys.D));
    RasterSet r = empty_grid(n, box.lo, box.hi, cell, pad, depth);

    // x = prefix(a_1..a_k1) + M^-k1 suffix(a_{k1+1}..a_k)
    const int k1 = depth / 2, k2 = depth - k1;
    PointCloud pre = enumerate_attractor(sys, k1);
    PointCloud suf = enumerate_attractor(sys, k2);
    const DMat P = inverse_power(sys.M, k1);
    std::vector<double> tail(suf.coords.size());
    for (std::size_t p = 0; p < suf.size(); ++p)
        for (int i = 0; i < n; ++i) {
            double s = 0;
            for (int j = 0; j < n; ++j) s += P[i * n + j] * suf.coords[p * n + j];
            tail[p * n + i] = s;
        }
    parallel_for(pre.size(), [&](std::size_t b, std::size_t e) {
        double x[2];
        for (std::size_t p = b; p < e; ++p)
            for (std::size_t q = 0; q < suf.size(); ++q) {
                for (int i = 0; i < n; ++i) x[i] = pre.coords[p * n + i] + tail[q * n + i];
                std::atomic_ref<std::uint8_t>(r.bitmap[cell_index(r, x)]).store(1, std::memory_order_relaxed);
            }
    });
    return r;
}

RasterSet rasterize_intervals(const IntervalSet& s, double cell, double pad) {
    if (s.intervals.empty()) fail(ErrorKind::InvalidInput, "empty interval set");
    RasterSet r = empty_grid(1, {s.intervals.front().first}, {s.intervals.back().second}, cell, pad, 0);
    for (auto& [lo, hi] : s.intervals) {
        const double a = std::floor((lo - r.origin[0]) / cell), b = std::floor((hi - r.origin[0]) / cell);
        for (auto c = static_cast<std::size_t>(a); c <= static_cast<std::size_t>(b) && c < r.dims[0]; ++c)
            r.bitmap[c] = 1;
    }
    return r;
}

double measure_estimate(const RasterSet& r) {
    return static_cast<double>(r.occupied()) * std::pow(r.cell, r.n);
}

const char* verdict_name(TileVerdict::Kind k) {
    switch (k) {
    case TileVerdict::Kind::Tile: return "Tile";
    case TileVerdict::Kind::AttractorMeasure: return "AttractorMeasure";
    default: return "Inconclusive";
    }
}

TileVerdict tile_check(const DilationSystem& sys, std::optional<int> depth, std::optional<double> cell) {
    TileVerdict v;
    const int n = sys.dim();
    if (n > 2) return v;
    const std::uint64_t m = sys.m();
    const int refine = static_cast<int>(std::ceil(n * std::log(2.0) / std::log(static_cast<double>(m)) - 1e-12));
    int d1, d2;
    if (depth) {
        d1 = *depth;
        d2 = d1 + refine;
        if (d1 < 1 || pow_budget(m, d2) > kPointBudget) return v;
    } else {
        d2 = max_depth(m);
        d1 = d2 - refine;
        if (d1 < 1) return v;
    }
    // Without an explicit cell each depth gets the smallest dyadic cell that is
    // at least the piece diameter ||M^-k|| * diam(box); finer cells fall into
    // the point-lattice regime where every point owns a cell.
    auto auto_cell = [&](int k) {
        GammaBox box = gamma_outer_box(sys.M, to_lattice_set(sys.D));
        const double gap = inf_norm(inverse_power(sys.M, k), n) * std::max(box.diameter(), 1e-12);
        return std::ldexp(1.0, static_cast<int>(std::ceil(std::log2(gap) - 1e-6)));
    };
    const double h1 = cell ? *cell : auto_cell(d1);
    const double h2 = cell ? *cell / 2 : auto_cell(d2);
    v.depth = d1;
    v.cell = h1;
    v.fine_depth = d2;
    v.fine_cell = h2;
    try {
        v.coarse = measure_estimate(rasterize_attractor(sys, d1, h1, 2 * h1));
        v.fine = measure_estimate(rasterize_attractor(sys, d2, h2, 2 * h2));
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::GridTooLarge || e.kind() == ErrorKind::BudgetExceeded) return v;
        throw;
    }
    const double e1 = std::abs(v.coarse - 1), e2 = std::abs(v.fine - 1);
    if (e1 <= 0.1 && e2 <= 0.1 && e2 <= e1 + 0.01) {
        v.kind = TileVerdict::Kind::Tile;
        v.measure = 1;
        return v;
    }
    const double rounded = std::round(v.fine);
    if (rounded >= 1 && std::abs(v.fine - rounded) <= 0.1 * rounded &&
        std::abs(v.coarse - v.fine) <= 0.1 * std::max(rounded, 1.0) && !(rounded == 1)) {
        v.kind = TileVerdict::Kind::AttractorMeasure;
        v.measure = static_cast<std::int64_t>(rounded);
    }
    return v;
}

Pairs eps_growth(const RasterSet& r, const std::vector<double>& eps, std::optional<double> base) {
    for (double e : eps)
        if (e < 2 * r.cell * (1 - 1e-12))
            fail(ErrorKind::EpsTooSmall, "eps " + std::to_string(e) + " is below twice the cell size");
    const double b = base ? *base : measure_estimate(r);
    std::vector<std::uint32_t> d = distance_transform(r);
    std::vector<std::pair<double, std::size_t>> order;
    for (std::size_t i = 0; i < eps.size(); ++i) {
        const double t = eps[i] / r.cell;
        order.emplace_back(std::floor(t * t + 1e-9), i);
    }
    std::sort(order.begin(), order.end());
    std::vector<std::size_t> count(order.size(), 0);
    for (auto dv : d) {
        if (dv == kInf) continue;
        auto it = std::lower_bound(order.begin(), order.end(), static_cast<double>(dv),
                                   [](const std::pair<double, std::size_t>& a, double x) { return a.first < x; });
        if (it != order.end()) ++count[it - order.begin()];
    }
    for (std::size_t i = 1; i < count.size(); ++i) count[i] += count[i - 1];
    const double area = std::pow(r.cell, r.n);
    Pairs out(eps.size());
    for (std::size_t k = 0; k < order.size(); ++k) {
        const std::size_t i = order[k].second;
        out[i] = {eps[i], static_cast<double>(count[k]) * area - b};
    }
    return out;
}

Pairs holder_l1_shift(const RasterSet& r, const IVec& direction, const std::vector<double>& shifts) {
    if (static_cast<int>(direction.size()) != r.n) fail(ErrorKind::InvalidInput, "direction has wrong dimension");
    double dn = 0;
    for (auto c : direction) dn += static_cast<double>(c * c);
    dn = std::sqrt(dn);
    const std::size_t W = r.dims[0];
    const std::size_t H = r.n == 2 ? r.dims[1] : 1;
    const std::size_t occ = r.occupied();
    const double area = std::pow(r.cell, r.n);
    Pairs out;
    for (double t : shifts) {
        const double steps = t / r.cell;
        const double rounded = std::round(steps);
        if (std::abs(steps - rounded) > 1e-9 * std::max(1.0, steps))
            fail(ErrorKind::InvalidInput, "shift must be an integer multiple of the cell size");
        const auto k = static_cast<std::int64_t>(rounded);
        const std::int64_t dx = direction[0] * k;
        const std::int64_t dy = r.n == 2 ? direction[1] * k : 0;
        std::size_t overlap = 0;
        for (std::size_t y = 0; y < H; ++y) {
            const std::int64_t yy = static_cast<std::int64_t>(y) + dy;
            if (yy < 0 || yy >= static_cast<std::int64_t>(H)) continue;
            for (std::size_t x = 0; x < W; ++x) {
                const std::int64_t xx = static_cast<std::int64_t>(x) + dx;
                if (xx < 0 || xx >= static_cast<std::int64_t>(W)) continue;
                overlap += (r.bitmap[y * W + x] & r.bitmap[static_cast<std::size_t>(yy) * W + static_cast<std::size_t>(xx)]);
            }
        }
        out.emplace_back(t * dn, static_cast<double>(2 * (occ - overlap)) * area);
    }
    return out;
}

SlopeFit fit_slope(const Pairs& pairs) {
    if (pairs.size() < 4) fail(ErrorKind::DegenerateData, "slope fit needs at least 4 points");
    SlopeFit f;
    for (auto& [x, y] : pairs) {
        if (!(x > 0) || !(y > 0)) fail(ErrorKind::DegenerateData, "slope fit needs positive data");
        f.points.emplace_back(std::log(x), std::log(y));
    }
    const double n = static_cast<double>(f.points.size());
    double sx = 0, sy = 0;
    for (auto& [x, y] : f.points) {
        sx += x;
        sy += y;
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0, syy = 0;
    for (auto& [x, y] : f.points) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
        syy += (y - my) * (y - my);
    }
    if (sxx <= 0 || syy <= 0) fail(ErrorKind::DegenerateData, "slope fit needs varying data");
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    f.r_squared = sxy * sxy / (sxx * syy);
    return f;
}

std::vector<double> dyadic_range(double lo, double hi) {
    std::vector<double> out;
    if (!(lo > 0) || hi < lo) return out;
    const int a = static_cast<int>(std::ceil(std::log2(lo) - 1e-9));
    const int b = static_cast<int>(std::floor(std::log2(hi) + 1e-9));
    for (int j = a; j <= b; ++j) out.push_back(std::ldexp(1.0, j));
    return out;
}

OracleConfig default_oracle_config(const DilationSystem& sys) {
    OracleConfig c;
    const int n = sys.dim();
    c.depth = max_depth(sys.m());
    GammaBox box = gamma_outer_box(sys.M, to_lattice_set(sys.D));
    const double diam = std::max(box.diameter(), 1e-12);
    if (n == 2) {
        c.cell = std::ldexp(1.0, -11);
        // keep the grid well inside the cell cap
        while (std::pow((diam + diam / 8) / c.cell, 2) > static_cast<double>(std::uint64_t{1} << 26)) c.cell *= 2;
    } else {
        const double gap = inf_norm(inverse_power(sys.M, c.depth), n) * diam;
        c.cell = std::ldexp(1.0, static_cast<int>(std::ceil(std::log2(4 * gap))));
    }
    c.eps_min = 2 * c.cell;
    c.eps_max = std::ldexp(1.0, static_cast<int>(std::floor(std::log2(diam / 16) + 1e-9)));
    return c;
}

OracleResult run_oracle(const DilationSystem& sys, const OracleConfig& cfg, std::optional<TileVerdict> verdict) {
    OracleResult res;
    res.config = cfg;
    res.verdict = verdict ? *verdict : tile_check(sys);
    if (!res.config.base_measure) {
        if (res.verdict.kind != TileVerdict::Kind::Inconclusive)
            res.config.base_measure = static_cast<double>(res.verdict.measure);
    }
    RasterSet r = rasterize_attractor(sys, cfg.depth, cfg.cell, cfg.eps_max + 2 * cfg.cell);
    res.raster_measure = measure_estimate(r);
    auto eps = dyadic_range(cfg.eps_min, cfg.eps_max);
    res.growth = eps_growth(r, eps, res.config.base_measure);
    IVec dir(sys.dim(), 0);
    dir[0] = 1;
    res.shift = holder_l1_shift(r, dir, eps);
    res.growth_fit = fit_slope(res.growth);
    res.shift_fit = fit_slope(res.shift);
    return res;
}

bool doubling_check(const RasterSet& rs, double r, std::optional<double> base) {
    auto g = eps_growth(rs, {r, 2 * r}, base);
    const double slack = 3 * std::pow(rs.cell, rs.n) * static_cast<double>(rs.boundary_cells());
    return g[1].second <= std::pow(2.0, rs.n) * g[0].second + slack;
}

} // namespace tileregu
