#include "tileregu/attractor.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "tileregu/checked.hpp"
#include "tileregu/error.hpp"

namespace tileregu {

namespace {

std::string fmt_vec(const IVec& v) {
    std::ostringstream os;
    os << '(';
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
    os << ')';
    return os.str();
}

IVec vsub(const IVec& a, const IVec& b) {
    IVec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = checked::sub(a[i], b[i]);
    return r;
}

IVec vadd(const IVec& a, const IVec& b) {
    IVec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = checked::add(a[i], b[i]);
    return r;
}

bool is_zero(const IVec& v) {
    return std::all_of(v.begin(), v.end(), [](std::int64_t x) { return x == 0; });
}

using DMat = std::vector<double>; // row-major n x n

DMat dmul(const DMat& A, const DMat& B, int n) {
    DMat C(n * n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k)
            for (int j = 0; j < n; ++j) C[i * n + j] += A[i * n + k] * B[k * n + j];
    return C;
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

} // namespace

DigitSet validate_digits(const IntMatrix& M, const std::vector<IVec>& digits) {
    const std::int64_t det = det_exact(M);
    const std::uint64_t m = det < 0 ? static_cast<std::uint64_t>(-det) : static_cast<std::uint64_t>(det);
    for (std::size_t i = 0; i < digits.size(); ++i)
        if (static_cast<int>(digits[i].size()) != M.dim())
            fail(ErrorKind::InvalidInput, "digits[" + std::to_string(i) + "] has wrong dimension");
    if (digits.size() != m)
        fail(ErrorKind::WrongCount,
             "expected |det M| = " + std::to_string(m) + " digits, got " + std::to_string(digits.size()));
    auto zero = std::find_if(digits.begin(), digits.end(), is_zero);
    if (zero == digits.end()) fail(ErrorKind::MissingZero, "digit set must contain the zero vector");

    LatticeSolver solver(M);
    for (std::size_t i = 0; i < digits.size(); ++i)
        for (std::size_t j = i + 1; j < digits.size(); ++j)
            if (solver.contains(vsub(digits[i], digits[j])))
                throw EquivalentPairError(i, j,
                                          "digits[" + std::to_string(i) + "]=" + fmt_vec(digits[i]) + " and digits[" +
                                              std::to_string(j) + "]=" + fmt_vec(digits[j]) +
                                              " are congruent modulo M (EquivalentPair)");

    DigitSet out;
    out.digits.push_back(*zero);
    for (auto it = digits.begin(); it != digits.end(); ++it)
        if (it != zero) out.digits.push_back(*it);
    return out;
}

LatticeSet::LatticeSet(std::vector<IVec> pts) : pts_(std::move(pts)) {
    std::sort(pts_.begin(), pts_.end());
    pts_.erase(std::unique(pts_.begin(), pts_.end()), pts_.end());
}

std::optional<std::size_t> LatticeSet::index_of(const IVec& v) const {
    auto it = std::lower_bound(pts_.begin(), pts_.end(), v);
    if (it == pts_.end() || *it != v) return std::nullopt;
    return static_cast<std::size_t>(it - pts_.begin());
}

bool LatticeSet::subset_of(const LatticeSet& o) const {
    return std::includes(o.pts_.begin(), o.pts_.end(), pts_.begin(), pts_.end());
}

LatticeSet LatticeSet::united(const LatticeSet& o) const {
    std::vector<IVec> all = pts_;
    all.insert(all.end(), o.pts_.begin(), o.pts_.end());
    return LatticeSet(std::move(all));
}

LatticeSet to_lattice_set(const DigitSet& d) { return LatticeSet(d.digits); }

DilationSystem make_system(const IntMatrix& M, const std::vector<IVec>& digits,
                           const std::optional<std::vector<IVec>>& basic_digits, std::string name) {
    DilationSystem sys;
    sys.M = M;
    sys.profile = analyze_dilation(M);
    sys.D = validate_digits(M, digits);
    if (basic_digits) {
        sys.Delta = validate_digits(M, *basic_digits);
    } else if (M.dim() == 1) {
        std::vector<IVec> delta;
        for (std::int64_t k = 0; k < sys.profile.det_abs; ++k) delta.push_back({k});
        sys.Delta = validate_digits(M, delta);
    } else {
        sys.Delta = sys.D;
    }
    sys.name = std::move(name);
    return sys;
}

LatticeSet eta_step(const LatticeSet& X, const LatticeSet& supp, const DigitSet& Delta, const IntMatrix& M) {
    LatticeSolver solver(M);
    std::set<IVec> offsets;
    for (auto& c : supp.points())
        for (auto& d : Delta.digits) offsets.insert(vsub(c, d));
    std::vector<IVec> out;
    for (auto& x : X.points())
        for (auto& o : offsets)
            if (auto a = solver.solve(vadd(x, o))) out.push_back(std::move(*a));
    return LatticeSet(std::move(out));
}

LatticeSet invariant_closure(const LatticeSet& K, const LatticeSet& supp, const DigitSet& Delta, const IntMatrix& M,
                             std::size_t cap) {
    if (K.empty()) fail(ErrorKind::InvalidInput, "closure seed must be nonempty");
    std::set<IVec> acc(K.points().begin(), K.points().end());
    LatticeSet frontier = K;
    while (!frontier.empty()) {
        LatticeSet img = eta_step(frontier, supp, Delta, M);
        std::vector<IVec> fresh;
        for (auto& p : img.points())
            if (acc.insert(p).second) fresh.push_back(p);
        if (acc.size() > cap)
            fail(ErrorKind::CapExceeded, "invariant closure exceeded cap of " + std::to_string(cap) + " points");
        frontier = LatticeSet(std::move(fresh));
    }
    return LatticeSet(std::vector<IVec>(acc.begin(), acc.end()));
}

double GammaBox::diameter() const {
    double d = 0;
    for (std::size_t i = 0; i < lo.size(); ++i) d = std::max(d, hi[i] - lo[i]);
    return d;
}

GammaBox gamma_outer_box(const IntMatrix& M, const LatticeSet& supp, double tol) {
    const int n = M.dim();
    const DMat Minv = inverse_double(M);
    GammaBox box;
    box.lo.assign(n, 0.0);
    box.hi.assign(n, 0.0);
    if (supp.empty()) {
        box.certified = true;
        return box;
    }
    double gmax = 0;
    for (auto& g : supp.points())
        for (auto v : g) gmax = std::max(gmax, std::abs(static_cast<double>(v)));

    // Geometric bound on sum_j ||M^-j|| from the first power with norm <= 1/2.
    DMat P = Minv;
    double partial = 0, q = 1;
    for (int k = 1; k <= 100000; ++k) {
        q = inf_norm(P, n);
        partial += q;
        if (q <= 0.5) break;
        P = dmul(P, Minv, n);
    }
    if (q > 0.5) fail(ErrorKind::NotExpanding, "inverse powers do not contract");
    const double R = gmax * partial / (1.0 - q);

    // Exact separable hull of the first K terms plus a norm tail.
    P = Minv;
    double tail = R;
    for (int k = 1; k <= 100000; ++k) {
        for (int i = 0; i < n; ++i) {
            double mn = INFINITY, mx = -INFINITY;
            for (auto& g : supp.points()) {
                double s = 0;
                for (int j = 0; j < n; ++j) s += P[i * n + j] * static_cast<double>(g[j]);
                mn = std::min(mn, s);
                mx = std::max(mx, s);
            }
            box.lo[i] += mn;
            box.hi[i] += mx;
        }
        tail = inf_norm(P, n) * R;
        if (tail < tol) break;
        P = dmul(P, Minv, n);
    }
    for (int i = 0; i < n; ++i) {
        const double slack = tail + 1e-13 * (1.0 + std::abs(box.lo[i]) + std::abs(box.hi[i]));
        box.lo[i] -= slack;
        box.hi[i] += slack;
    }

    // Hull iteration B <- hull(U M^-1 (B + g)) intersected with B; stays an outer bound.
    for (int it = 0; it < 200; ++it) {
        std::vector<double> nlo(n, INFINITY), nhi(n, -INFINITY);
        for (auto& g : supp.points())
            for (int i = 0; i < n; ++i) {
                double lo = 0, hi = 0;
                for (int j = 0; j < n; ++j) {
                    const double a = Minv[i * n + j];
                    const double l = box.lo[j] + static_cast<double>(g[j]);
                    const double h = box.hi[j] + static_cast<double>(g[j]);
                    lo += std::min(a * l, a * h);
                    hi += std::max(a * l, a * h);
                }
                const double slack = 1e-15 * (1.0 + std::abs(lo) + std::abs(hi));
                nlo[i] = std::min(nlo[i], lo - slack);
                nhi[i] = std::max(nhi[i], hi + slack);
            }
        double shrink = 0;
        for (int i = 0; i < n; ++i) {
            const double lo = std::max(box.lo[i], nlo[i]);
            const double hi = std::min(box.hi[i], nhi[i]);
            shrink = std::max({shrink, lo - box.lo[i], box.hi[i] - hi});
            box.lo[i] = lo;
            box.hi[i] = hi;
        }
        if (shrink < tol) break;
    }
    box.certified = true;
    return box;
}

LatticeSet box_seed(const DilationSystem& sys, double margin) {
    const int n = sys.dim();
    GammaBox q = gamma_outer_box(sys.M, to_lattice_set(sys.Delta));
    GammaBox g = gamma_outer_box(sys.M, to_lattice_set(sys.D));
    std::vector<std::int64_t> lo(n), hi(n);
    for (int i = 0; i < n; ++i) {
        lo[i] = static_cast<std::int64_t>(std::ceil(g.lo[i] - q.hi[i] - 2 * margin));
        hi[i] = static_cast<std::int64_t>(std::floor(g.hi[i] - q.lo[i] + 2 * margin));
    }
    std::vector<IVec> pts;
    IVec cur(lo);
    while (true) {
        pts.push_back(cur);
        int i = n - 1;
        while (i >= 0 && cur[i] == hi[i]) {
            cur[i] = lo[i];
            --i;
        }
        if (i < 0) break;
        ++cur[i];
        if (pts.size() > kDefaultClosureCap)
            fail(ErrorKind::CapExceeded, "admissible seed box exceeds " + std::to_string(kDefaultClosureCap) + " points");
    }
    return LatticeSet(std::move(pts));
}

LatticeSet admissible_set(const DilationSystem& sys) {
    return invariant_closure(box_seed(sys), to_lattice_set(sys.D), sys.Delta, sys.M);
}

bool SimpleMatrix::is_permutation() const {
    std::vector<char> hit(N, 0);
    for (auto r : col_to_row) {
        if (hit[r]) return false;
        hit[r] = 1;
    }
    return true;
}

TransitionFamily transition_matrices(const DilationSystem& sys, const LatticeSet& S) {
    LatticeSolver solver(sys.M);
    TransitionFamily fam;
    fam.S = S;
    const std::size_t N = S.size();
    for (auto& delta : sys.Delta.digits) {
        SimpleMatrix T;
        T.N = N;
        T.col_to_row.resize(N);
        for (std::size_t col = 0; col < N; ++col) {
            const IVec base = vsub(S[col], delta);
            std::optional<IVec> found;
            for (auto& d : sys.D.digits) {
                if (auto a = solver.solve(vadd(base, d))) {
                    if (found)
                        fail(ErrorKind::NotInvariant, "two digits qualify for column " + fmt_vec(S[col]));
                    found = std::move(a);
                }
            }
            if (!found) fail(ErrorKind::NotInvariant, "no digit qualifies for column " + fmt_vec(S[col]));
            auto row = S.index_of(*found);
            if (!row)
                fail(ErrorKind::NotInvariant,
                     "row " + fmt_vec(*found) + " for column " + fmt_vec(S[col]) + " lies outside S");
            T.col_to_row[col] = static_cast<std::uint32_t>(*row);
        }
        fam.mats.push_back(std::move(T));
    }
    return fam;
}

} // namespace tileregu
