#include "tileregu/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>

#include <Eigen/Dense>
#include <boost/multiprecision/cpp_int.hpp>

#include "tileregu/checked.hpp"
#include "tileregu/error.hpp"

namespace tileregu {

namespace mp = boost::multiprecision;
using Rat = mp::cpp_rational;
using RPoly = std::vector<Rat>; // ascending coefficients, trimmed

IntMatrix::IntMatrix(int n) : n_(n), a_(static_cast<std::size_t>(n) * n, 0) {
    if (n < 1 || n > kMaxDim) fail(ErrorKind::InvalidInput, "matrix dimension must be in 1..8, got " + std::to_string(n));
}

IntMatrix IntMatrix::from_rows(const std::vector<IVec>& rows) {
    IntMatrix M(static_cast<int>(rows.size()));
    for (int i = 0; i < M.n_; ++i) {
        if (static_cast<int>(rows[i].size()) != M.n_) fail(ErrorKind::InvalidInput, "matrix must be square");
        for (int j = 0; j < M.n_; ++j) M.at(i, j) = rows[i][j];
    }
    return M;
}

IntMatrix IntMatrix::from_rows(std::initializer_list<std::initializer_list<std::int64_t>> rows) {
    std::vector<IVec> r;
    for (auto& row : rows) r.emplace_back(row);
    return from_rows(r);
}

IntMatrix IntMatrix::identity(int n) {
    IntMatrix I(n);
    for (int i = 0; i < n; ++i) I.at(i, i) = 1;
    return I;
}

IVec IntMatrix::apply(const IVec& v) const {
    IVec out(n_, 0);
    for (int i = 0; i < n_; ++i) {
        std::int64_t s = 0;
        for (int j = 0; j < n_; ++j) s = checked::add(s, checked::mul(at(i, j), v[j]));
        out[i] = s;
    }
    return out;
}

IntMatrix IntMatrix::operator*(const IntMatrix& o) const {
    IntMatrix r(n_);
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j) {
            std::int64_t s = 0;
            for (int k = 0; k < n_; ++k) s = checked::add(s, checked::mul(at(i, k), o.at(k, j)));
            r.at(i, j) = s;
        }
    return r;
}

namespace {

std::int64_t narrow(__int128 v) {
    if (v > INT64_MAX || v < INT64_MIN) fail(ErrorKind::Overflow, "integer overflow in exact elimination");
    return static_cast<std::int64_t>(v);
}

// Bareiss elimination on a dense copy; returns the determinant.
std::int64_t bareiss(std::vector<std::int64_t> a, int n) {
    if (n == 0) return 1;
    int sign = 1;
    std::int64_t prev = 1;
    auto A = [&](int i, int j) -> std::int64_t& { return a[i * n + j]; };
    for (int k = 0; k < n - 1; ++k) {
        if (A(k, k) == 0) {
            int p = k + 1;
            while (p < n && A(p, k) == 0) ++p;
            if (p == n) return 0;
            for (int j = 0; j < n; ++j) std::swap(A(k, j), A(p, j));
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i)
            for (int j = k + 1; j < n; ++j) {
                __int128 t = static_cast<__int128>(A(i, j)) * A(k, k) - static_cast<__int128>(A(i, k)) * A(k, j);
                A(i, j) = narrow(t / prev);
            }
        prev = A(k, k);
    }
    return sign * A(n - 1, n - 1);
}

RPoly trim(RPoly p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
    return p;
}

RPoly derivative(const RPoly& p) {
    RPoly d;
    for (std::size_t i = 1; i < p.size(); ++i) d.push_back(p[i] * static_cast<long long>(i));
    return trim(d);
}

RPoly monic(RPoly p) {
    p = trim(p);
    if (p.empty()) return p;
    Rat lead = p.back();
    for (auto& c : p) c /= lead;
    return p;
}

// Returns (quotient, remainder).
std::pair<RPoly, RPoly> divmod(RPoly a, const RPoly& b) {
    a = trim(a);
    if (a.size() < b.size()) return {RPoly{}, a};
    RPoly q(a.size() - b.size() + 1, Rat(0));
    for (std::size_t shift = q.size(); shift-- > 0;) {
        Rat c = a[shift + b.size() - 1] / b.back();
        q[shift] = c;
        for (std::size_t j = 0; j < b.size(); ++j) a[shift + j] -= c * b[j];
    }
    return {trim(q), trim(a)};
}

RPoly gcd(RPoly a, RPoly b) {
    a = monic(a);
    b = monic(b);
    while (!b.empty()) {
        RPoly r = divmod(a, b).second;
        a = b;
        b = monic(r);
    }
    return monic(a);
}

RPoly sub(const RPoly& a, const RPoly& b) {
    RPoly r(std::max(a.size(), b.size()), Rat(0));
    for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
    for (std::size_t i = 0; i < b.size(); ++i) r[i] -= b[i];
    return trim(r);
}

bool is_one(const RPoly& p) { return p.size() == 1 && p[0] == 1; }

RPoly to_rpoly(const std::vector<std::int64_t>& c) {
    RPoly p;
    for (auto v : c) p.emplace_back(static_cast<long long>(v));
    return trim(p);
}

// Yun's algorithm: squarefree factors with multiplicities.
std::vector<std::pair<RPoly, int>> squarefree_factors(const RPoly& p) {
    std::vector<std::pair<RPoly, int>> out;
    RPoly a = monic(p);
    RPoly b = derivative(a);
    RPoly c = gcd(a, b);
    RPoly w = divmod(a, c).first;
    RPoly y = divmod(b, c).first;
    RPoly z = sub(y, derivative(w));
    int i = 1;
    while (w.size() > 1) {
        RPoly g = gcd(w, z);
        if (g.size() > 1) out.emplace_back(g, i);
        w = divmod(w, g).first;
        y = divmod(z, g).first;
        z = sub(y, derivative(w));
        ++i;
    }
    return out;
}

using LD = long double;
using CLD = std::complex<LD>;

std::vector<CLD> roots_simple(const RPoly& g) {
    const int d = static_cast<int>(g.size()) - 1;
    std::vector<LD> c(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) c[i] = static_cast<LD>(g[i] / g.back());
    std::vector<CLD> roots;
    if (d == 1) {
        roots.emplace_back(-c[0], 0);
        return roots;
    }
    using MatL = Eigen::Matrix<LD, Eigen::Dynamic, Eigen::Dynamic>;
    MatL comp = MatL::Zero(d, d);
    for (int i = 1; i < d; ++i) comp(i, i - 1) = 1;
    for (int i = 0; i < d; ++i) comp(i, d - 1) = -c[i];
    Eigen::EigenSolver<MatL> es(comp, false);
    for (int i = 0; i < d; ++i) roots.push_back(es.eigenvalues()[i]);
    // Newton polish; roots of a squarefree factor are simple.
    for (auto& z : roots) {
        for (int it = 0; it < 50; ++it) {
            CLD f = 0, df = 0;
            for (int k = d; k >= 0; --k) {
                df = df * z + f;
                f = f * z + c[k];
            }
            if (std::abs(df) == 0) break;
            CLD step = f / df;
            z -= step;
            if (std::abs(step) <= 1e-19L * std::max<LD>(1, std::abs(z))) break;
        }
    }
    return roots;
}

} // namespace

std::int64_t det_exact(const IntMatrix& M) {
    std::vector<std::int64_t> a(M.dim() * M.dim());
    for (int i = 0; i < M.dim(); ++i)
        for (int j = 0; j < M.dim(); ++j) a[i * M.dim() + j] = M.at(i, j);
    return bareiss(std::move(a), M.dim());
}

IntMatrix adjugate(const IntMatrix& M) {
    const int n = M.dim();
    IntMatrix adj(n);
    if (n == 1) {
        adj.at(0, 0) = 1;
        return adj;
    }
    std::vector<std::int64_t> minor((n - 1) * (n - 1));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            int p = 0;
            for (int r = 0; r < n; ++r) {
                if (r == i) continue;
                for (int c = 0; c < n; ++c)
                    if (c != j) minor[p++] = M.at(r, c);
            }
            std::int64_t cof = bareiss(minor, n - 1);
            adj.at(j, i) = ((i + j) % 2) ? checked::sub(0, cof) : cof;
        }
    return adj;
}

std::vector<std::int64_t> char_poly(const IntMatrix& M) {
    const int n = M.dim();
    std::vector<std::int64_t> c(n + 1, 0);
    c[n] = 1;
    IntMatrix Mk(n); // M_0 = 0
    for (int k = 1; k <= n; ++k) {
        IntMatrix next = M * Mk;
        for (int i = 0; i < n; ++i) next.at(i, i) = checked::add(next.at(i, i), c[n - k + 1]);
        Mk = next;
        IntMatrix AM = M * Mk;
        std::int64_t tr = 0;
        for (int i = 0; i < n; ++i) tr = checked::add(tr, AM.at(i, i));
        c[n - k] = -tr / k;
    }
    return c;
}

std::vector<double> eigen_moduli(const IntMatrix& M, double /*tol*/) {
    auto factors = squarefree_factors(to_rpoly(char_poly(M)));
    std::vector<double> mods;
    for (auto& [g, mult] : factors)
        for (auto& z : roots_simple(g))
            for (int k = 0; k < mult; ++k) mods.push_back(static_cast<double>(std::abs(z)));
    std::sort(mods.begin(), mods.end());
    return mods;
}

SpectralProfile analyze_dilation(const IntMatrix& M) {
    SpectralProfile prof;
    std::int64_t det = det_exact(M);
    prof.det_abs = det < 0 ? -det : det;
    prof.moduli = eigen_moduli(M);
    for (double v : prof.moduli)
        if (v <= 1.0 + 1e-6)
            fail(ErrorKind::NotExpanding, "dilation matrix is not expanding (eigenvalue modulus " + std::to_string(v) + ")");

    // Transitive merge of sorted moduli.
    std::vector<std::vector<double>> groups;
    for (double v : prof.moduli) {
        if (!groups.empty() && (v - groups.back().back()) <= 1e-6 * v)
            groups.back().push_back(v);
        else
            groups.push_back({v});
    }
    for (auto& g : groups) {
        double s = 0;
        for (double v : g) s += v;
        prof.groups.push_back({s / g.size(), static_cast<int>(g.size())});
    }
    prof.q = static_cast<int>(prof.groups.size());
    prof.r = prof.groups.back().r;

    bool iso = false;
    if (prof.q == 1) {
        RPoly p = to_rpoly(char_poly(M));
        RPoly g = gcd(p, derivative(p));
        if (is_one(g)) {
            iso = true;
        } else {
            // Minimal polynomial squarefree iff the squarefree part annihilates M.
            RPoly psf = divmod(monic(p), g).first;
            const int n = M.dim();
            std::vector<Rat> acc(n * n, Rat(0)), tmp(n * n);
            for (std::size_t k = psf.size(); k-- > 0;) {
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < n; ++j) {
                        Rat s = 0;
                        for (int l = 0; l < n; ++l) s += acc[i * n + l] * static_cast<long long>(M.at(l, j));
                        tmp[i * n + j] = s;
                    }
                for (int i = 0; i < n; ++i) tmp[i * n + i] += psf[k];
                acc.swap(tmp);
            }
            iso = std::all_of(acc.begin(), acc.end(), [](const Rat& v) { return v == 0; });
        }
    }
    prof.isotropic = iso;
    return prof;
}

LatticeSolver::LatticeSolver(const IntMatrix& M) : adj_(adjugate(M)), det_(det_exact(M)) {
    if (det_ == 0) fail(ErrorKind::InvalidInput, "dilation matrix is singular");
}

std::optional<IVec> LatticeSolver::solve(const IVec& v) const {
    const int n = adj_.dim();
    IVec x(n);
    for (int i = 0; i < n; ++i) {
        __int128 s = 0;
        for (int j = 0; j < n; ++j) s += static_cast<__int128>(adj_.at(i, j)) * v[j];
        if (s % det_ != 0) return std::nullopt;
        x[i] = narrow(s / det_);
    }
    return x;
}

bool in_lattice_M(const IntMatrix& M, const IVec& v) { return LatticeSolver(M).contains(v); }

std::vector<double> inverse_double(const IntMatrix& M) {
    IntMatrix adj = adjugate(M);
    const double det = static_cast<double>(det_exact(M));
    std::vector<double> inv(M.dim() * M.dim());
    for (int i = 0; i < M.dim(); ++i)
        for (int j = 0; j < M.dim(); ++j) inv[i * M.dim() + j] = static_cast<double>(adj.at(i, j)) / det;
    return inv;
}

} // namespace tileregu

namespace tileregu {

const char* kind_name(ErrorKind k) noexcept {
    switch (k) {
    case ErrorKind::WrongCount: return "WrongCount";
    case ErrorKind::MissingZero: return "MissingZero";
    case ErrorKind::EquivalentPair: return "EquivalentPair";
    case ErrorKind::Overflow: return "Overflow";
    case ErrorKind::NotExpanding: return "NotExpanding";
    case ErrorKind::CapExceeded: return "CapExceeded";
    case ErrorKind::NotInvariant: return "NotInvariant";
    case ErrorKind::NotStochastic: return "NotStochastic";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::Unsupported: return "Unsupported";
    case ErrorKind::BudgetExceeded: return "BudgetExceeded";
    case ErrorKind::GridTooLarge: return "GridTooLarge";
    case ErrorKind::EpsTooSmall: return "EpsTooSmall";
    case ErrorKind::DegenerateData: return "DegenerateData";
    case ErrorKind::TooLarge: return "TooLarge";
    case ErrorKind::IoError: return "IoError";
    case ErrorKind::InvalidInput: return "InvalidInput";
    }
    return "Unknown";
}

} // namespace tileregu
