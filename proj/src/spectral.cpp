#include "tileregu/spectral.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>

#include "image_dp.hpp"
#include "tileregu/error.hpp"
#include "tileregu/oracle.hpp"

namespace tileregu {

RestrictedFamily restrict_to_W(const std::vector<SimpleMatrix>& mats, std::size_t N) {
    RestrictedFamily res;
    res.dim = N == 0 ? 0 : N - 1;
    for (auto& T : mats) {
        if (T.N != N || T.col_to_row.size() != N) fail(ErrorKind::NotStochastic, "matrix size mismatch");
        for (auto r : T.col_to_row)
            if (r >= N) fail(ErrorKind::NotStochastic, "column has no unit entry inside the matrix");
        IntDense A(res.dim, res.dim);
        for (std::size_t i = 0; i < res.dim; ++i) {
            // image of u_i - u_{i+1}, re-expressed through partial sums
            const std::size_t p = T.col_to_row[i], q = T.col_to_row[i + 1];
            for (std::size_t r = 0; r < res.dim; ++r) A.at(r, i) = (p <= r ? 1 : 0) - (q <= r ? 1 : 0);
        }
        res.mats.push_back(std::move(A));
    }
    return res;
}

RestrictedFamily restrict_to_W(const TransitionFamily& fam) { return restrict_to_W(fam.mats, fam.N()); }

LiftedOperator lift_operator(const RestrictedFamily& res) {
    const std::size_t d = res.dim;
    std::vector<std::pair<std::size_t, std::size_t>> coords;
    for (std::size_t i = 0; i < d; ++i) coords.emplace_back(i, i);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = i + 1; j < d; ++j) coords.emplace_back(i, j);
    LiftedOperator L;
    L.dim_sym = coords.size();
    L.dense = Eigen::MatrixXd::Zero(L.dim_sym, L.dim_sym);
    if (res.mats.empty()) return L;
    for (std::size_t c = 0; c < coords.size(); ++c) {
        const auto [i, j] = coords[c];
        for (std::size_t r = 0; r < coords.size(); ++r) {
            const auto [k, l] = coords[r];
            std::int64_t s = 0;
            for (auto& A : res.mats) {
                if (i == j)
                    s += A.at(i, k) * A.at(i, l);
                else
                    s += A.at(i, k) * A.at(j, l) + A.at(j, k) * A.at(i, l);
            }
            L.dense(r, c) = static_cast<double>(s);
        }
    }
    L.dense /= static_cast<double>(res.mats.size());
    return L;
}

namespace {

// Gelfand limit ||B^(2^j)||^(1/2^j) with renormalisation.
double gelfand_radius(const Eigen::MatrixXd& B) {
    Eigen::MatrixXd P = B;
    double log_scale = 0, prev = -1;
    for (int j = 0; j < 80; ++j) {
        const double nrm = P.norm();
        if (nrm == 0) return 0.0;
        const double est = std::exp((log_scale + std::log(nrm)) / std::ldexp(1.0, j));
        if (prev > 0 && std::abs(est - prev) <= 1e-13 * est) return est;
        prev = est;
        P /= nrm;
        log_scale = 2 * (log_scale + std::log(nrm));
        P = P * P;
    }
    fail(ErrorKind::NoConvergence, "spectral radius did not converge; last estimate " + std::to_string(prev));
}

} // namespace

double spectral_radius_dense(const Eigen::MatrixXd& B) {
    if (B.rows() != B.cols()) fail(ErrorKind::InvalidInput, "spectral radius needs a square matrix");
    if (B.rows() == 0) return 0.0;
    if (B.rows() > 1000) fail(ErrorKind::TooLarge, "dense spectral radius limited to dimension 1000");
    Eigen::EigenSolver<Eigen::MatrixXd> es(B, false);
    if (es.info() != Eigen::Success) return gelfand_radius(B);
    const auto& ev = es.eigenvalues();
    Eigen::Index top = 0;
    ev.cwiseAbs().maxCoeff(&top);
    const double rho = std::abs(ev[top]);
    // A perturbed Jordan block splits into a cluster of radius ~eps^(1/size); its mean is well conditioned.
    std::complex<double> sum = 0;
    int count = 0;
    for (Eigen::Index i = 0; i < ev.size(); ++i)
        if (std::abs(ev[i] - ev[top]) <= 1e-3 * rho) sum += ev[i], ++count;
    return count > 1 ? std::abs(sum / double(count)) : rho;
}

Rho2Result rho2_of_family(const RestrictedFamily& res) {
    if (res.dim == 0 || res.mats.empty()) return {};
    const double lam = spectral_radius_dense(lift_operator(res).dense);
    return {std::sqrt(lam), lam};
}

std::vector<double> rho1_combinatorial(const TransitionFamily& fam, int k_max) {
    if (k_max < 1 || k_max > 60) fail(ErrorKind::InvalidInput, "k_max must be in 1..60");
    std::vector<std::vector<std::uint32_t>> maps;
    for (auto& T : fam.mats) maps.push_back(T.col_to_row);
    detail::ImageMapper mapper(maps, fam.N());
    auto counts = detail::nonsingleton_counts_exact(mapper, k_max);
    std::vector<double> out;
    boost::multiprecision::cpp_int denom = 1;
    for (int k = 1; k <= k_max; ++k) {
        denom *= static_cast<unsigned>(maps.size());
        const double pk = boost::multiprecision::cpp_rational(counts[k - 1], denom).convert_to<double>();
        out.push_back(std::pow(pk, 1.0 / k));
    }
    return out;
}

const char* bound_kind_name(BoundKind b) { return b == BoundKind::Exact ? "Exact" : "LowerBoundOnAlpha"; }

double regularity_from_lambda(double lambda_max, double r) {
    if (lambda_max <= 0) return 1.0;
    const double s = -std::log(lambda_max) / std::log(r);
    return std::min(1.0, std::max(0.0, s));
}

RegularityReport regularity_report(const DilationSystem& sys, const RegularityOptions& opt) {
    if (!sys.profile.isotropic)
        fail(ErrorKind::Unsupported,
             "anisotropic dilation matrix: the exact regularity formula needs the difference subspaces U_i");
    RegularityReport rep;
    rep.S = opt.S ? *opt.S : admissible_set(sys);
    rep.N = rep.S.size();
    auto fam = transition_matrices(sys, rep.S);
    auto rho = rho2_of_family(restrict_to_W(fam));
    rep.rho2 = rho.rho2;
    rep.lambda_max = rho.lambda_max;
    rep.rho1 = rho.lambda_max;
    rep.r = sys.profile.r;

    if (opt.tile_verified)
        rep.tile_verified = *opt.tile_verified;
    else
        rep.tile_verified = tile_check(sys).kind == TileVerdict::Kind::Tile;

    double raw = rep.lambda_max > 0 ? -std::log(rep.lambda_max) / std::log(rep.r) : 1.0;
    if (rep.tile_verified && (raw < -1e-9 || raw > 1 + 1e-9))
        throw std::logic_error("surface regularity outside [0,1]: " + std::to_string(raw));
    rep.s = regularity_from_lambda(rep.lambda_max, rep.r);
    rep.alpha = rep.s;
    rep.d = sys.dim() - rep.s;
    rep.exact = rep.tile_verified;
    rep.bound_kind = rep.tile_verified ? BoundKind::Exact : BoundKind::LowerBoundOnAlpha;
    return rep;
}

} // namespace tileregu
