#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "tileregu/attractor.hpp"

namespace tileregu {

struct IntDense {
    std::size_t rows = 0, cols = 0;
    std::vector<std::int64_t> a;

    IntDense() = default;
    IntDense(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c, 0) {}
    std::int64_t& at(std::size_t i, std::size_t j) { return a[i * cols + j]; }
    std::int64_t at(std::size_t i, std::size_t j) const { return a[i * cols + j]; }
    bool operator==(const IntDense&) const = default;
};

// A_delta = T_delta restricted to the zero-sum subspace W, in the basis e_i = u_i - u_{i+1}.
struct RestrictedFamily {
    std::size_t dim = 0;
    std::vector<IntDense> mats;
};

RestrictedFamily restrict_to_W(const std::vector<SimpleMatrix>& mats, std::size_t N);
RestrictedFamily restrict_to_W(const TransitionFamily& fam);

// X -> (1/m) sum A^T X A on symmetric d x d matrices; coordinates are
// X11..Xdd followed by the off-diagonals Xij (i<j) in lexicographic order.
struct LiftedOperator {
    std::size_t dim_sym = 0;
    Eigen::MatrixXd dense;
};

LiftedOperator lift_operator(const RestrictedFamily& res);

double spectral_radius_dense(const Eigen::MatrixXd& B);

struct Rho2Result {
    double rho2 = 0;
    double lambda_max = 0;
};

Rho2Result rho2_of_family(const RestrictedFamily& res);

// [1 - |T^k_0| / m^k]^(1/k) for k = 1..k_max, exact counts from the image DP.
std::vector<double> rho1_combinatorial(const TransitionFamily& fam, int k_max);

enum class BoundKind { Exact, LowerBoundOnAlpha };
const char* bound_kind_name(BoundKind b);

struct RegularityReport {
    LatticeSet S;
    std::size_t N = 0;
    double rho2 = 0;
    double lambda_max = 0;
    double rho1 = 0;
    double r = 0;
    double s = 0;
    double d = 0;
    double alpha = 0;
    bool exact = false;
    bool tile_verified = false;
    BoundKind bound_kind = BoundKind::Exact;
};

struct RegularityOptions {
    std::optional<bool> tile_verified;  // skips the raster tile check when set
    std::optional<LatticeSet> S;        // overrides the admissible set
};

RegularityReport regularity_report(const DilationSystem& sys, const RegularityOptions& opt = {});

// -ln(lambda)/ln(r) clamped into [0, 1]; lambda = 0 gives 1.
double regularity_from_lambda(double lambda_max, double r);

} // namespace tileregu
