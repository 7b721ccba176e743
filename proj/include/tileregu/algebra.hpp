#pragma once

#include <cstdint>
#include <initializer_list>
#include <optional>
#include <utility>
#include <vector>

namespace tileregu {

using IVec = std::vector<std::int64_t>;

constexpr int kMaxDim = 8;

class IntMatrix {
public:
    IntMatrix() = default;
    explicit IntMatrix(int n);
    static IntMatrix from_rows(const std::vector<IVec>& rows);
    static IntMatrix from_rows(std::initializer_list<std::initializer_list<std::int64_t>> rows);
    static IntMatrix identity(int n);

    int dim() const { return n_; }
    std::int64_t& at(int i, int j) { return a_[i * n_ + j]; }
    std::int64_t at(int i, int j) const { return a_[i * n_ + j]; }

    IVec apply(const IVec& v) const; // overflow-checked
    IntMatrix operator*(const IntMatrix& o) const;
    bool operator==(const IntMatrix& o) const = default;

private:
    int n_ = 0;
    std::vector<std::int64_t> a_;
};

std::int64_t det_exact(const IntMatrix& M);
IntMatrix adjugate(const IntMatrix& M);

// Monic characteristic polynomial, coefficients c[0..n] with c[n] = 1.
std::vector<std::int64_t> char_poly(const IntMatrix& M);

std::vector<double> eigen_moduli(const IntMatrix& M, double tol = 1e-9);

struct ModulusGroup {
    double r;
    int multiplicity;
    bool operator==(const ModulusGroup&) const = default;
};

struct SpectralProfile {
    std::vector<double> moduli; // ascending
    std::vector<ModulusGroup> groups;
    int q = 0;
    bool isotropic = false;
    double r = 0.0;
    std::int64_t det_abs = 0;

    bool operator==(const SpectralProfile&) const = default;
};

SpectralProfile analyze_dilation(const IntMatrix& M);

// Solves M x = v over the integers using a cached adjugate.
class LatticeSolver {
public:
    explicit LatticeSolver(const IntMatrix& M);
    std::optional<IVec> solve(const IVec& v) const;
    bool contains(const IVec& v) const { return solve(v).has_value(); }
    std::int64_t det() const { return det_; }

private:
    IntMatrix adj_;
    std::int64_t det_;
};

bool in_lattice_M(const IntMatrix& M, const IVec& v);

// Floating-point inverse (exact rational adj/det rounded once).
std::vector<double> inverse_double(const IntMatrix& M);

} // namespace tileregu
