#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tileregu/algebra.hpp"

namespace tileregu {

struct DigitSet {
    std::vector<IVec> digits; // digits[0] is the zero vector
    std::size_t size() const { return digits.size(); }
};

DigitSet validate_digits(const IntMatrix& M, const std::vector<IVec>& digits);

// Finite set of lattice points kept in ascending lexicographic order.
class LatticeSet {
public:
    LatticeSet() = default;
    LatticeSet(std::vector<IVec> pts); // sorts and deduplicates

    const std::vector<IVec>& points() const { return pts_; }
    std::size_t size() const { return pts_.size(); }
    bool empty() const { return pts_.empty(); }
    const IVec& operator[](std::size_t i) const { return pts_[i]; }

    std::optional<std::size_t> index_of(const IVec& v) const;
    bool contains(const IVec& v) const { return index_of(v).has_value(); }
    bool subset_of(const LatticeSet& o) const;
    LatticeSet united(const LatticeSet& o) const;

    bool operator==(const LatticeSet&) const = default;

private:
    std::vector<IVec> pts_;
};

LatticeSet to_lattice_set(const DigitSet& d);

struct DilationSystem {
    IntMatrix M;
    SpectralProfile profile;
    DigitSet D;
    DigitSet Delta;
    std::string name;

    int dim() const { return M.dim(); }
    std::size_t m() const { return D.size(); }
};

// Default basic digits: {0..m-1} on the line, D itself in higher dimensions.
DilationSystem make_system(const IntMatrix& M, const std::vector<IVec>& digits,
                           const std::optional<std::vector<IVec>>& basic_digits = std::nullopt,
                           std::string name = {});

LatticeSet eta_step(const LatticeSet& X, const LatticeSet& supp, const DigitSet& Delta, const IntMatrix& M);

constexpr std::size_t kDefaultClosureCap = 100000;

LatticeSet invariant_closure(const LatticeSet& K, const LatticeSet& supp, const DigitSet& Delta, const IntMatrix& M,
                             std::size_t cap = kDefaultClosureCap);

struct GammaBox {
    std::vector<double> lo, hi;
    bool certified = false;
    double diameter() const; // longest side
};

GammaBox gamma_outer_box(const IntMatrix& M, const LatticeSet& supp, double tol = 1e-12);

// Lattice points a with (a + QBox) meeting GammaBox, both boxes inflated by margin.
LatticeSet box_seed(const DilationSystem& sys, double margin = 1e-9);

LatticeSet admissible_set(const DilationSystem& sys);

struct SimpleMatrix {
    std::size_t N = 0;
    std::vector<std::uint32_t> col_to_row;

    int entry(std::size_t row, std::size_t col) const { return col_to_row[col] == row ? 1 : 0; }
    bool is_permutation() const;
    bool operator==(const SimpleMatrix&) const = default;
};

struct TransitionFamily {
    LatticeSet S;
    std::vector<SimpleMatrix> mats;
    std::size_t N() const { return S.size(); }
};

TransitionFamily transition_matrices(const DilationSystem& sys, const LatticeSet& S);

} // namespace tileregu
