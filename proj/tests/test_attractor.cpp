#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "properties.hpp"
#include "tileregu/attractor.hpp"
#include "tileregu/fixtures.hpp"
#include "tileregu/oracle.hpp"

using namespace tileregu;

namespace {

std::vector<IVec> line(std::initializer_list<std::int64_t> v) {
    std::vector<IVec> out;
    for (auto t : v) out.push_back({t});
    return out;
}

} // namespace

TEST_SUITE("attractor") {

TEST_CASE("digit validation examples") {
    DigitSet d = validate_digits(IntMatrix::from_rows({{3}}), line({0, 1, 5}));
    CHECK(d.size() == 3);
    CHECK(d.digits[0] == IVec{0});

    try {
        validate_digits(IntMatrix::from_rows({{3}}), line({0, 1, 4}));
        FAIL("expected EquivalentPair");
    } catch (const EquivalentPairError& e) {
        CHECK(e.kind() == ErrorKind::EquivalentPair);
        CHECK(e.first() == 1);
        CHECK(e.second() == 2);
        CHECK(std::string(e.what()).find("congruent") != std::string::npos);
    }

    CHECK_NOTHROW(validate_digits(IntMatrix::from_rows({{1, 1}, {-1, 1}}), {{0, 0}, {1, 0}}));
}

TEST_CASE("digit validation errors") {
    IntMatrix three = IntMatrix::from_rows({{3}});
    CHECK(kind_of([&] { validate_digits(three, line({0, 1})); }) == ErrorKind::WrongCount);
    CHECK(kind_of([&] { validate_digits(three, line({1, 2, 3})); }) == ErrorKind::MissingZero);
    CHECK(kind_of([&] { validate_digits(three, {{0}, {1, 2}, {2}}); }) == ErrorKind::InvalidInput);
    DigitSet moved = validate_digits(three, line({2, 0, 1}));
    CHECK(moved.digits[0] == IVec{0});
    CHECK(moved.size() == 3);
}

TEST_CASE("lattice sets are sorted and deduplicated") {
    LatticeSet s({{1, 0}, {0, 1}, {1, 0}, {-1, 5}});
    REQUIRE(s.size() == 3);
    CHECK(s[0] == IVec{-1, 5});
    CHECK(s[1] == IVec{0, 1});
    CHECK(s[2] == IVec{1, 0});
    CHECK(s.index_of({0, 1}) == std::optional<std::size_t>(1));
    CHECK_FALSE(s.contains({2, 2}));
}

TEST_CASE("eta step examples") {
    IntMatrix two = IntMatrix::from_rows({{2}});
    CHECK(eta_step(LatticeSet(line({0, 1, 2, 3, 4, 5, 6})), LatticeSet(line({0, 7})), DigitSet{line({0, 1})}, two) ==
          LatticeSet(line({0, 1, 2, 3, 4, 5, 6})));
    CHECK(eta_step(LatticeSet(line({0})), LatticeSet(line({0})), DigitSet{line({0})}, two) == LatticeSet(line({0})));
    CHECK(eta_step(LatticeSet(line({0})), LatticeSet(line({0, 1, 5})), DigitSet{line({0, 1, 2})},
                   IntMatrix::from_rows({{3}})) == LatticeSet(line({0, 1})));
}

TEST_CASE("eta step agrees with brute force in the plane") {
    IntMatrix M = IntMatrix::from_rows({{1, -2}, {1, 0}});
    LatticeSet X({{0, 0}, {1, 0}, {-1, 1}, {2, -3}});
    LatticeSet supp({{0, 0}, {1, 0}});
    DigitSet Delta{{{0, 0}, {1, 0}}};
    CHECK(eta_step(X, supp, Delta, M) == props::eta_oracle(X, supp, Delta, M));
}

TEST_CASE("invariant closure examples") {
    CHECK(invariant_closure(LatticeSet(line({0})), LatticeSet(line({0, 1, 5})), DigitSet{line({0, 1, 2})},
                            IntMatrix::from_rows({{3}})) == LatticeSet(line({0, 1, 2})));
    CHECK(invariant_closure(LatticeSet(line({0})), LatticeSet(line({0})), DigitSet{line({0})},
                            IntMatrix::from_rows({{2}})) == LatticeSet(line({0})));
}

TEST_CASE("invariant closure cap") {
    CHECK(kind_of([] {
              invariant_closure(LatticeSet(line({0})), LatticeSet(line({0, 7})), DigitSet{line({0, 1})},
                                IntMatrix::from_rows({{2}}), 3);
          }) == ErrorKind::CapExceeded);
}

TEST_CASE("gamma box examples") {
    const double tol = 1e-12;
    GammaBox b = gamma_outer_box(IntMatrix::from_rows({{3}}), LatticeSet(line({0, 1, 5})), tol);
    CHECK(b.certified);
    CHECK(b.lo[0] >= -tol - 1e-15);
    CHECK(b.hi[0] <= 2.5 + tol + 1e-15);
    CHECK(b.lo[0] <= 0.0);
    CHECK(b.hi[0] >= 2.5);

    GammaBox z = gamma_outer_box(IntMatrix::from_rows({{2}}), LatticeSet(line({0})), tol);
    CHECK(z.lo[0] == doctest::Approx(0.0));
    CHECK(z.hi[0] == doctest::Approx(0.0));

    GammaBox u = gamma_outer_box(IntMatrix::from_rows({{2}}), LatticeSet(line({0, 1})), tol);
    CHECK(u.lo[0] == doctest::Approx(0.0));
    CHECK(u.hi[0] == doctest::Approx(1.0));
}

TEST_CASE("enumerated points stay inside the gamma box") {
    for (auto& name : tile_fixture_names()) {
        DilationSystem sys = system_fixture(name);
        GammaBox b = gamma_outer_box(sys.M, to_lattice_set(sys.D));
        PointCloud pts = enumerate_attractor(sys, sys.m() == 2 ? 16 : 9);
        bool inside = true;
        for (std::size_t p = 0; p < pts.size(); ++p)
            for (int i = 0; i < pts.n; ++i) {
                const double x = pts.coords[p * pts.n + i];
                inside = inside && x >= b.lo[i] - 1e-9 && x <= b.hi[i] + 1e-9;
            }
        CHECK_MESSAGE(inside, name);
    }
}

TEST_CASE("admissible set examples") {
    DilationSystem ex20 = system_fixture("ex20");
    LatticeSet S = admissible_set(ex20);
    CHECK(LatticeSet(line({0, 1, 2})).subset_of(S));

    // a + [0,1] meets [0,1] exactly for a in {-1, 0, 1}
    DilationSystem seg = system_fixture("segment");
    LatticeSet T = admissible_set(seg);
    std::vector<IVec> brute;
    for (std::int64_t a = -5; a <= 5; ++a)
        if (a + 1.0 >= 0.0 && a <= 1.0) brute.push_back({a});
    CHECK(LatticeSet(brute).subset_of(T));
    CHECK(T.contains({0}));

    DilationSystem dragon = system_fixture("dragon");
    LatticeSet seven({{0, 0}, {1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, 1}, {-1, -1}});
    LatticeSet Sd = admissible_set(dragon);
    CHECK(seven.subset_of(Sd));
    CHECK(eta_step(Sd, to_lattice_set(dragon.D), dragon.Delta, dragon.M).subset_of(Sd));
}

TEST_CASE("transition matrices of the M = 3 example") {
    DilationSystem ex20 = system_fixture("ex20");
    TransitionFamily fam = transition_matrices(ex20, LatticeSet(line({0, 1, 2})));
    REQUIRE(fam.mats.size() == 3);
    const int T0[3][3] = {{1, 0, 0}, {0, 0, 1}, {0, 1, 0}};
    const int T1[3][3] = {{1, 1, 0}, {0, 0, 0}, {0, 0, 1}};
    const int T2[3][3] = {{0, 1, 1}, {1, 0, 0}, {0, 0, 0}};
    const int (*expect[3])[3] = {T0, T1, T2};
    for (int t = 0; t < 3; ++t)
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) CHECK(fam.mats[t].entry(i, j) == expect[t][i][j]);
}

TEST_CASE("transition matrices of the unit interval") {
    DilationSystem seg = system_fixture("segment");
    TransitionFamily fam = transition_matrices(seg, LatticeSet(line({0})));
    REQUIRE(fam.mats.size() == 2);
    CHECK(fam.mats[0].col_to_row == std::vector<std::uint32_t>{0});
    CHECK(fam.mats[1].col_to_row == std::vector<std::uint32_t>{0});
}

TEST_CASE("a non-invariant index set is rejected") {
    DilationSystem ex20 = system_fixture("ex20");
    CHECK(kind_of([&] { transition_matrices(ex20, LatticeSet(line({0, 1}))); }) == ErrorKind::NotInvariant);
}

TEST_CASE("every transition matrix is simple and column-stochastic") {
    auto o = props::transition_families_simple();
    CHECK_MESSAGE(o.ok, o.detail);
}

TEST_CASE("eta is monotone") {
    auto o = props::eta_monotone(200, 20240601);
    CHECK_MESSAGE(o.ok, o.detail);
}

TEST_CASE("rows outside the core vanish after finitely many steps") {
    auto o = props::zero_rows_eventually();
    CHECK_MESSAGE(o.ok, o.detail);
}

}

// The stated M = -2 set is not invariant: eta sends -4 to 2.
TEST_SUITE("known discrepancies") {

TEST_CASE("closure for M = -2") {
    CHECK(invariant_closure(LatticeSet(line({0})), LatticeSet(line({0, 7})), DigitSet{line({0, 1})},
                            IntMatrix::from_rows({{-2}})) == LatticeSet(line({-4, -2, -1, 0, 1})));
}

TEST_CASE("closures are minimal") {
    auto o = props::closure_minimal();
    CHECK_MESSAGE(o.ok, o.detail);
}

}
