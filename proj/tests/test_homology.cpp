#include "lensid/generators.hpp"
#include "lensid/homology.hpp"
#include "lensid/numbertheory.hpp"
#include "lensid/twisted.hpp"

#include <gtest/gtest.h>

#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

using namespace lensid;

namespace {

Triangulation data_file(const std::string& name) {
    std::ifstream in(std::string(LENSID_TEST_DATA) + "/" + name);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_tri(ss.str());
}

bool unimodular(const IntegerMatrix& m) {
    Integer d = determinant(m);
    return d == 1 || d == -1;
}

void check_snf(const IntegerMatrix& A) {
    SmithForm f = smith_normal_form(A);
    EXPECT_EQ(f.U * A * f.V, f.S);
    EXPECT_TRUE(unimodular(f.U));
    EXPECT_TRUE(unimodular(f.V));
    for (std::size_t i = 0; i < f.S.rows(); ++i)
        for (std::size_t j = 0; j < f.S.cols(); ++j)
            if (i != j) {
                EXPECT_EQ(f.S(i, j), 0);
            }
    auto d = f.diagonal();
    ASSERT_EQ(d.size(), f.rank);
    for (std::size_t i = 0; i + 1 < d.size(); ++i) {
        EXPECT_GT(d[i], 0);
        EXPECT_EQ(mod(d[i + 1], d[i]), 0);
    }
}

std::vector<std::pair<unsigned, unsigned>> units_upto(unsigned nmax) {
    std::vector<std::pair<unsigned, unsigned>> out;
    for (unsigned n = 1; n <= nmax; ++n)
        for (unsigned k = (n == 1 ? 0 : 1); k < std::max(n, 1u); ++k)
            if (n == 1 || std::gcd(n, k) == 1)
                out.push_back({n, k});
    return out;
}

} // namespace

TEST(Smith, Examples) {
    IntegerMatrix A(2, 2, Integer(0));
    A(0, 0) = 2;
    A(1, 1) = 3;
    SmithForm f = smith_normal_form(A);
    EXPECT_EQ(f.diagonal(), (std::vector<Integer>{1, 6}));
    check_snf(A);

    SmithForm id = smith_normal_form(identity_matrix(4));
    EXPECT_EQ(id.S, identity_matrix(4));
    EXPECT_EQ(id.U, identity_matrix(4));
    EXPECT_EQ(id.V, identity_matrix(4));

    IntegerMatrix z(3, 2, Integer(0));
    EXPECT_EQ(smith_normal_form(z).rank, 0u);
}

TEST(Smith, RandomMatricesMultiplyBack) {
    std::mt19937_64 g(17);
    for (int t = 0; t < 200; ++t) {
        std::size_t r = 1 + g() % 7, c = 1 + g() % 7;
        IntegerMatrix A(r, c, Integer(0));
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < c; ++j)
                A(i, j) = static_cast<long>(g() % 41) - 20;
        check_snf(A);
    }
}

TEST(Boundary, SquaresToZero) {
    for (auto [n, k] : units_upto(20)) {
        CellStructure cs = cells(fan_lens(n, k));
        BoundaryMatrices b = boundary_matrices(cs);
        EXPECT_TRUE(is_zero_matrix(b.d1 * b.d2));
        EXPECT_TRUE(is_zero_matrix(b.d2 * b.d3));
        EXPECT_EQ(cs.euler_characteristic(), 0);
    }
}

TEST(H1, FanAndLayered) {
    EXPECT_EQ(h1(cells(fan_lens(7, 2))).order, 7);
    H1Result s3 = h1(cells(fan_lens(1, 1)));
    EXPECT_TRUE(s3.cyclic);
    EXPECT_EQ(s3.order, 1);
    for (auto [n, k] : units_upto(50)) {
        H1Result h = h1(cells(fan_lens(n, k)));
        EXPECT_TRUE(h.cyclic);
        EXPECT_EQ(h.order, Integer(n)) << n << " " << k;
    }
}

TEST(H1, KleinFourFixture) {
    H1Result h = h1(cells(data_file("klein4.tri")));
    EXPECT_FALSE(h.cyclic);
    EXPECT_EQ(h.factors, (std::vector<Integer>{2, 2}));
    EXPECT_THROW(generator_cocycle(cells(data_file("klein4.tri")), h), NotCyclic);
}

TEST(H1, FakeSixFixture) {
    H1Result h = h1(cells(data_file("fake6.tri")));
    EXPECT_TRUE(h.cyclic);
    EXPECT_EQ(h.order, 6);
}

TEST(H1, InfiniteFixture) {
    // H_1 = Z: one free summand, not a finite cyclic group
    H1Result h = h1(cells(data_file("free_h1.tri")));
    EXPECT_FALSE(h.cyclic);
    EXPECT_EQ(h.factors, std::vector<Integer>{Integer(0)});
    EXPECT_THROW(generator_cocycle(cells(data_file("free_h1.tri")), h), NotCyclic);
}

TEST(Cocycle, GeneratesWithFullOrder) {
    for (auto [n, k] : units_upto(30)) {
        if (n < 2)
            continue;
        for (const Triangulation& t : {fan_lens(n, k), layered_lens_nk(n, k)}) {
            CellStructure cs = cells(t);
            Cocycle w = generator_cocycle(cs, Integer(n));
            EXPECT_TRUE(is_cocycle(cs, w));
            EXPECT_TRUE(is_coboundary(cs, w, Integer(n)));
            for (const auto& [p, e] : factor(Integer(n)))
                EXPECT_FALSE(is_coboundary(cs, w, Integer(n) / p)) << n << " " << k;
        }
    }
}

TEST(Cocycle, ZeroOnTreeAndRejectsTrivial) {
    CellStructure cs = cells(fan_lens(2, 1));
    H1Result h = h1(cs);
    Cocycle w = generator_cocycle(cs, h);
    bool nonzero = false;
    for (std::size_t e = 0; e < cs.count(1); ++e) {
        if (h.tree.in_tree[e]) {
            EXPECT_EQ(w.values[e], 0);
        }
        nonzero = nonzero || w.values[e] == 1;
    }
    EXPECT_TRUE(nonzero);
    EXPECT_THROW(generator_cocycle(cells(fan_lens(1, 1)), Integer(1)), std::domain_error);
}

TEST(Augmented, PositiveOrderAfterSignFix) {
    for (auto [n, k] : units_upto(20)) {
        Triangulation t = fan_lens(n, k);
        CellStructure cs = cells(t);
        auto orient = coherent_orientation(t);
        SignFix fix = orientation_sign_fix(cs, orient);
        EXPECT_EQ(fix.augmented_torsion, Rational(n));
        EXPECT_EQ(augmented_rational_torsion(cs, orient, fix.signs), Rational(n));
        // negating one 2-cell flips the sign
        CellSigns s = fix.signs;
        s.sign[2][0] = -s.sign[2][0];
        EXPECT_EQ(augmented_rational_torsion(cs, orient, s), Rational(-static_cast<long>(n)));
    }
}

TEST(Augmented, ModularSignFixMatchesRational) {
    for (auto [n, k] : units_upto(30)) {
        if (n < 2)
            continue;
        for (const Triangulation& t : {fan_lens(n, k), layered_lens_nk(n, k), mirror(fan_lens(n, k))}) {
            CellStructure cs = cells(t);
            auto orient = coherent_orientation(t);
            SignFix exact = orientation_sign_fix(cs, orient);
            SignFix fast = orientation_sign_fix(cs, orient, Integer(n));
            EXPECT_EQ(fast.flipped, exact.flipped) << n << " " << k;
            EXPECT_EQ(augmented_rational_torsion(cs, orient, fast.signs), Rational(n));
        }
    }
    Triangulation t = fan_lens(7, 2);
    CellStructure cs = cells(t);
    EXPECT_THROW(orientation_sign_fix(cs, coherent_orientation(t), Integer(5)), std::logic_error);
}

TEST(Twisted, SubstitutingOneGivesUntwisted) {
    for (auto [n, k] : units_upto(15)) {
        if (n < 2)
            continue;
        CellStructure cs = cells(fan_lens(n, k));
        Cocycle w = generator_cocycle(cs, Integer(n));
        CellSigns signs = CellSigns::identity(cs);
        ExponentComplex X = twisted_exponent_complex(cs, w, signs);
        BoundaryMatrices b = boundary_matrices(cs, &signs);
        EXPECT_EQ(at_one(X.d[0]), b.d1);
        EXPECT_EQ(at_one(X.d[1]), b.d2);
        EXPECT_EQ(at_one(X.d[2]), b.d3);
        EXPECT_TRUE(is_zero(compose(X.d[0], X.d[1], X.n)));
        EXPECT_TRUE(is_zero(compose(X.d[1], X.d[2], X.n)));
    }
}

TEST(Twisted, CoboundaryShiftIsAPowerOfZeta) {
    std::mt19937_64 g(8);
    for (auto [n, k] : units_upto(13)) {
        if (n < 5)
            continue;
        CellStructure cs = cells(layered_lens_nk(n, k));
        Cocycle w = generator_cocycle(cs, Integer(n));
        Cocycle w2 = w;
        std::vector<Integer> phi(cs.count(0));
        for (auto& x : phi)
            x = static_cast<unsigned long>(g() % n);
        for (std::size_t e = 0; e < cs.count(1); ++e) {
            auto [a, b] = edge_ends(cs, e);
            w2.values[e] = mod(w2.values[e] + phi[b] - phi[a], Integer(n));
        }
        ASSERT_TRUE(is_cocycle(cs, w2));
        CellSigns signs = CellSigns::identity(cs);
        Rng rng(n);
        Integer ell = find_prime_1modn(Integer(n), rng).ell;
        auto z = *sample_root_of_unity(ell, Integer(n), factor(Integer(n)), rng);
        Integer f1 = twisted_torsion(cs, w, signs, ell, z.zeta);
        Integer f2 = twisted_torsion(cs, w2, signs, ell, z.zeta);
        Integer ratio = f2 * invmod(f1, ell) % ell;
        bool power = false;
        Integer p = 1;
        for (unsigned c = 0; c < n && !power; ++c, p = p * z.zeta % ell)
            power = p == ratio;
        EXPECT_TRUE(power) << n << " " << k;
    }
}

TEST(Twisted, TrivialZetaIsNotAcyclic) {
    CellStructure cs = cells(fan_lens(5, 2));
    Cocycle w = generator_cocycle(cs, Integer(5));
    EXPECT_THROW(twisted_torsion(cs, w, CellSigns::identity(cs), Integer(11), Integer(1)), NotAcyclic);
}
