#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "reachid/diagnostics.hpp"

using namespace reachid;

TEST(Genericity, BandPassFilterIsGeneric) {
    const LinearSystem sys(companion(Vector{3, 2, 3, 6}), Vector{0, 0, 0, 1});
    const auto r = genericity_check(sys);
    EXPECT_EQ(r.verdict, Verdict::GenericAsymmetricOK);
    EXPECT_TRUE(r.a_invertible.ok);
    EXPECT_TRUE(r.eigs_distinct_A.ok);
    EXPECT_TRUE(r.b_eta_nonzero.ok);
    EXPECT_TRUE(r.controllable.ok);
}

TEST(Genericity, SingularDiagonalCounterexample) {
    const LinearSystem sys(Matrix{{0, 0}, {0, 1}}, Vector{0, 1});
    const auto r = genericity_check(sys);
    EXPECT_EQ(r.verdict, Verdict::NonGeneric);
    EXPECT_FALSE(r.a_invertible.ok);
    EXPECT_FALSE(r.b_eta_nonzero.ok);
    EXPECT_NEAR(r.b_eta_nonzero.margin, 0.0, 1e-12);
    EXPECT_FALSE(r.controllable.ok);
}

TEST(Genericity, PlanarExampleIsSymmetricGeneric) {
    const LinearSystem sys(Matrix{{2, 1}, {2, 3}}, Vector{0, 1});
    const auto r = genericity_check(sys, 1e-7, InputKind::Symmetric);
    EXPECT_EQ(r.verdict, Verdict::GenericSymmetricOK);
    // eigenvalues {1, 4}; of A^2 {1, 16}
    const auto [l1, l2] = oracle::eig2x2(sys.A());
    EXPECT_NEAR(r.eigs_distinct_A.margin, std::abs(l1 - l2), 1e-12);
    const auto [m1, m2] = oracle::eig2x2(sys.A() * sys.A());
    EXPECT_NEAR(std::abs(m1 - m2), 15.0, 1e-12);
    EXPECT_NEAR(r.eigs_distinct_A2.margin, 15.0, 1e-9);
}

TEST(Genericity, SquareEigenvalueCollisionOnlyMattersForSymmetricInput) {
    // eigenvalues +-1: distinct for A, repeated for A^2
    const LinearSystem sys(Matrix{{1, 0}, {0, -1}}, Vector{1, 1});
    const auto asym = genericity_check(sys, 1e-7, InputKind::Asymmetric);
    const auto sym = genericity_check(sys, 1e-7, InputKind::Symmetric);
    EXPECT_EQ(asym.verdict, Verdict::GenericAsymmetricOK);
    EXPECT_FALSE(sym.eigs_distinct_A2.ok);
    EXPECT_EQ(sym.verdict, Verdict::NonGeneric);
}

TEST(Genericity, VerdictConsistentWithFlags) {
    std::mt19937_64 rng(41);
    for (int k = 0; k < 200; ++k) {
        const std::size_t n = 2 + static_cast<std::size_t>(k % 3);
        const LinearSystem sys(oracle::random_matrix(rng, n, -2, 2), oracle::random_vector(rng, n, -2, 2));
        const auto r = genericity_check(sys, 1e-7, InputKind::Symmetric);
        EXPECT_EQ(r.asymmetric_ok, r.a_invertible.ok && r.eigs_distinct_A.ok && r.b_eta_nonzero.ok);
        EXPECT_EQ(r.symmetric_ok, r.asymmetric_ok && r.eigs_distinct_A2.ok);
        EXPECT_EQ(r.verdict == Verdict::GenericSymmetricOK, r.symmetric_ok);
    }
}

TEST(Genericity, ReproducibleBitForBit) {
    const LinearSystem sys(Matrix{{0.3, -1.2, 0.7}, {1.1, 0.4, -0.5}, {-0.9, 0.8, 0.2}}, Vector{1, -0.5, 0.25});
    const auto a = genericity_check(sys);
    const auto b = genericity_check(sys);
    EXPECT_EQ(a.b_eta_nonzero.margin, b.b_eta_nonzero.margin);
    EXPECT_EQ(a.eigs_distinct_A.margin, b.eigs_distinct_A.margin);
    EXPECT_EQ(a.eigenvalues, b.eigenvalues);
}

TEST(Genericity, RandomSystemsAreAlmostAlwaysGeneric) {
    // statistical smoke test; generic systems form an open dense set
    std::mt19937_64 rng(42);
    int generic = 0;
    const int total = 500;
    for (int k = 0; k < total; ++k) {
        const std::size_t n = 1 + static_cast<std::size_t>(k % 4);
        const LinearSystem sys(oracle::random_matrix(rng, n, -1, 1), oracle::random_vector(rng, n, -1, 1));
        if (genericity_check(sys).verdict == Verdict::GenericAsymmetricOK) ++generic;
    }
    EXPECT_GE(generic, 95 * total / 100);
}

TEST(Genericity, RejectsBadTolerance) { EXPECT_THROW(genericity_check(LinearSystem(Matrix{{1}}, Vector{1}), 0.0), Error); }
