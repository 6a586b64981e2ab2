#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "oracles.hpp"
#include "reachid/linalg.hpp"

using namespace reachid;

TEST(Inverse, MultipliesBackToIdentity) {
    const Matrix m{{4, 7, 2}, {3, 6, 1}, {2, 5, 3}};
    const Matrix inv = mat_inverse(m);
    EXPECT_LE(max_abs_diff(m * inv, Matrix::identity(3)), 1e-13);
    EXPECT_LE(max_abs_diff(inv * m, Matrix::identity(3)), 1e-13);
}

TEST(Inverse, KnownTwoByTwo) {
    const Matrix c{{0, 1}, {1, 3}};
    EXPECT_LE(max_abs_diff(mat_inverse(c), Matrix{{-3, 1}, {1, 0}}), 1e-15);
}

TEST(Inverse, SingularThrows) {
    try {
        mat_inverse(Matrix{{1, 2}, {2, 4}});
        FAIL() << "expected SingularMatrix";
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::SingularMatrix);
    }
    EXPECT_THROW(mat_inverse(Matrix(2, 3)), Error);
}

TEST(Inverse, RandomMatricesAgainstEigen) {
    std::mt19937_64 rng(11);
    int checked = 0;
    for (int k = 0; k < 1000; ++k) {
        const std::size_t n = 1 + static_cast<std::size_t>(k % 6);
        const Matrix m = oracle::random_matrix(rng, n, -3.0, 3.0);
        const Eigen::MatrixXd e = oracle::to_eigen(m);
        const double cond = e.norm() * e.inverse().norm();
        if (!(cond < 1e8)) continue;
        ++checked;
        const Matrix inv = mat_inverse(m);
        EXPECT_LE(max_abs_diff(m * inv, Matrix::identity(n)), 1e-15 * cond * n * 10) << "case " << k;
        EXPECT_LE(max_abs_diff(inv, oracle::from_eigen(e.inverse())), 1e-14 * cond * (1.0 + inv.max_abs()));
    }
    EXPECT_GT(checked, 990);
}

TEST(Rank, MatchesEigenOnLowRankProducts) {
    std::mt19937_64 rng(12);
    for (int k = 0; k < 300; ++k) {
        const std::size_t n = 2 + static_cast<std::size_t>(k % 5);
        const std::size_t r = 1 + static_cast<std::size_t>(rng() % n);
        Eigen::MatrixXd left = Eigen::MatrixXd::Random(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(r));
        Eigen::MatrixXd right = Eigen::MatrixXd::Random(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(n));
        const Matrix m = oracle::from_eigen(left * right);
        EXPECT_EQ(mat_rank(m, 1e-10), oracle::eigen_rank(m));
        EXPECT_EQ(mat_rank(m, 1e-10), r);
    }
}

TEST(Rank, InvariantUnderRowPermutation) {
    std::mt19937_64 rng(13);
    for (int k = 0; k < 200; ++k) {
        const std::size_t n = 3 + static_cast<std::size_t>(k % 3);
        Matrix m = oracle::random_matrix(rng, n, -1.0, 1.0);
        // make the last row a combination of the first two
        for (std::size_t j = 0; j < n; ++j) m(n - 1, j) = 2.0 * m(0, j) - m(1, j);
        std::vector<std::size_t> perm(n);
        for (std::size_t i = 0; i < n; ++i) perm[i] = i;
        std::shuffle(perm.begin(), perm.end(), rng);
        Matrix p(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) p(i, j) = m(perm[i], j);
        EXPECT_EQ(mat_rank(m, 1e-10), n - 1);
        EXPECT_EQ(mat_rank(p, 1e-10), n - 1);
    }
}

TEST(Rank, ZeroAndIdentity) {
    EXPECT_EQ(mat_rank(Matrix(3, 3), 1e-12), 0u);
    EXPECT_EQ(mat_rank(Matrix::identity(4), 1e-12), 4u);
    EXPECT_EQ(min_relative_pivot(Matrix{{0, 0}, {0, 1}}), 0.0);
}

TEST(CharacteristicPolynomial, TwoByTwoIsTraceAndDeterminant) {
    const Matrix m{{2, 1}, {2, 3}};
    const auto c = characteristic_polynomial(m);
    ASSERT_EQ(c.size(), 3u);
    EXPECT_DOUBLE_EQ(c[0], 4.0);   // det
    EXPECT_DOUBLE_EQ(c[1], -5.0);  // -trace
    EXPECT_DOUBLE_EQ(c[2], 1.0);
}

TEST(CharacteristicPolynomial, CompanionMatrixGivesItsCoefficients) {
    const auto c = characteristic_polynomial(companion(Vector{3, 2, 3, 6}));
    const std::vector<double> want{3, 2, 3, 6, 1};
    ASSERT_EQ(c.size(), want.size());
    for (std::size_t i = 0; i < want.size(); ++i) EXPECT_NEAR(c[i], want[i], 1e-12);
}

TEST(PolynomialRoots, RealAndComplex) {
    // (x - 1)(x - 2)(x - 3)
    const std::vector<double> cubic{-6, 11, -6, 1};
    const auto r = polynomial_roots(cubic);
    ASSERT_EQ(r.size(), 3u);
    EXPECT_NEAR(r[0].real(), 3.0, 1e-12);
    EXPECT_NEAR(r[1].real(), 2.0, 1e-12);
    EXPECT_NEAR(r[2].real(), 1.0, 1e-12);
    for (const auto& z : r) EXPECT_EQ(z.imag(), 0.0);

    const std::vector<double> circle{1, 0, 1};  // x^2 + 1
    const auto c = polynomial_roots(circle);
    ASSERT_EQ(c.size(), 2u);
    EXPECT_NEAR(c[0].imag(), 1.0, 1e-12);
    EXPECT_NEAR(c[1].imag(), -1.0, 1e-12);
    EXPECT_EQ(c[0], std::conj(c[1]));
}

TEST(Eigenvalues, TwoByTwoAgainstQuadraticFormula) {
    std::mt19937_64 rng(14);
    for (int k = 0; k < 500; ++k) {
        const Matrix m = oracle::random_matrix(rng, 2, -3.0, 3.0);
        const auto [a, b] = oracle::eig2x2(m);
        const auto got = eigenvalues(m);
        EXPECT_LE(oracle::spectrum_distance(got, {a, b}), 1e-9 * (1.0 + m.max_abs())) << "case " << k;
    }
}

TEST(Eigenvalues, PaperPlanarMatrix) {
    const auto e = eigenvalues(Matrix{{2, 1}, {2, 3}});
    ASSERT_EQ(e.size(), 2u);
    EXPECT_NEAR(e[0].real(), 4.0, 1e-13);
    EXPECT_NEAR(e[1].real(), 1.0, 1e-13);
}

TEST(Eigenvalues, RandomAgainstEigen) {
    std::mt19937_64 rng(15);
    for (int k = 0; k < 300; ++k) {
        const std::size_t n = 1 + static_cast<std::size_t>(k % 6);
        const Matrix m = oracle::random_matrix(rng, n, -2.0, 2.0);
        const auto got = eigenvalues(m);
        const auto want = oracle::eigen_eigenvalues(m);
        EXPECT_LE(oracle::spectrum_distance(got, want), 1e-7 * (1.0 + m.frobenius())) << "case " << k;
    }
}

TEST(Eigenvalues, SimilarityInvariance) {
    std::mt19937_64 rng(16);
    for (int k = 0; k < 200; ++k) {
        const std::size_t n = 2 + static_cast<std::size_t>(k % 4);
        const Matrix a = oracle::random_matrix(rng, n, -2.0, 2.0);
        const Matrix p = oracle::random_matrix(rng, n, -1.0, 1.0) + Matrix::identity(n) * 3.0;
        const Matrix b = p * a * mat_inverse(p);
        EXPECT_LE(oracle::spectrum_distance(eigenvalues(a), eigenvalues(b)), 1e-6 * (1.0 + a.frobenius()))
            << "case " << k;
    }
}

TEST(Eigenvalues, ConjugatePairsAreExact) {
    const auto e = eigenvalues(Matrix{{0, -2}, {2, 0}});
    ASSERT_EQ(e.size(), 2u);
    EXPECT_EQ(e[0], std::conj(e[1]));
    EXPECT_NEAR(std::abs(e[0]), 2.0, 1e-13);
}

TEST(LeftEigenvector, SatisfiesDefinitionAndMatchesEigen) {
    std::mt19937_64 rng(17);
    for (int k = 0; k < 200; ++k) {
        const std::size_t n = 2 + static_cast<std::size_t>(k % 4);
        const Matrix m = oracle::random_matrix(rng, n, -2.0, 2.0);
        Eigen::EigenSolver<Eigen::MatrixXd> es(oracle::to_eigen(m).transpose());
        for (const auto& lambda : eigenvalues(m)) {
            const auto eta = left_eigenvector(m, lambda);
            EXPECT_LE(left_eigen_residual(m, lambda, eta), 1e-8 * m.frobenius());
            // Eigen's eigenvector of m^T for the nearest eigenvalue spans the same line
            Eigen::Index best = 0;
            for (Eigen::Index i = 1; i < es.eigenvalues().size(); ++i)
                if (std::abs(es.eigenvalues()[i] - lambda) < std::abs(es.eigenvalues()[best] - lambda)) best = i;
            const Eigen::VectorXcd v = es.eigenvectors().col(best).normalized();
            // |<eta, v>| = 1 when collinear (both unit length)
            std::complex<double> herm = 0.0;
            for (std::size_t i = 0; i < n; ++i) herm += eta[i] * std::conj(v[static_cast<Eigen::Index>(i)]);
            EXPECT_NEAR(std::abs(herm), 1.0, 1e-6) << "case " << k;
        }
    }
}

TEST(LeftEigenvector, DiagonalCase) {
    const Matrix m{{0, 0}, {0, 1}};
    const auto eta0 = left_eigenvector(m, 0.0);
    const auto eta1 = left_eigenvector(m, 1.0);
    EXPECT_NEAR(std::abs(eta0[0]), 1.0, 1e-12);
    EXPECT_NEAR(std::abs(eta0[1]), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(eta1[1]), 1.0, 1e-12);
    EXPECT_GT(eta1[1].real(), 0.0);
}
