#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "reachid/io.hpp"
#include "reachid/reach.hpp"

using namespace reachid;

namespace {

const LinearSystem planar(Matrix{{2, 1}, {2, 3}}, Vector{0, 1});

ReachSequence fixture(const char* name) {
    return io::parse_reach_file(io::read_file(std::string(REACHID_DATA_DIR) + "/" + name));
}

}  // namespace

TEST(LinearSystem, Validation) {
    EXPECT_THROW(LinearSystem(Matrix(2, 3), Vector{1, 0}), Error);
    EXPECT_THROW(LinearSystem(Matrix::identity(2), Vector{1, 0, 0}), Error);
    EXPECT_THROW(LinearSystem(Matrix::identity(2), Vector{0, 0}), Error);
    EXPECT_THROW(LinearSystem(Matrix{{NAN, 0}, {0, 1}}, Vector{1, 0}), Error);
    const auto neg = -planar;
    EXPECT_EQ(neg.A(), (Matrix{{-2, -1}, {-2, -3}}));
    EXPECT_EQ(system_distance(planar, neg), 6.0);
}

TEST(IntervalInput, SymmetryAndValidation) {
    EXPECT_THROW(IntervalInput(1, 1), Error);
    EXPECT_THROW(IntervalInput(2, 1), Error);
    EXPECT_TRUE(IntervalInput(-1, 1).symmetric(1e-9));
    EXPECT_FALSE(IntervalInput(0, 1).symmetric(1e-9));
    EXPECT_DOUBLE_EQ(IntervalInput(2, 5).mid(), 3.5);
    EXPECT_DOUBLE_EQ(IntervalInput(2, 5).half_width(), 1.5);
}

TEST(Companion, LastRowIsNegatedCoefficients) {
    const Matrix a = companion(Vector{3, 2, 3, 6});
    EXPECT_EQ(a(0, 1), 1.0);
    EXPECT_EQ(a(2, 3), 1.0);
    EXPECT_EQ(a.row(3), (Vector{-3, -2, -3, -6}));
}

TEST(Reachable, PlanarExampleMatchesPrintedSets) {
    const auto printed = fixture("symmetric_2d.json");
    const auto sim = simulate_reach_sequence(planar, IntervalInput(-1, 1), 4);
    const DirectionSampler dirs(2);
    for (std::size_t t = 1; t <= 4; ++t) {
        EXPECT_TRUE(sets_equal(sim.at(t), printed.at(t), dirs, 1e-12)) << "t = " << t;
        EXPECT_EQ(canonicalize(sim.at(t)).size(), printed.at(t).size()) << "t = " << t;
    }
}

TEST(Reachable, RejectedCandidateHasVertex35_82) {
    const LinearSystem other(Matrix{{8, -1}, {20, -3}}, Vector{0, -1});
    const auto r4 = simulate_reach_sequence(other, IntervalInput(-1, 1), 4).at(4);
    bool found = false;
    for (const auto& v : r4.vertices()) found = found || max_abs_diff(v, Vector{35, 82}) < 1e-12;
    EXPECT_TRUE(found);
    EXPECT_EQ(r4.size(), 8u);
}

TEST(Reachable, GeneratorsAndCenter) {
    const auto zs = reachable_zonotopes(planar, IntervalInput(0, 2), 3);
    ASSERT_EQ(zs.size(), 3u);
    EXPECT_EQ(zs[2].generators().size(), 3u);
    // center = sum_k A^k b (lo + hi) / 2 = b + Ab + A^2 b
    EXPECT_LE(max_abs_diff(zs[2].center(), Vector{0 + 1 + 5, 1 + 3 + 11}), 1e-12);
    EXPECT_THROW(reachable_zonotopes(planar, IntervalInput(0, 1), 0), Error);
}

TEST(BruteForce, AgreesWithZonotopes) {
    std::mt19937_64 rng(31);
    for (int k = 0; k < 40; ++k) {
        const std::size_t n = 2 + static_cast<std::size_t>(k % 2);
        const LinearSystem sys(oracle::random_matrix(rng, n, -1.5, 1.5), oracle::random_vector(rng, n, -1, 1));
        const auto u = oracle::random_asymmetric_input(rng);
        const auto zs = reachable_zonotopes(sys, u, 6);
        const DirectionSampler dirs(n, static_cast<std::uint64_t>(k));
        for (std::size_t t = 1; t <= 6; ++t) {
            const auto brute = brute_force_reach(sys, u, t);
            // independent support evaluation straight from the point list
            for (const auto& d : dirs)
                EXPECT_NEAR(support(zs[t - 1], d), oracle::support_points(brute.vertices(), d),
                            1e-9 * (1.0 + std::abs(support(zs[t - 1], d))));
        }
    }
}

TEST(BruteForce, HorizonLimit) {
    try {
        brute_force_reach(planar, IntervalInput(0, 1), 17);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::HorizonTooLarge);
    }
}
