#pragma once

// Forward reachable sets of x[i+1] = A x[i] + b u[i], x[0] = 0, u in [lo, hi].

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "reachid/error.hpp"
#include "reachid/linalg.hpp"
#include "reachid/setgeom.hpp"

namespace reachid {

class LinearSystem {
public:
    LinearSystem() = default;
    LinearSystem(Matrix a, Vector b) : a_(std::move(a)), b_(std::move(b)) {
        if (!a_.square() || a_.rows() != b_.size() || b_.empty())
            fail(ErrorKind::DimensionMismatch, "A must be n x n and b of length n");
        if (!a_.all_finite() || !b_.all_finite()) fail(ErrorKind::InvalidArgument, "non-finite system entry");
        if (b_.max_abs() == 0.0) fail(ErrorKind::InvalidArgument, "b must be nonzero");
    }

    std::size_t n() const noexcept { return b_.size(); }
    const Matrix& A() const noexcept { return a_; }
    const Vector& b() const noexcept { return b_; }

    LinearSystem operator-() const { return {-a_, -b_}; }

private:
    Matrix a_;
    Vector b_;
};

/// max(|A - A'|, |b - b'|) entrywise.
inline double system_distance(const LinearSystem& x, const LinearSystem& y) {
    if (x.n() != y.n()) fail(ErrorKind::DimensionMismatch, "systems of different order");
    return std::max(max_abs_diff(x.A(), y.A()), max_abs_diff(x.b(), y.b()));
}

/// Matrix of the companion form with last row -a (a = a0..a_{n-1}), as used
/// for controllable-canonical realisations.
inline Matrix companion(const Vector& a) {
    const std::size_t n = a.size();
    Matrix m(n, n);
    for (std::size_t i = 0; i + 1 < n; ++i) m(i, i + 1) = 1.0;
    for (std::size_t j = 0; j < n; ++j) m(n - 1, j) = -a[j];
    return m;
}

class IntervalInput {
public:
    IntervalInput() = default;
    IntervalInput(double lo, double hi) : lo_(lo), hi_(hi) {
        if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi))
            fail(ErrorKind::InvalidArgument, "input interval needs finite lo < hi");
    }

    double lo() const noexcept { return lo_; }
    double hi() const noexcept { return hi_; }
    double mid() const noexcept { return 0.5 * (lo_ + hi_); }
    double half_width() const noexcept { return 0.5 * (hi_ - lo_); }

    /// |lo + hi| <= tol * max(|lo|, |hi|)
    bool symmetric(double tol) const noexcept {
        return std::abs(lo_ + hi_) <= tol * std::max(std::abs(lo_), std::abs(hi_));
    }

private:
    double lo_ = 0.0;
    double hi_ = 1.0;
};

/// Observed reachable sets R(1,0) ... R(N,0) at consecutive times.
struct ReachSequence {
    std::size_t n = 0;
    IntervalInput input;
    std::vector<ConvexVertexSet> sets;  // sets[i - 1] is R(i, 0)

    std::size_t horizon() const noexcept { return sets.size(); }
    const ConvexVertexSet& at(std::size_t t) const { return sets.at(t - 1); }
};

/// Zonotopes R(1,0) .. R(horizon,0). Set i has generators A^k b (hi-lo)/2 and
/// center sum_k A^k b (hi+lo)/2, k = 0..i-1.
inline std::vector<Zonotope> reachable_zonotopes(const LinearSystem& sys, const IntervalInput& u,
                                                 std::size_t horizon) {
    if (horizon < 1) fail(ErrorKind::InvalidArgument, "horizon must be at least 1");
    std::vector<Zonotope> out;
    out.reserve(horizon);
    Zonotope z = Zonotope::point(Vector(sys.n()));
    Vector impulse = sys.b();
    for (std::size_t i = 1; i <= horizon; ++i) {
        z = minkowski_sum(z, Segment{impulse * u.lo(), impulse * u.hi()});
        out.push_back(z);
        impulse = sys.A() * impulse;
    }
    return out;
}

/// Vertex realisations of reachable_zonotopes, as they would be observed.
inline ReachSequence simulate_reach_sequence(const LinearSystem& sys, const IntervalInput& u, std::size_t horizon,
                                             std::size_t generator_cap = 16) {
    ReachSequence seq{sys.n(), u, {}};
    for (const auto& z : reachable_zonotopes(sys, u, horizon)) seq.sets.push_back(realize_vertices(z, generator_cap));
    return seq;
}

/// Brute-force oracle for R(i,0): enumerates every bang-bang input word in
/// {lo, hi}^i. A zonotope's extreme points are attained at interval
/// endpoints, so the hull of these points is exactly R(i,0). In 2D the exact
/// polygon hull is returned; otherwise all distinct points.
inline ConvexVertexSet brute_force_reach(const LinearSystem& sys, const IntervalInput& u, std::size_t i) {
    if (i < 1) fail(ErrorKind::InvalidArgument, "time index must be at least 1");
    if (i > 16) fail(ErrorKind::HorizonTooLarge, "bang-bang enumeration limited to i <= 16");
    const std::size_t words = std::size_t{1} << i;
    std::vector<Vector> pts;
    pts.reserve(words);
    for (std::size_t w = 0; w < words; ++w) {
        // simulate the trajectory literally: x <- A x + b u_k
        Vector x(sys.n());
        for (std::size_t k = 0; k < i; ++k) {
            const double uk = (w >> k & 1U) ? u.hi() : u.lo();
            x = sys.A() * x + sys.b() * uk;
        }
        pts.push_back(std::move(x));
    }
    if (sys.n() == 2) return ConvexVertexSet(2, convex_hull_2d(std::move(pts)));
    return canonicalize(ConvexVertexSet(sys.n(), std::move(pts)));
}

}  // namespace reachid
