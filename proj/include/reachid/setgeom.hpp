#pragma once

// Convex-set geometry on support functions: vertex sets, zonotopes and
// segments, Minkowski sums, and the segment-valued Minkowski difference used
// to peel one impulse segment off a reachable set.

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "reachid/error.hpp"
#include "reachid/linalg.hpp"

namespace reachid {

struct GeometryTolerances {
    double set = 1e-7;     // support-function agreement, relative
    double vertex = 1e-9;  // vertex coincidence, relative
    double tie = 1e-9;     // argmax ties, relative
};

/// A convex set given as the hull of a finite point list.
class ConvexVertexSet {
public:
    ConvexVertexSet() = default;
    ConvexVertexSet(std::size_t dim, std::vector<Vector> vertices) : dim_(dim), vertices_(std::move(vertices)) {
        if (dim_ == 0) fail(ErrorKind::InvalidArgument, "vertex set of dimension 0");
        if (vertices_.empty()) fail(ErrorKind::InvalidArgument, "vertex set needs at least one vertex");
        for (const auto& v : vertices_) {
            if (v.size() != dim_) fail(ErrorKind::DimensionMismatch, "vertex length differs from set dimension");
            if (!v.all_finite()) fail(ErrorKind::InvalidArgument, "non-finite vertex coordinate");
        }
    }
    explicit ConvexVertexSet(std::vector<Vector> vertices)
        : ConvexVertexSet(vertices.empty() ? 0 : vertices.front().size(), std::move(vertices)) {}

    static ConvexVertexSet point(const Vector& p) { return ConvexVertexSet(p.size(), {p}); }
    static ConvexVertexSet origin(std::size_t dim) { return point(Vector(dim)); }

    std::size_t dim() const noexcept { return dim_; }
    const std::vector<Vector>& vertices() const noexcept { return vertices_; }
    std::size_t size() const noexcept { return vertices_.size(); }

    /// Largest absolute coordinate; the magnitude used by relative tolerances.
    double scale() const noexcept {
        double s = 0.0;
        for (const auto& v : vertices_) s = std::max(s, v.max_abs());
        return s;
    }

private:
    std::size_t dim_ = 0;
    std::vector<Vector> vertices_;
};

struct Segment {
    Vector p;
    Vector q;

    std::size_t dim() const noexcept { return p.size(); }
    Vector midpoint() const { return 0.5 * (p + q); }
    bool degenerate(double tol = 0.0) const { return (q - p).max_abs() <= tol; }
};

class Zonotope {
public:
    Zonotope() = default;
    explicit Zonotope(Vector center, std::vector<Vector> generators = {})
        : center_(std::move(center)), generators_(std::move(generators)) {
        for (const auto& g : generators_)
            if (g.size() != center_.size()) fail(ErrorKind::DimensionMismatch, "generator length differs from center");
    }

    static Zonotope point(const Vector& c) { return Zonotope(c); }
    static Zonotope from_segment(const Segment& s) { return Zonotope(s.midpoint(), {0.5 * (s.q - s.p)}); }

    std::size_t dim() const noexcept { return center_.size(); }
    const Vector& center() const noexcept { return center_; }
    const std::vector<Vector>& generators() const noexcept { return generators_; }

private:
    Vector center_;
    std::vector<Vector> generators_;
};

inline std::size_t set_dim(const ConvexVertexSet& s) { return s.dim(); }
inline std::size_t set_dim(const Zonotope& z) { return z.dim(); }
inline std::size_t set_dim(const Segment& s) { return s.dim(); }

namespace detail {

inline void check_direction(std::size_t dim, const Vector& u) {
    if (u.size() != dim)
        fail(ErrorKind::DimensionMismatch,
             "direction of length " + std::to_string(u.size()) + " for set of dimension " + std::to_string(dim));
}

}  // namespace detail

inline double support(const ConvexVertexSet& s, const Vector& u) {
    detail::check_direction(s.dim(), u);
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& v : s.vertices()) best = std::max(best, dot(u, v));
    return best;
}

inline double support(const Zonotope& z, const Vector& u) {
    detail::check_direction(z.dim(), u);
    double h = dot(u, z.center());
    for (const auto& g : z.generators()) h += std::abs(dot(u, g));
    return h;
}

inline double support(const Segment& s, const Vector& u) {
    detail::check_direction(s.dim(), u);
    return std::max(dot(u, s.p), dot(u, s.q));
}

template <class S>
concept SupportSet = requires(const S& s, const Vector& u) {
    { support(s, u) } -> std::convertible_to<double>;
    { set_dim(s) } -> std::convertible_to<std::size_t>;
};

/// Fixed directions: the 2n signed axes first, then `random_count` seeded
/// pseudo-random unit directions. Direction k depends only on (seed, k).
class DirectionSampler {
public:
    explicit DirectionSampler(std::size_t dim, std::uint64_t seed = 0, std::size_t random_count = 128)
        : dim_(dim), seed_(seed), random_count_(random_count) {
        if (dim == 0) fail(ErrorKind::InvalidArgument, "sampler of dimension 0");
        directions_.reserve(size());
        for (std::size_t k = 0; k < size(); ++k) directions_.push_back(compute(k));
    }

    std::size_t dim() const noexcept { return dim_; }
    std::uint64_t seed() const noexcept { return seed_; }
    std::size_t size() const noexcept { return 2 * dim_ + random_count_; }
    const Vector& operator[](std::size_t k) const { return directions_.at(k); }
    auto begin() const noexcept { return directions_.begin(); }
    auto end() const noexcept { return directions_.end(); }

    /// k-th generic (random) direction; not limited to random_count.
    Vector generic(std::size_t k) const {
        if (k < random_count_) return directions_[2 * dim_ + k];
        return random_direction(k);
    }

private:
    Vector compute(std::size_t k) const {
        if (k < 2 * dim_) {
            Vector e = Vector::unit(dim_, k / 2);
            if (k % 2 == 1) e *= -1.0;
            return e;
        }
        return random_direction(k - 2 * dim_);
    }

    Vector random_direction(std::size_t k) const {
        // splitmix64 of (seed, k) seeds an independent stream per direction
        std::uint64_t x = seed_ + 0x9e3779b97f4a7c15ULL * (static_cast<std::uint64_t>(k) + 1);
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        x ^= x >> 31;
        std::mt19937_64 rng(x);
        std::normal_distribution<double> normal;
        Vector u(dim_);
        double n2 = 0.0;
        while (n2 < 1e-12) {
            for (std::size_t i = 0; i < dim_; ++i) u[i] = normal(rng);
            n2 = dot(u, u);
        }
        return u / std::sqrt(n2);
    }

    std::size_t dim_;
    std::uint64_t seed_;
    std::size_t random_count_;
    std::vector<Vector> directions_;
};

/// Removes vertices that lie within tol_vertex * (1 + scale) (max-norm) of an
/// earlier vertex. Output is sorted lexicographically.
inline ConvexVertexSet canonicalize(const ConvexVertexSet& s, double tol_vertex = GeometryTolerances{}.vertex) {
    const double tol = tol_vertex * (1.0 + s.scale());
    std::vector<Vector> pts = s.vertices();
    std::sort(pts.begin(), pts.end(), [](const Vector& a, const Vector& b) {
        return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
    });
    std::vector<Vector> kept;
    kept.reserve(pts.size());
    for (const auto& p : pts) {
        bool dup = false;
        // kept is sorted by first coordinate; only a trailing window can match
        for (auto it = kept.rbegin(); it != kept.rend(); ++it) {
            if (p[0] - (*it)[0] > tol) break;
            if ((p - *it).max_abs() <= tol) {
                dup = true;
                break;
            }
        }
        if (!dup) kept.push_back(p);
    }
    return ConvexVertexSet(s.dim(), std::move(kept));
}

/// Drops generators that are zero to within tol_vertex * (1 + |center|).
inline Zonotope canonicalize(const Zonotope& z, double tol_vertex = GeometryTolerances{}.vertex) {
    double scale = z.center().max_abs();
    for (const auto& g : z.generators()) scale = std::max(scale, g.max_abs());
    std::vector<Vector> gens;
    for (const auto& g : z.generators())
        if (g.max_abs() > tol_vertex * scale) gens.push_back(g);
    return Zonotope(z.center(), std::move(gens));
}

struct ArgmaxResult {
    Vector vertex;
    bool tie = false;
};

/// Vertex maximising <u, .>. `tie` is set when a different vertex comes
/// within tol_tie * (|u| * max|v|) of the maximum.
inline ArgmaxResult argmax_vertex(const ConvexVertexSet& s, const Vector& u,
                                  const GeometryTolerances& tol = {}) {
    detail::check_direction(s.dim(), u);
    const auto& vs = s.vertices();
    std::size_t best = 0;
    double best_val = dot(u, vs[0]);
    for (std::size_t k = 1; k < vs.size(); ++k) {
        const double val = dot(u, vs[k]);
        if (val > best_val) {
            best_val = val;
            best = k;
        }
    }
    double vmax = 0.0;
    for (const auto& v : vs) vmax = std::max(vmax, v.norm());
    const double threshold = tol.tie * u.norm() * std::max(vmax, 1e-300);
    const double same = tol.vertex * (1.0 + s.scale());
    bool tie = false;
    for (std::size_t k = 0; k < vs.size() && !tie; ++k) {
        if (k == best) continue;
        if (dot(u, vs[k]) >= best_val - threshold && (vs[k] - vs[best]).max_abs() > same) tie = true;
    }
    return {vs[best], tie};
}

inline Zonotope minkowski_sum(const Zonotope& z, const Segment& s) {
    if (z.dim() != s.dim()) fail(ErrorKind::DimensionMismatch, "Minkowski sum of zonotope and segment");
    auto gens = z.generators();
    gens.push_back(0.5 * (s.q - s.p));
    return Zonotope(z.center() + s.midpoint(), std::move(gens));
}

inline Zonotope minkowski_sum(const Zonotope& a, const Zonotope& b) {
    if (a.dim() != b.dim()) fail(ErrorKind::DimensionMismatch, "Minkowski sum of zonotopes");
    auto gens = a.generators();
    gens.insert(gens.end(), b.generators().begin(), b.generators().end());
    return Zonotope(a.center() + b.center(), std::move(gens));
}

/// Largest |h_a(u) - h_b(u)| over the sampler directions, together with the
/// largest |h| seen (the magnitude scale for relative comparisons).
struct SupportGap {
    double gap = 0.0;
    double scale = 0.0;
};

template <SupportSet A, SupportSet B>
SupportGap support_gap(const A& a, const B& b, const DirectionSampler& sampler) {
    if (set_dim(a) != set_dim(b) || set_dim(a) != sampler.dim())
        fail(ErrorKind::DimensionMismatch, "support comparison of sets with different dimensions");
    SupportGap out;
    for (const auto& u : sampler) {
        const double ha = support(a, u);
        const double hb = support(b, u);
        out.gap = std::max(out.gap, std::abs(ha - hb));
        out.scale = std::max({out.scale, std::abs(ha), std::abs(hb)});
    }
    return out;
}

/// Sampled Hausdorff test: every sampled support value agrees within
/// tol * (1 + scale).
template <SupportSet A, SupportSet B>
bool sets_equal(const A& a, const B& b, const DirectionSampler& sampler, double tol) {
    if (!(tol > 0.0)) fail(ErrorKind::InvalidArgument, "sets_equal tolerance must be positive");
    const auto g = support_gap(a, b, sampler);
    return g.gap <= tol * (1.0 + g.scale);
}

/// Recovers S from r_i = r_prev (+) S by pairing maximisers along a generic
/// direction u: p = argmax(r_i, u) - argmax(r_prev, u), and likewise q for -u.
/// Tied directions are skipped (up to 16 retries); the result is validated
/// against every sampler direction.
inline Segment extract_segment_difference(const ConvexVertexSet& r_i, const ConvexVertexSet& r_prev,
                                          const DirectionSampler& sampler, const GeometryTolerances& tol = {}) {
    if (r_i.dim() != r_prev.dim() || r_i.dim() != sampler.dim())
        fail(ErrorKind::DimensionMismatch, "segment extraction between sets of different dimensions");

    constexpr std::size_t max_retries = 16;
    std::optional<Segment> seg;
    for (std::size_t k = 0; k <= max_retries && !seg; ++k) {
        const Vector u = sampler.generic(k);
        const auto hi_now = argmax_vertex(r_i, u, tol);
        const auto hi_prev = argmax_vertex(r_prev, u, tol);
        const auto lo_now = argmax_vertex(r_i, -u, tol);
        const auto lo_prev = argmax_vertex(r_prev, -u, tol);
        if (hi_now.tie || hi_prev.tie || lo_now.tie || lo_prev.tie) continue;
        seg = Segment{hi_now.vertex - hi_prev.vertex, lo_now.vertex - lo_prev.vertex};
    }
    if (!seg) fail(ErrorKind::TieExhausted, "every generic direction produced an argmax tie");

    const double scale = std::max(r_i.scale(), r_prev.scale());
    const double limit = tol.set * (1.0 + scale);
    for (const auto& u : sampler) {
        const double mismatch = std::abs(support(r_i, u) - support(r_prev, u) - support(*seg, u));
        if (mismatch > limit)
            fail(ErrorKind::NotADifferenceOfSegment,
                 "support mismatch " + std::to_string(mismatch) + " exceeds " + std::to_string(limit));
    }
    return *seg;
}

// ---------------------------------------------------------------------------
// Planar helpers

namespace detail {

inline double cross2(const Vector& o, const Vector& a, const Vector& b) {
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

}  // namespace detail

/// Counterclockwise convex hull (monotone chain) with collinear and duplicate
/// points removed. Degenerate hulls come back as one or two vertices.
inline std::vector<Vector> convex_hull_2d(std::vector<Vector> pts, double tol_rel = 1e-12) {
    if (pts.empty()) return pts;
    double scale = 0.0;
    for (const auto& p : pts) {
        if (p.size() != 2) fail(ErrorKind::DimensionMismatch, "planar hull of non-planar points");
        scale = std::max(scale, p.max_abs());
    }
    const double same = tol_rel * (1.0 + scale);
    std::sort(pts.begin(), pts.end(),
              [](const Vector& a, const Vector& b) { return a[0] < b[0] || (a[0] == b[0] && a[1] < b[1]); });
    std::vector<Vector> uniq;
    for (const auto& p : pts) {
        bool dup = false;
        for (auto it = uniq.rbegin(); it != uniq.rend(); ++it) {
            if (p[0] - (*it)[0] > same) break;
            if ((p - *it).max_abs() <= same) {
                dup = true;
                break;
            }
        }
        if (!dup) uniq.push_back(p);
    }
    if (uniq.size() <= 2) return uniq;

    // area tolerance scales with the squared coordinate magnitude
    const double area_tol = tol_rel * (1.0 + scale) * (1.0 + scale);
    std::vector<Vector> hull(2 * uniq.size());
    std::size_t k = 0;
    for (const auto& p : uniq) {
        while (k >= 2 && detail::cross2(hull[k - 2], hull[k - 1], p) <= area_tol) --k;
        hull[k++] = p;
    }
    for (std::size_t i = uniq.size() - 1, lower = k + 1; i-- > 0;) {
        while (k >= lower && detail::cross2(hull[k - 2], hull[k - 1], uniq[i]) <= area_tol) --k;
        hull[k++] = uniq[i];
    }
    hull.resize(k - 1);
    if (hull.size() < 2) {
        // all collinear: keep the two extreme points
        return {uniq.front(), uniq.back()};
    }
    return hull;
}

namespace detail {

struct HalfPlane {
    Vector normal;  // unit
    double offset;  // <normal, x> <= offset
};

inline std::vector<HalfPlane> half_planes(const std::vector<Vector>& hull) {
    std::vector<HalfPlane> out;
    auto add = [&](Vector n, const Vector& through) {
        const double len = n.norm();
        n /= len;
        out.push_back({n, dot(n, through)});
    };
    if (hull.size() == 1) {
        for (std::size_t a = 0; a < 2; ++a) {
            add(Vector::unit(2, a), hull[0]);
            add(-Vector::unit(2, a), hull[0]);
        }
    } else if (hull.size() == 2) {
        const Vector d = hull[1] - hull[0];
        const Vector n{d[1], -d[0]};
        add(n, hull[0]);
        add(-n, hull[0]);
        add(d, hull[1]);
        add(-d, hull[0]);
    } else {
        for (std::size_t i = 0; i < hull.size(); ++i) {
            const Vector& a = hull[i];
            const Vector& b = hull[(i + 1) % hull.size()];
            add(Vector{b[1] - a[1], a[0] - b[0]}, a);
        }
    }
    return out;
}

// Sutherland-Hodgman step against one half-plane; points within eps of the
// boundary count as inside.
inline std::vector<Vector> clip(const std::vector<Vector>& poly, const HalfPlane& h, double eps) {
    std::vector<Vector> out;
    const std::size_t m = poly.size();
    if (m == 0) return out;
    if (m == 1) {
        if (dot(h.normal, poly[0]) - h.offset <= eps) out.push_back(poly[0]);
        return out;
    }
    for (std::size_t i = 0; i < m; ++i) {
        const Vector& a = poly[i];
        const Vector& b = poly[(i + 1) % m];
        const double da = dot(h.normal, a) - h.offset;
        const double db = dot(h.normal, b) - h.offset;
        const bool ain = da <= eps;
        const bool bin = db <= eps;
        if (ain) out.push_back(a);
        if (ain != bin) {
            const double t = da / (da - db);
            out.push_back(a + t * (b - a));
        }
    }
    return out;
}

}  // namespace detail

/// Minkowski difference r_i (-) r_prev in the plane as the intersection of
/// the translates r_i - v over the vertices v of r_prev, by iterated convex
/// clipping. Result vertices are counterclockwise.
inline ConvexVertexSet translate_intersect_2d(const ConvexVertexSet& r_i, const ConvexVertexSet& r_prev) {
    if (r_i.dim() != 2 || r_prev.dim() != 2) fail(ErrorKind::DimensionMismatch, "translate_intersect_2d needs 2D sets");
    const auto hull_i = convex_hull_2d(r_i.vertices());
    const auto hull_prev = convex_hull_2d(r_prev.vertices());
    const auto planes = detail::half_planes(hull_i);
    const double scale = std::max(r_i.scale(), r_prev.scale());
    const double eps = 1e-11 * (1.0 + scale);

    std::vector<Vector> poly;
    for (const auto& v : hull_i) poly.push_back(v - hull_prev.front());
    for (const auto& v : hull_prev) {
        for (const auto& h : planes) {
            poly = detail::clip(poly, {h.normal, h.offset - dot(h.normal, v)}, eps);
            if (poly.empty()) fail(ErrorKind::EmptyDifference, "translates have empty intersection");
        }
        poly = convex_hull_2d(std::move(poly));
    }
    return ConvexVertexSet(2, std::move(poly));
}

/// Polygon of a planar zonotope by sorting generators by angle. Parallel
/// generators are merged, so the vertex count is at most 2 * generators.
inline ConvexVertexSet zonotope_vertices_2d(const Zonotope& z, double tol_rel = 1e-12) {
    if (z.dim() != 2) fail(ErrorKind::DimensionMismatch, "zonotope_vertices_2d needs a 2D zonotope");
    const Zonotope cz = canonicalize(z);
    std::vector<Vector> gens;
    for (auto g : cz.generators()) {
        if (g[1] < 0.0 || (g[1] == 0.0 && g[0] < 0.0)) g *= -1.0;
        gens.push_back(g);
    }
    std::sort(gens.begin(), gens.end(),
              [](const Vector& a, const Vector& b) { return std::atan2(a[1], a[0]) < std::atan2(b[1], b[0]); });
    std::vector<Vector> merged;
    for (const auto& g : gens) {
        if (!merged.empty()) {
            auto& last = merged.back();
            const double area = last[0] * g[1] - last[1] * g[0];
            if (std::abs(area) <= tol_rel * last.norm() * g.norm()) {
                last += g;
                continue;
            }
        }
        merged.push_back(g);
    }
    if (merged.empty()) return ConvexVertexSet::point(z.center());

    Vector v = z.center();
    for (const auto& g : merged) v -= g;
    std::vector<Vector> verts;
    verts.reserve(2 * merged.size());
    for (const auto& g : merged) {
        verts.push_back(v);
        v += 2.0 * g;
    }
    for (const auto& g : merged) {
        verts.push_back(v);
        v -= 2.0 * g;
    }
    return ConvexVertexSet(2, std::move(verts));
}

/// All 2^m sign-pattern points c + sum(+-g) of an m-generator zonotope
/// (duplicates removed). Their hull is the zonotope; some points may be
/// interior. Capped at `cap` generators.
inline ConvexVertexSet zonotope_vertices(const Zonotope& z, std::size_t cap = 16) {
    const Zonotope zc = canonicalize(z);
    const auto& gens = zc.generators();
    if (gens.size() > cap)
        fail(ErrorKind::GeneratorCapExceeded,
             std::to_string(gens.size()) + " generators exceeds the cap of " + std::to_string(cap));
    const std::size_t count = std::size_t{1} << gens.size();
    std::vector<Vector> pts;
    pts.reserve(count);
    for (std::size_t mask = 0; mask < count; ++mask) {
        Vector p = zc.center();
        for (std::size_t k = 0; k < gens.size(); ++k) {
            if (mask >> k & 1U) p += gens[k];
            else p -= gens[k];
        }
        pts.push_back(std::move(p));
    }
    return canonicalize(ConvexVertexSet(z.dim(), std::move(pts)));
}

/// Vertex realisation: exact polygon in 2D, sign-pattern points otherwise.
inline ConvexVertexSet realize_vertices(const Zonotope& z, std::size_t cap = 16) {
    return z.dim() == 2 ? zonotope_vertices_2d(z) : zonotope_vertices(z, cap);
}

}  // namespace reachid
