#pragma once

// Recovery of (A, b) from consecutive reachable sets: peel off the impulse
// segments A^k b U, turn them into impulse vectors, and solve
// A [b .. A^{n-1} b] = [Ab .. A^n b]. With a symmetric input interval the
// impulse signs are unknown; every sign assignment is tried and the
// candidates are filtered by forward simulation against the observed sets.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "reachid/diagnostics.hpp"
#include "reachid/error.hpp"
#include "reachid/linalg.hpp"
#include "reachid/reach.hpp"
#include "reachid/setgeom.hpp"

namespace reachid {

struct IdentifyOptions {
    LinalgTolerances linalg;
    GeometryTolerances geometry;
    double sym = 1e-9;          // |lo + hi| <= sym * max(|lo|, |hi|) means symmetric
    double genericity = 1e-7;   // diagnostics thresholds
    double duplicate = 1e-9;    // candidate (A, b) coincidence, relative
    std::uint64_t seed = 0;
    std::size_t random_directions = 128;
    bool diagnostics = true;

    DirectionSampler sampler(std::size_t dim) const { return DirectionSampler(dim, seed, random_directions); }
};

/// w[k] ~ A^k b for k = 0..n (up to sign when sign_known is false).
struct ImpulseSequence {
    std::size_t n = 0;
    std::vector<Vector> w;
    bool sign_known = true;
};

/// Signs s_0..s_n applied to w_0..w_n. Mask bit k set means s_k = -1, so the
/// all-plus vector is mask 0 and enumeration order is the binary count.
class SignVector {
public:
    SignVector() = default;
    SignVector(std::size_t length, std::uint64_t mask) : signs_(length) {
        for (std::size_t k = 0; k < length; ++k) signs_[k] = (mask >> k & 1U) ? -1 : 1;
    }
    explicit SignVector(std::vector<int> signs) : signs_(std::move(signs)) {
        for (int s : signs_)
            if (s != 1 && s != -1) fail(ErrorKind::InvalidArgument, "sign entries must be +1 or -1");
    }

    static SignVector all_plus(std::size_t length) { return SignVector(length, 0); }

    std::size_t size() const noexcept { return signs_.size(); }
    int operator[](std::size_t k) const { return signs_.at(k); }
    SignVector negated() const {
        auto s = signs_;
        for (auto& x : s) x = -x;
        return SignVector(std::move(s));
    }
    std::string str() const {
        std::string out;
        for (int s : signs_) out.push_back(s > 0 ? '+' : '-');
        return out;
    }
    friend bool operator==(const SignVector&, const SignVector&) = default;

private:
    std::vector<int> signs_;
};

enum class OutcomeKind { Unique, PlusMinusUnique, Ambiguous, Degenerate };

constexpr std::string_view to_string(OutcomeKind k) {
    switch (k) {
        case OutcomeKind::Unique: return "Unique";
        case OutcomeKind::PlusMinusUnique: return "PlusMinusUnique";
        case OutcomeKind::Ambiguous: return "Ambiguous";
        case OutcomeKind::Degenerate: return "Degenerate";
    }
    return "Unknown";
}

enum class CandidateStatus { Survivor, Eliminated, NotControllable, Duplicate };

constexpr std::string_view to_string(CandidateStatus s) {
    switch (s) {
        case CandidateStatus::Survivor: return "survivor";
        case CandidateStatus::Eliminated: return "eliminated";
        case CandidateStatus::NotControllable: return "not-controllable";
        case CandidateStatus::Duplicate: return "duplicate";
    }
    return "unknown";
}

struct Candidate {
    SignVector signs;
    LinearSystem system;
};

struct CandidateRecord {
    SignVector signs;
    std::optional<LinearSystem> system;
    CandidateStatus status = CandidateStatus::Survivor;
    std::optional<std::size_t> eliminated_at;  // first time index that did not match
    double max_gap = 0.0;                      // worst support mismatch over checked sets
};

struct CandidateSet {
    std::vector<Candidate> candidates;    // distinct (A, b), canonical sign order
    std::vector<CandidateRecord> dropped;  // not controllable or duplicate
    std::size_t sign_vectors = 0;          // assignments tried, 2^(n+1)
};

struct IdentOutcome {
    OutcomeKind kind = OutcomeKind::Degenerate;
    std::vector<LinearSystem> systems;
    std::vector<std::optional<GenericityReport>> genericity;  // one per system
    std::vector<CandidateRecord> candidates;
    std::vector<double> residuals;  // per time index, for systems.front()
    std::optional<ImpulseSequence> impulses;
    bool symmetric_input = false;
    std::vector<std::string> notes;

    // filled for Degenerate outcomes
    std::optional<ErrorKind> error;
    std::string error_message;
    std::optional<int> error_time;
    std::string error_stage;
};

// ---------------------------------------------------------------------------
// Impulse extraction

/// Midpoint of A^k b [lo, hi] is A^k b (lo + hi) / 2, so
/// A^k b = (p + q) / (lo + hi).
inline Vector extract_impulse_asymmetric(const Segment& seg, const IntervalInput& u, double tol_sym = 1e-9) {
    if (u.symmetric(tol_sym)) fail(ErrorKind::SymmetricInput, "input interval is symmetric about zero");
    return (seg.p + seg.q) / (u.lo() + u.hi());
}

/// Flips v so that its largest-magnitude component (first one on ties) is
/// positive.
inline Vector canonical_orientation(Vector v) {
    std::size_t big = 0;
    for (std::size_t i = 1; i < v.size(); ++i)
        if (std::abs(v[i]) > std::abs(v[big])) big = i;
    if (v[big] < 0.0) v *= -1.0;
    for (std::size_t i = 0; i < v.size(); ++i) v[i] += 0.0;  // no negative zeros
    return v;
}

/// For U = [-c, c] the segment is {+-A^k b c}; returns the canonically oriented
/// endpoint divided by c, i.e. +-A^k b. Computed as (q - p) / (hi - lo), which
/// is the same thing for an exactly symmetric segment.
inline Vector extract_impulse_symmetric(const Segment& seg, const IntervalInput& u, double tol_sym = 1e-9,
                                        double zero_tol = 0.0) {
    if (!u.symmetric(tol_sym)) fail(ErrorKind::InvalidArgument, "input interval is not symmetric");
    if (seg.degenerate(zero_tol)) fail(ErrorKind::ZeroSegment, "impulse segment has zero length");
    return canonical_orientation((seg.q - seg.p) / (u.hi() - u.lo()));
}

/// Segments R(i) (-) R(i-1) for i = 1..n+1 turned into impulse vectors.
inline ImpulseSequence extract_impulses(const ReachSequence& observed, const IdentifyOptions& opt = {}) {
    const std::size_t n = observed.n;
    if (observed.horizon() < n + 1)
        fail(ErrorKind::InsufficientSets, "need at least n+1 = " + std::to_string(n + 1) + " sets, got " +
                                              std::to_string(observed.horizon()));
    const bool symmetric = observed.input.symmetric(opt.sym);
    const auto sampler = opt.sampler(n);

    ImpulseSequence out{n, {}, !symmetric};
    ConvexVertexSet prev = ConvexVertexSet::origin(n);
    for (std::size_t i = 1; i <= n + 1; ++i) {
        const auto& cur = observed.at(i);
        try {
            const Segment seg = extract_segment_difference(cur, prev, sampler, opt.geometry);
            if (!symmetric) {
                out.w.push_back(extract_impulse_asymmetric(seg, observed.input, opt.sym));
            } else {
                const double zero_tol = opt.geometry.vertex * (1.0 + cur.scale());
                if (seg.degenerate(zero_tol)) {
                    if (i <= n) fail(ErrorKind::NotControllable, "zero impulse segment A^k b U before k = n");
                    out.w.emplace_back(n);
                } else {
                    out.w.push_back(extract_impulse_symmetric(seg, observed.input, opt.sym, zero_tol));
                }
            }
        } catch (Error& e) {
            if (!e.time_index()) e.at(static_cast<int>(i), "segment-extraction");
            throw;
        }
        prev = cur;
    }

    // earliest time at which the impulses stop being independent
    for (std::size_t k = 0; k < n; ++k) {
        const auto cols = std::span<const Vector>(out.w).first(k + 1);
        if (mat_rank(Matrix::from_columns(cols), opt.linalg.pivot) < k + 1)
            throw Error(ErrorKind::NotControllable, "impulse A^" + std::to_string(k) +
                                                        " b is dependent on earlier impulses")
                .at(static_cast<int>(k + 1), "controllability");
    }
    return out;
}

// ---------------------------------------------------------------------------
// Recovery

/// A = [s1 w1 .. sn wn] [s0 w0 .. s(n-1) w(n-1)]^-1, b = s0 w0.
inline LinearSystem recover_A(const ImpulseSequence& w, const SignVector& signs,
                              double tol_pivot = LinalgTolerances{}.pivot) {
    const std::size_t n = w.n;
    if (w.w.size() != n + 1 || signs.size() != n + 1)
        fail(ErrorKind::DimensionMismatch, "need n+1 impulses and n+1 signs");
    std::vector<Vector> c_cols, ac_cols;
    for (std::size_t k = 0; k < n; ++k) {
        c_cols.push_back(w.w[k] * static_cast<double>(signs[k]));
        ac_cols.push_back(w.w[k + 1] * static_cast<double>(signs[k + 1]));
    }
    const Matrix C = Matrix::from_columns(c_cols);
    if (mat_rank(C, tol_pivot) < n) fail(ErrorKind::NotControllable, "controllability matrix is rank deficient");
    Matrix C_inv;
    try {
        C_inv = mat_inverse(C, tol_pivot);
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::SingularMatrix) throw;
        fail(ErrorKind::NotControllable, "controllability matrix is singular");
    }
    return LinearSystem(Matrix::from_columns(ac_cols) * C_inv, c_cols.front());
}

namespace detail {

inline bool same_system(const LinearSystem& x, const LinearSystem& y, double tol) {
    const double scale = std::max({1.0, x.A().max_abs(), x.b().max_abs()});
    return system_distance(x, y) <= tol * scale;
}

}  // namespace detail

/// Every sign assignment s in {+1,-1}^(n+1), in canonical order, run through
/// recover_A. Non-controllable and duplicate (A, b) are dropped and recorded.
inline CandidateSet enumerate_candidates(const ImpulseSequence& w, const IdentifyOptions& opt = {}) {
    if (w.sign_known) fail(ErrorKind::InvalidArgument, "candidate enumeration is for sign-ambiguous impulses");
    if (w.n + 1 > 24) fail(ErrorKind::InvalidArgument, "too many sign vectors");
    CandidateSet out;
    out.sign_vectors = std::size_t{1} << (w.n + 1);
    for (std::uint64_t mask = 0; mask < out.sign_vectors; ++mask) {
        SignVector s(w.n + 1, mask);
        try {
            LinearSystem sys = recover_A(w, s, opt.linalg.pivot);
            const bool dup = std::any_of(out.candidates.begin(), out.candidates.end(), [&](const Candidate& c) {
                return detail::same_system(c.system, sys, opt.duplicate);
            });
            if (dup) out.dropped.push_back({s, sys, CandidateStatus::Duplicate, {}, 0.0});
            else out.candidates.push_back({s, std::move(sys)});
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::NotControllable) throw;
            out.dropped.push_back({s, std::nullopt, CandidateStatus::NotControllable, {}, 0.0});
        }
    }
    return out;
}

/// Largest support mismatch between the system's reachable sets and each
/// observed set, indexed by time - 1.
inline std::vector<double> residuals(const LinearSystem& sys, const ReachSequence& observed,
                                     const DirectionSampler& sampler) {
    std::vector<double> out;
    const auto zs = reachable_zonotopes(sys, observed.input, observed.horizon());
    for (std::size_t t = 1; t <= observed.horizon(); ++t)
        out.push_back(support_gap(zs[t - 1], observed.at(t), sampler).gap);
    return out;
}

namespace detail {

inline void attach_diagnostics(IdentOutcome& out, const IdentifyOptions& opt) {
    const InputKind kind = out.symmetric_input ? InputKind::Symmetric : InputKind::Asymmetric;
    out.genericity.clear();
    for (const auto& sys : out.systems) {
        if (!opt.diagnostics) {
            out.genericity.emplace_back();
            continue;
        }
        try {
            out.genericity.emplace_back(genericity_check(sys, opt.genericity, kind));
        } catch (const Error& e) {
            out.genericity.emplace_back();
            out.notes.push_back(std::string("diagnostics failed: ") + e.what());
        }
    }
}

}  // namespace detail

/// Keeps the candidates whose forward reachable sets match every observed
/// set. Survivors are grouped by A up to sign; each group is reported as its
/// first member (canonical sign order) and that member's negation. One group
/// holding both halves of a +-pair is PlusMinusUnique; a single survivor out
/// of a single candidate is Unique; anything else is Ambiguous.
inline IdentOutcome disambiguate(std::span<const Candidate> cands, const ReachSequence& observed,
                                 const IdentifyOptions& opt = {}) {
    if (cands.empty()) fail(ErrorKind::NoSurvivors, "no candidates to test");
    const auto sampler = opt.sampler(observed.n);
    IdentOutcome out;
    out.symmetric_input = observed.input.symmetric(opt.sym);

    std::vector<const Candidate*> survivors;
    for (const auto& c : cands) {
        CandidateRecord rec{c.signs, c.system, CandidateStatus::Survivor, {}, 0.0};
        const auto zs = reachable_zonotopes(c.system, observed.input, observed.horizon());
        for (std::size_t t = 1; t <= observed.horizon(); ++t) {
            const auto g = support_gap(zs[t - 1], observed.at(t), sampler);
            rec.max_gap = std::max(rec.max_gap, g.gap);
            if (g.gap > opt.geometry.set * (1.0 + g.scale)) {
                rec.status = CandidateStatus::Eliminated;
                rec.eliminated_at = t;
                break;
            }
        }
        if (rec.status == CandidateStatus::Survivor) survivors.push_back(&c);
        out.candidates.push_back(std::move(rec));
    }
    if (survivors.empty())
        fail(ErrorKind::NoSurvivors, "no candidate reproduces the observed reachable sets");

    auto matches = [&](const LinearSystem& x, const LinearSystem& y) { return detail::same_system(x, y, opt.duplicate); };
    auto same_up_to_sign = [&](const Matrix& x, const Matrix& y) {
        const double scale = std::max(1.0, x.max_abs());
        return std::min(max_abs_diff(x, y), max_abs_diff(x, -y)) <= opt.duplicate * scale;
    };

    std::vector<const Candidate*> reps;
    for (const auto* s : survivors) {
        const bool grouped = std::any_of(reps.begin(), reps.end(), [&](const Candidate* r) {
            return same_up_to_sign(r->system.A(), s->system.A());
        });
        if (!grouped) reps.push_back(s);
    }

    bool all_pairs = true;
    for (const auto* r : reps) {
        out.systems.push_back(r->system);
        const LinearSystem neg = -r->system;
        const bool has_neg =
            std::any_of(survivors.begin(), survivors.end(), [&](const Candidate* s) { return matches(s->system, neg); });
        if (has_neg) out.systems.push_back(neg);
        else all_pairs = false;
    }

    if (survivors.size() == 1 && cands.size() == 1) {
        out.kind = OutcomeKind::Unique;
    } else if (reps.size() == 1 && all_pairs) {
        out.kind = OutcomeKind::PlusMinusUnique;
    } else {
        out.kind = OutcomeKind::Ambiguous;
        out.systems.clear();
        for (const auto* r : reps) {
            out.systems.push_back(r->system);
            const LinearSystem neg = -r->system;
            if (std::any_of(survivors.begin(), survivors.end(), [&](const Candidate* s) { return matches(s->system, neg); }))
                out.systems.push_back(neg);
        }
    }
    return out;
}

/// Full pipeline. Asymmetric input: the unique all-plus recovery. Symmetric
/// input: candidate enumeration and disambiguation against all observed sets.
inline IdentOutcome identify(const ReachSequence& observed, const IdentifyOptions& opt = {}) {
    if (observed.sets.empty()) fail(ErrorKind::InsufficientSets, "no reachable sets given");
    for (const auto& s : observed.sets)
        if (s.dim() != observed.n) fail(ErrorKind::DimensionMismatch, "set dimension differs from n");

    const ImpulseSequence w = extract_impulses(observed, opt);
    const auto sampler = opt.sampler(observed.n);
    IdentOutcome out;

    if (w.sign_known) {
        LinearSystem sys = [&] {
            try {
                return recover_A(w, SignVector::all_plus(w.n + 1), opt.linalg.pivot);
            } catch (Error& e) {
                e.at(static_cast<int>(w.n), "recovery");
                throw;
            }
        }();
        out.kind = OutcomeKind::Unique;
        out.candidates.push_back({SignVector::all_plus(w.n + 1), sys, CandidateStatus::Survivor, {}, 0.0});
        out.systems.push_back(std::move(sys));
    } else {
        CandidateSet cs = enumerate_candidates(w, opt);
        if (cs.candidates.empty())
            throw Error(ErrorKind::NotControllable, "every sign assignment gives a singular controllability matrix")
                .at(static_cast<int>(w.n), "recovery");
        try {
            out = disambiguate(cs.candidates, observed, opt);
        } catch (Error& e) {
            if (!e.time_index()) e.at(static_cast<int>(observed.horizon()), "disambiguation");
            throw;
        }
        for (auto& d : cs.dropped) out.candidates.push_back(std::move(d));
        if (observed.horizon() < w.n + 2)
            out.notes.push_back("fewer than n+2 sets: sign candidates were only checked against the given sets");
    }
    out.symmetric_input = !w.sign_known;
    out.impulses = w;
    out.residuals = residuals(out.systems.front(), observed, sampler);
    detail::attach_diagnostics(out, opt);
    return out;
}

/// identify(), with hard errors folded into a Degenerate outcome.
inline IdentOutcome try_identify(const ReachSequence& observed, const IdentifyOptions& opt = {}) {
    try {
        return identify(observed, opt);
    } catch (const Error& e) {
        IdentOutcome out;
        out.kind = OutcomeKind::Degenerate;
        out.symmetric_input = observed.input.symmetric(opt.sym);
        out.error = e.kind();
        out.error_message = e.detail();
        out.error_time = e.time_index();
        out.error_stage = e.stage();
        return out;
    }
}

}  // namespace reachid
