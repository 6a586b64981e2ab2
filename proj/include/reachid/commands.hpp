#pragma once

// The operations behind the `reachid` command line tool. Each command reads
// and writes files and returns the process exit code; the human-readable
// summary goes to the supplied stream.

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "reachid/diagnostics.hpp"
#include "reachid/error.hpp"
#include "reachid/identify.hpp"
#include "reachid/io.hpp"
#include "reachid/reach.hpp"
#include "reachid/svg.hpp"

namespace reachid::cli {

using io::json;

enum class OutputFormat { Json, Svg };

inline OutputFormat parse_format(const std::string& s) {
    if (s == "json") return OutputFormat::Json;
    if (s == "svg") return OutputFormat::Svg;
    fail(ErrorKind::InvalidArgument, "unknown format '" + s + "' (expected json or svg)");
}

/// REACHID_SEED if set and numeric, otherwise 0.
inline std::uint64_t default_seed() {
    if (const char* env = std::getenv("REACHID_SEED")) {
        char* end = nullptr;
        const auto v = std::strtoull(env, &end, 0);
        if (end && *end == '\0' && end != env) return v;
    }
    return 0;
}

/// 0 for Unique / PlusMinusUnique, 2 for Ambiguous, 3 otherwise.
constexpr int exit_code(OutcomeKind k) {
    switch (k) {
        case OutcomeKind::Unique:
        case OutcomeKind::PlusMinusUnique: return 0;
        case OutcomeKind::Ambiguous: return 2;
        case OutcomeKind::Degenerate: return 3;
    }
    return 3;
}

inline json tolerances_json(const IdentifyOptions& opt) {
    return {{"set", opt.geometry.set},         {"vertex", opt.geometry.vertex}, {"tie", opt.geometry.tie},
            {"sym", opt.sym},                  {"pivot", opt.linalg.pivot},     {"genericity", opt.genericity},
            {"directions", opt.random_directions}};
}

// ---------------------------------------------------------------------------
// simulate

struct SimulateRequest {
    std::string system_path;
    double lo = 0.0;
    double hi = 1.0;
    std::size_t horizon = 0;
    std::string out_path;  // empty: write to the stream
    OutputFormat format = OutputFormat::Json;
    std::size_t generator_cap = 16;
};

inline std::string simulate_document(const LinearSystem& sys, const IntervalInput& u, std::size_t horizon,
                                     OutputFormat format, std::size_t generator_cap = 16) {
    if (horizon < 1) fail(ErrorKind::SchemaError, "horizon must be at least 1");
    const auto seq = simulate_reach_sequence(sys, u, horizon, generator_cap);
    if (format == OutputFormat::Json) return io::write_reach_file(seq);
    std::vector<SvgLayer> layers;
    for (std::size_t t = 1; t <= seq.horizon(); ++t) layers.push_back({"R(" + std::to_string(t) + ")", seq.at(t)});
    return emit_svg_2d(layers);
}

inline int cmd_simulate(const SimulateRequest& req, std::ostream& log) {
    const auto sys = io::parse_system_file(io::read_file(req.system_path));
    const auto doc = simulate_document(sys, IntervalInput(req.lo, req.hi), req.horizon, req.format, req.generator_cap);
    if (req.out_path.empty()) {
        log << doc;
    } else {
        io::write_file(req.out_path, doc);
        log << "wrote " << req.horizon << " reachable sets to " << req.out_path << "\n";
    }
    return 0;
}

// ---------------------------------------------------------------------------
// identify

inline json genericity_json(const GenericityReport& r) {
    auto flag = [](const Flag& f) { return json{{"ok", f.ok}, {"margin", f.margin}}; };
    json eigs = json::array();
    for (const auto& l : r.eigenvalues) eigs.push_back({l.real(), l.imag()});
    return {{"verdict", to_string(r.verdict)},
            {"a_invertible", flag(r.a_invertible)},
            {"eigs_distinct_A", flag(r.eigs_distinct_A)},
            {"eigs_distinct_A2", flag(r.eigs_distinct_A2)},
            {"b_eta_nonzero", flag(r.b_eta_nonzero)},
            {"controllable", flag(r.controllable)},
            {"asymmetric_ok", r.asymmetric_ok},
            {"symmetric_ok", r.symmetric_ok},
            {"eigenvalues", std::move(eigs)}};
}

inline json outcome_json(const IdentOutcome& out, json provenance) {
    json doc;
    doc["format_version"] = io::format_version;
    if (!out.systems.empty()) {
        const auto& first = out.systems.front();
        doc["n"] = first.n();
        doc["A"] = io::to_json(first.A());
        doc["b"] = io::to_json(first.b());
    }
    doc["provenance"] = std::move(provenance);
    doc["outcome"] = to_string(out.kind);
    doc["symmetric_input"] = out.symmetric_input;

    json systems = json::array();
    for (std::size_t i = 0; i < out.systems.size(); ++i) {
        json s{{"A", io::to_json(out.systems[i].A())}, {"b", io::to_json(out.systems[i].b())}};
        s["genericity"] = i < out.genericity.size() && out.genericity[i] ? genericity_json(*out.genericity[i]) : json();
        systems.push_back(std::move(s));
    }
    doc["systems"] = std::move(systems);

    json cands = json::array();
    for (const auto& c : out.candidates) {
        json e{{"signs", c.signs.str()}, {"status", to_string(c.status)}, {"max_gap", c.max_gap}};
        e["eliminated_at"] = c.eliminated_at ? json(*c.eliminated_at) : json();
        if (c.system) {
            e["A"] = io::to_json(c.system->A());
            e["b"] = io::to_json(c.system->b());
        }
        cands.push_back(std::move(e));
    }
    doc["candidates"] = std::move(cands);

    json res = json::array();
    for (std::size_t t = 0; t < out.residuals.size(); ++t)
        res.push_back({{"t", t + 1}, {"max_gap", out.residuals[t]}});
    doc["residuals"] = std::move(res);
    doc["notes"] = out.notes;

    if (out.error) {
        doc["error"] = {{"kind", to_string(*out.error)},
                        {"message", out.error_message},
                        {"t", out.error_time ? json(*out.error_time) : json()},
                        {"stage", out.error_stage}};
    }
    return doc;
}

inline void print_matrix(std::ostream& os, const Matrix& m, const char* indent) {
    for (std::size_t i = 0; i < m.rows(); ++i) {
        os << indent << "[";
        for (std::size_t j = 0; j < m.cols(); ++j) os << (j ? ", " : "") << m(i, j) + 0.0;
        os << "]\n";
    }
}

inline void print_summary(std::ostream& os, const IdentOutcome& out) {
    os << "outcome: " << to_string(out.kind) << (out.symmetric_input ? " (symmetric input)" : "") << "\n";
    if (out.error) {
        os << "error: " << to_string(*out.error) << ": " << out.error_message;
        if (out.error_time) os << " [t = " << *out.error_time << ", stage " << out.error_stage << "]";
        os << "\n";
        return;
    }
    for (std::size_t i = 0; i < out.systems.size(); ++i) {
        const auto& s = out.systems[i];
        os << "system " << i + 1 << ":\n  A =\n";
        print_matrix(os, s.A(), "    ");
        os << "  b = [";
        for (std::size_t j = 0; j < s.n(); ++j) os << (j ? ", " : "") << s.b()[j] + 0.0;
        os << "]\n";
        if (i < out.genericity.size() && out.genericity[i]) {
            const auto& g = *out.genericity[i];
            os << "  genericity: " << to_string(g.verdict) << " (invertible " << g.a_invertible.ok
               << ", distinct eig(A) " << g.eigs_distinct_A.ok << ", distinct eig(A^2) " << g.eigs_distinct_A2.ok
               << ", b.eta " << g.b_eta_nonzero.ok << ", controllable " << g.controllable.ok << ")\n";
        }
    }
    std::size_t eliminated = 0;
    for (const auto& c : out.candidates)
        if (c.status == CandidateStatus::Eliminated) ++eliminated;
    if (out.candidates.size() > 1)
        os << "candidates: " << out.candidates.size() << " logged, " << eliminated << " eliminated\n";
    double worst = 0.0;
    for (double r : out.residuals) worst = std::max(worst, r);
    os << "max support residual: " << worst << "\n";
    for (const auto& n : out.notes) os << "note: " << n << "\n";
}

struct IdentifyRequest {
    std::string reach_path;
    std::string out_path;  // empty: no file
    IdentifyOptions options;
};

inline int cmd_identify(const IdentifyRequest& req, std::ostream& log) {
    IdentOutcome out;
    try {
        out = try_identify(io::parse_reach_file(io::read_file(req.reach_path)), req.options);
    } catch (const Error& e) {
        out.kind = OutcomeKind::Degenerate;
        out.error = e.kind();
        out.error_message = e.detail();
        out.error_stage = "input";
    }
    json prov{{"command", "identify"},
              {"source", req.reach_path},
              {"seed", req.options.seed},
              {"tolerances", tolerances_json(req.options)}};
    if (!req.out_path.empty()) io::write_file(req.out_path, io::pretty(outcome_json(out, std::move(prov))));
    print_summary(log, out);
    return exit_code(out.kind);
}

// ---------------------------------------------------------------------------
// verify

struct VerifyStep {
    std::size_t t = 0;
    bool equal = false;
    double gap = 0.0;
};

/// Compares the reachable sets of two systems at t = 1..horizon.
inline std::vector<VerifyStep> verify_systems(const LinearSystem& x, const LinearSystem& y, const IntervalInput& u,
                                              std::size_t horizon, double tol_set = 1e-7, std::uint64_t seed = 0) {
    if (x.n() != y.n()) fail(ErrorKind::DimensionMismatch, "systems of different order");
    const DirectionSampler sampler(x.n(), seed);
    const auto zx = reachable_zonotopes(x, u, horizon);
    const auto zy = reachable_zonotopes(y, u, horizon);
    std::vector<VerifyStep> out;
    for (std::size_t t = 1; t <= horizon; ++t) {
        const auto g = support_gap(zx[t - 1], zy[t - 1], sampler);
        out.push_back({t, g.gap <= tol_set * (1.0 + g.scale), g.gap});
    }
    return out;
}

struct VerifyRequest {
    std::string system_a;
    std::string system_b;
    double lo = 0.0;
    double hi = 1.0;
    std::size_t horizon = 0;
    double tol_set = 1e-7;
    std::uint64_t seed = 0;
    std::string out_path;
};

/// Exit 0 when the sets agree at every time step, 1 otherwise.
inline int cmd_verify(const VerifyRequest& req, std::ostream& log) {
    if (req.horizon < 1) fail(ErrorKind::SchemaError, "horizon must be at least 1");
    const auto x = io::parse_system_file(io::read_file(req.system_a));
    const auto y = io::parse_system_file(io::read_file(req.system_b));
    const auto steps = verify_systems(x, y, IntervalInput(req.lo, req.hi), req.horizon, req.tol_set, req.seed);
    bool all = true;
    json rows = json::array();
    for (const auto& s : steps) {
        all = all && s.equal;
        log << "t = " << s.t << ": " << (s.equal ? "equal" : "different") << ", max support gap " << s.gap << "\n";
        rows.push_back({{"t", s.t}, {"equal", s.equal}, {"max_gap", s.gap}});
    }
    if (!req.out_path.empty())
        io::write_file(req.out_path, io::pretty(json{{"equal", all}, {"steps", std::move(rows)}}));
    return all ? 0 : 1;
}

// ---------------------------------------------------------------------------
// plot

struct PlotRequest {
    std::vector<std::string> reach_paths;
    std::optional<std::size_t> time;  // a single time step from every file; all steps if unset
    std::string out_path;
};

inline int cmd_plot(const PlotRequest& req, std::ostream& log) {
    if (req.reach_paths.empty()) fail(ErrorKind::InvalidArgument, "no reach files given");
    std::vector<SvgLayer> layers;
    for (const auto& path : req.reach_paths) {
        const auto seq = io::parse_reach_file(io::read_file(path));
        const std::string stem = std::filesystem::path(path).stem().string();
        const std::string prefix = req.reach_paths.size() > 1 ? stem + " " : "";
        if (req.time) {
            if (*req.time < 1 || *req.time > seq.horizon())
                fail(ErrorKind::InvalidArgument, path + " has no set at t = " + std::to_string(*req.time));
            layers.push_back({prefix + "R(" + std::to_string(*req.time) + ")", seq.at(*req.time)});
        } else {
            for (std::size_t t = 1; t <= seq.horizon(); ++t)
                layers.push_back({prefix + "R(" + std::to_string(t) + ")", seq.at(t)});
        }
    }
    const auto svg = emit_svg_2d(layers);
    if (req.out_path.empty()) log << svg;
    else io::write_file(req.out_path, svg);
    return 0;
}

}  // namespace reachid::cli
