#pragma once

// JSON exchange formats for reachable-set sequences and identified systems.
//
//   reach file:  {"format_version":"1","n":2,"input_set":{"lo":-1,"hi":1},
//                 "sets":[{"t":1,"vertices":[[0,1],[0,-1]]}, ...]}
//   system file: {"format_version":"1","n":2,"A":[[2,1],[2,3]],"b":[0,1],
//                 "provenance":{...}}

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <iterator>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "reachid/error.hpp"
#include "reachid/linalg.hpp"
#include "reachid/reach.hpp"
#include "reachid/setgeom.hpp"

namespace reachid::io {

using json = nlohmann::ordered_json;

inline constexpr std::string_view format_version = "1";

namespace detail {

inline std::size_t line_of(std::string_view text, std::size_t byte) {
    byte = std::min(byte, text.size());
    return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(byte), '\n'));
}

[[noreturn]] inline void schema(const std::string& path, const std::string& what) {
    fail(ErrorKind::SchemaError, path + ": " + what);
}

inline json parse_json(std::string_view text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        // nlohmann reports the byte just past the offending token
        const std::size_t byte = e.byte > 0 ? e.byte - 1 : 0;
        fail(ErrorKind::ParseError, "line " + std::to_string(line_of(text, byte)) + ": " + e.what());
    }
}

inline const json& field(const json& obj, const char* key, const std::string& path) {
    if (!obj.is_object()) schema(path, "expected an object");
    const auto it = obj.find(key);
    if (it == obj.end()) schema(path, std::string("missing field '") + key + "'");
    return *it;
}

inline double number(const json& v, const std::string& path) {
    if (!v.is_number()) schema(path, "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) schema(path, "number is not finite");
    return x;
}

inline std::size_t count(const json& v, const std::string& path) {
    if (!v.is_number_integer() || v.get<long long>() < 0) schema(path, "expected a non-negative integer");
    return v.get<std::size_t>();
}

inline Vector vector(const json& v, std::size_t n, const std::string& path) {
    if (!v.is_array()) schema(path, "expected an array");
    if (v.size() != n)
        schema(path, "expected " + std::to_string(n) + " entries, got " + std::to_string(v.size()));
    Vector out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = number(v[i], path + "[" + std::to_string(i) + "]");
    return out;
}

inline void check_version(const json& doc) {
    const auto& v = field(doc, "format_version", "$");
    if (!v.is_string() || v.get<std::string>() != format_version)
        schema("$.format_version", "unsupported format version");
}

inline void pretty(std::string& out, const json& j, int depth) {
    const bool flat = j.is_array() && std::none_of(j.begin(), j.end(), [](const json& e) { return e.is_structured(); });
    if (!j.is_structured() || flat || j.empty()) {
        out += j.dump();
        return;
    }
    const std::string pad(static_cast<std::size_t>(2 * (depth + 1)), ' ');
    out += j.is_object() ? "{\n" : "[\n";
    bool first = true;
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += pad;
        if (j.is_object()) out += json(it.key()).dump() + ": ";
        pretty(out, *it, depth + 1);
    }
    out += "\n" + std::string(static_cast<std::size_t>(2 * depth), ' ') + (j.is_object() ? "}" : "]");
}

}  // namespace detail

/// Indented JSON with arrays of scalars kept on one line.
inline std::string pretty(const json& j) {
    std::string out;
    detail::pretty(out, j, 0);
    return out + "\n";
}

// ---------------------------------------------------------------------------
// Reach files

inline ReachSequence reach_from_json(const json& doc) {
    detail::check_version(doc);
    const std::size_t n = detail::count(detail::field(doc, "n", "$"), "$.n");
    if (n == 0) detail::schema("$.n", "dimension must be positive");

    const auto& in = detail::field(doc, "input_set", "$");
    const double lo = detail::number(detail::field(in, "lo", "$.input_set"), "$.input_set.lo");
    const double hi = detail::number(detail::field(in, "hi", "$.input_set"), "$.input_set.hi");
    if (!(lo < hi)) detail::schema("$.input_set", "need lo < hi");

    const auto& sets = detail::field(doc, "sets", "$");
    if (!sets.is_array()) detail::schema("$.sets", "expected an array");
    if (sets.empty()) detail::schema("$.sets", "no sets given");

    ReachSequence seq{n, IntervalInput(lo, hi), {}};
    for (std::size_t k = 0; k < sets.size(); ++k) {
        const std::string path = "$.sets[" + std::to_string(k) + "]";
        const std::size_t t = detail::count(detail::field(sets[k], "t", path), path + ".t");
        if (t != k + 1)
            detail::schema(path + ".t", "time indices must run consecutively from 1 (expected " +
                                            std::to_string(k + 1) + ", got " + std::to_string(t) + ")");
        const auto& verts = detail::field(sets[k], "vertices", path);
        if (!verts.is_array() || verts.empty()) detail::schema(path + ".vertices", "expected a non-empty array");
        std::vector<Vector> pts;
        for (std::size_t j = 0; j < verts.size(); ++j)
            pts.push_back(detail::vector(verts[j], n, path + ".vertices[" + std::to_string(j) + "]"));
        seq.sets.push_back(canonicalize(ConvexVertexSet(n, std::move(pts))));
    }
    return seq;
}

inline ReachSequence parse_reach_file(std::string_view text) { return reach_from_json(detail::parse_json(text)); }

inline json to_json(const Vector& v) {
    json out = json::array();
    for (double x : v) out.push_back(x + 0.0);  // no negative zeros
    return out;
}

inline json to_json(const Matrix& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) rows.push_back(to_json(m.row(i)));
    return rows;
}

inline json reach_to_json(const ReachSequence& seq) {
    json sets = json::array();
    for (std::size_t t = 1; t <= seq.horizon(); ++t) {
        json verts = json::array();
        for (const auto& v : seq.at(t).vertices()) verts.push_back(to_json(v));
        sets.push_back({{"t", t}, {"vertices", std::move(verts)}});
    }
    return {{"format_version", format_version},
            {"n", seq.n},
            {"input_set", {{"lo", seq.input.lo()}, {"hi", seq.input.hi()}}},
            {"sets", std::move(sets)}};
}

/// nlohmann prints doubles in shortest round-trip form.
inline std::string write_reach_file(const ReachSequence& seq) { return pretty(reach_to_json(seq)); }

// ---------------------------------------------------------------------------
// System files

inline LinearSystem system_from_json(const json& doc) {
    detail::check_version(doc);
    const std::size_t n = detail::count(detail::field(doc, "n", "$"), "$.n");
    if (n == 0) detail::schema("$.n", "dimension must be positive");
    const auto& a = detail::field(doc, "A", "$");
    if (!a.is_array() || a.size() != n) detail::schema("$.A", "expected " + std::to_string(n) + " rows");
    Matrix A(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        const Vector row = detail::vector(a[i], n, "$.A[" + std::to_string(i) + "]");
        for (std::size_t j = 0; j < n; ++j) A(i, j) = row[j];
    }
    Vector b = detail::vector(detail::field(doc, "b", "$"), n, "$.b");
    if (b.max_abs() == 0.0) detail::schema("$.b", "b must be nonzero");
    return LinearSystem(std::move(A), std::move(b));
}

inline LinearSystem parse_system_file(std::string_view text) { return system_from_json(detail::parse_json(text)); }

inline json system_to_json(const LinearSystem& sys, json provenance = json::object()) {
    return {{"format_version", format_version},
            {"n", sys.n()},
            {"A", to_json(sys.A())},
            {"b", to_json(sys.b())},
            {"provenance", std::move(provenance)}};
}

inline std::string write_system_file(const LinearSystem& sys, json provenance = json::object()) {
    return pretty(system_to_json(sys, std::move(provenance)));
}

// ---------------------------------------------------------------------------
// Files

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorKind::InvalidArgument, "cannot open '" + path + "'");
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void write_file(const std::string& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(ErrorKind::InvalidArgument, "cannot write '" + path + "'");
    out << content;
    if (!out) fail(ErrorKind::InvalidArgument, "write to '" + path + "' failed");
}

}  // namespace reachid::io
