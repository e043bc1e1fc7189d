#pragma once

// JSON instance files and structured reports.
//
// Instance format (format_version "1.x"):
//   {"format_version": "1.0", "name": ..., "source": ..., "order": m, "dim": n,
//    "A1": [n^m numbers, row-major], "A2": [...], "q1": [n], "q2": [n]}

#include "vtcp/classes.hpp"
#include "vtcp/errors.hpp"
#include "vtcp/solvers.hpp"

#include <json.hpp>

#include <cerrno>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

namespace vtcp {

using Json = nlohmann::json;

inline constexpr const char* kFormatVersion = "1.0";

struct InstanceFile {
    VtcpInstance instance;
    std::string name;
    std::string source;
};

namespace detail {

inline std::size_t line_of_offset(std::string_view text, std::size_t offset) {
    offset = std::min(offset, text.size());
    return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(offset), '\n'));
}

/// Line of the first occurrence of the key `"field"`; 0 when absent.
inline std::size_t line_of_field(std::string_view text, std::string_view field) {
    const std::string key = "\"" + std::string(field) + "\"";
    const auto pos = text.find(key);
    return pos == std::string_view::npos ? 0 : line_of_offset(text, pos);
}

inline Vector number_array(const Json& doc, std::string_view text, const char* field) {
    if (!doc.contains(field))
        throw FormatError(std::string("missing field '") + field + "'", field, 0);
    const Json& arr = doc.at(field);
    if (!arr.is_array())
        throw FormatError(std::string("field '") + field + "' must be an array of numbers", field,
                          line_of_field(text, field));
    Vector out;
    out.reserve(arr.size());
    for (const Json& v : arr) {
        if (!v.is_number())
            throw FormatError(std::string("field '") + field + "' contains a non-numeric or non-finite entry", field,
                              line_of_field(text, field));
        const double d = v.get<double>();
        if (!std::isfinite(d))
            throw FormatError(std::string("field '") + field + "' contains a non-finite entry", field,
                              line_of_field(text, field));
        out.push_back(d);
    }
    return out;
}

inline std::size_t positive_int(const Json& doc, std::string_view text, const char* field) {
    if (!doc.contains(field))
        throw FormatError(std::string("missing field '") + field + "'", field, 0);
    const Json& v = doc.at(field);
    if (!v.is_number_integer() || v.get<long long>() < 1)
        throw FormatError(std::string("field '") + field + "' must be a positive integer", field,
                          line_of_field(text, field));
    return static_cast<std::size_t>(v.get<long long>());
}

inline void check_version(const Json& doc, std::string_view text) {
    if (!doc.contains("format_version"))
        throw FormatError("missing field 'format_version'", "format_version", 0);
    const Json& v = doc.at("format_version");
    if (!v.is_string())
        throw FormatError("field 'format_version' must be a string", "format_version",
                          line_of_field(text, "format_version"));
    const std::string s = v.get<std::string>();
    const std::string major = s.substr(0, s.find('.'));
    if (major != "1")
        throw FormatError("unsupported format_version '" + s + "' (this reader understands 1.x)", "format_version",
                          line_of_field(text, "format_version"));
}

} // namespace detail

inline Json instance_to_json(const VtcpInstance& inst, std::string_view name = {}, std::string_view source = {}) {
    Json j;
    j["format_version"] = kFormatVersion;
    if (!name.empty())
        j["name"] = std::string(name);
    if (!source.empty())
        j["source"] = std::string(source);
    j["order"] = inst.order();
    j["dim"] = inst.dim();
    j["A1"] = Vector(inst.a1().entries().begin(), inst.a1().entries().end());
    j["A2"] = Vector(inst.a2().entries().begin(), inst.a2().entries().end());
    j["q1"] = inst.q1();
    j["q2"] = inst.q2();
    return j;
}

/// Parse and validate instance text. Syntax errors carry the line; invariant
/// violations name the offending field.
inline InstanceFile parse_instance(std::string_view text) {
    Json doc;
    try {
        doc = Json::parse(text.begin(), text.end());
    } catch (const Json::parse_error& e) {
        throw FormatError(std::string("JSON syntax error: ") + e.what(), {},
                          detail::line_of_offset(text, e.byte == 0 ? 0 : e.byte - 1));
    } catch (const Json::out_of_range& e) {
        // Number literals beyond double range, e.g. 1e999.
        throw FormatError(std::string("number out of range: ") + e.what(), {}, 0);
    }
    if (!doc.is_object())
        throw FormatError("instance file must contain a JSON object", {}, 1);
    detail::check_version(doc, text);
    const std::size_t order = detail::positive_int(doc, text, "order");
    const std::size_t dim = detail::positive_int(doc, text, "dim");
    if (order < 2)
        throw FormatError("field 'order' must be at least 2", "order", detail::line_of_field(text, "order"));
    std::size_t expected = 0;
    try {
        expected = detail::checked_pow(dim, order);
    } catch (const DimensionError&) {
        throw FormatError("dim^order overflows", "order", detail::line_of_field(text, "order"));
    }
    auto tensor = [&](const char* field) {
        Vector e = detail::number_array(doc, text, field);
        if (e.size() != expected)
            throw FormatError(std::string("field '") + field + "' has " + std::to_string(e.size()) +
                                  " entries, expected dim^order = " + std::to_string(expected),
                              field, detail::line_of_field(text, field));
        return DenseTensor(order, dim, std::move(e));
    };
    auto vec = [&](const char* field) {
        Vector v = detail::number_array(doc, text, field);
        if (v.size() != dim)
            throw FormatError(std::string("field '") + field + "' has " + std::to_string(v.size()) +
                                  " entries, expected dim = " + std::to_string(dim),
                              field, detail::line_of_field(text, field));
        return v;
    };
    DenseTensor a1 = tensor("A1");
    DenseTensor a2 = tensor("A2");
    Vector q1 = vec("q1");
    Vector q2 = vec("q2");
    InstanceFile f{VtcpInstance(TensorPair(std::move(a1), std::move(a2)), std::move(q1), std::move(q2)), {}, {}};
    if (doc.contains("name") && doc["name"].is_string())
        f.name = doc["name"].get<std::string>();
    if (doc.contains("source") && doc["source"].is_string())
        f.source = doc["source"].get<std::string>();
    return f;
}

inline std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error("cannot open '" + path + "': " + std::strerror(errno));
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw Error("cannot open '" + path + "' for writing: " + std::strerror(errno));
    out << text;
    if (!out)
        throw Error("write to '" + path + "' failed: " + std::strerror(errno));
}

inline InstanceFile load_instance_file(const std::string& path) { return parse_instance(read_text_file(path)); }

inline VtcpInstance load_instance(const std::string& path) { return load_instance_file(path).instance; }

inline void save_instance(const VtcpInstance& inst, const std::string& path, std::string_view name = {},
                          std::string_view source = {}) {
    write_text_file(path, instance_to_json(inst, name, source).dump(2) + "\n");
}

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

inline Json point_to_json(const CertificatePoint& p) {
    Json j;
    if (const auto* x = std::get_if<Vector>(&p)) {
        j["kind"] = "vector";
        j["x"] = *x;
    } else if (const auto* xy = std::get_if<VectorPair>(&p)) {
        j["kind"] = "pair";
        j["x"] = xy->first;
        j["y"] = xy->second;
    } else {
        const auto& z = std::get<SymTensor>(p);
        j["kind"] = "symmetric-tensor";
        j["order"] = z.order();
        j["dim"] = z.dim();
        j["distinct_entries"] = Vector(z.distinct_entries().begin(), z.distinct_entries().end());
    }
    return j;
}

inline Json verdict_to_json(const ClassVerdict& v) {
    Json j;
    j["class"] = v.class_name;
    j["outcome"] = std::string(to_string(v.outcome));
    if (!v.proof_tag.empty())
        j["proof"] = v.proof_tag;
    if (!v.note.empty())
        j["note"] = v.note;
    if (v.certificate) {
        const Certificate& c = *v.certificate;
        Json cj;
        cj["point"] = point_to_json(c.point);
        if (!c.image1.empty())
            cj["image1"] = c.image1;
        if (!c.image2.empty())
            cj["image2"] = c.image2;
        cj["components"] = c.components;
        cj["value"] = c.value;
        if (v.class_name == "R-tensor")
            cj["t"] = c.t;
        cj["boundary"] = c.boundary;
        j["certificate"] = std::move(cj);
    }
    Json e;
    e["lattice_points"] = v.effort.lattice_points;
    e["starts"] = v.effort.starts;
    e["evaluations"] = v.effort.evaluations;
    if (std::isfinite(v.effort.best_value))
        e["best_value"] = v.effort.best_value;
    j["effort"] = std::move(e);
    return j;
}

inline Json report_to_json(const SolveReport& r) {
    Json j;
    j["method"] = std::string(to_string(r.method));
    j["status"] = std::string(to_string(r.status));
    j["x"] = r.x;
    if (std::isfinite(r.residual_inf_norm))
        j["residual_inf_norm"] = r.residual_inf_norm;
    j["iterations"] = r.iterations;
    if (!r.trace.empty())
        j["trace"] = r.trace;
    if (!r.homotopy_t.empty())
        j["homotopy_t"] = r.homotopy_t;
    if (!r.active_sets.empty())
        j["active_sets"] = r.active_sets;
    if (!r.iterates.empty())
        j["iterates"] = r.iterates;
    if (!r.warnings.empty())
        j["warnings"] = r.warnings;
    return j;
}

inline Json verification_to_json(const Verification& v) {
    return Json{{"passed", v.passed()},
                {"feasible1", v.feasible1},
                {"feasible2", v.feasible2},
                {"complementary", v.complementary},
                {"residual_ok", v.residual_ok},
                {"min_image1", v.min_image1},
                {"min_image2", v.min_image2},
                {"inner_product", v.inner_product},
                {"inner_bound", v.inner_bound},
                {"residual_inf_norm", v.residual_inf_norm}};
}

inline Json oracle_to_json(const OracleResult& o) {
    Json j;
    j["method"] = "oracle";
    j["solutions"] = o.solutions;
    j["non_isolated"] = o.non_isolated;
    j["grid_points"] = o.grid_points;
    j["candidates"] = o.candidates;
    return j;
}

inline void save_report(const Json& report, const std::string& path) { write_text_file(path, report.dump(2) + "\n"); }

inline void save_report(const SolveReport& report, const std::string& path) { save_report(report_to_json(report), path); }

inline void save_report(const ClassVerdict& verdict, const std::string& path) {
    save_report(verdict_to_json(verdict), path);
}

} // namespace vtcp
