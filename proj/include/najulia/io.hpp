#pragma once

// JSON serialization of specs and reports, CSV emitters for tables.
// Spec schema:
//   {"kind": "hdmax" | "constant" | "explicit",
//    "c": [re, im], "m": int,             (constant)
//    "list": [[re, im, m], ...],          (explicit)
//    "declared_bounded": bool, "horizon_default": int}

#include <charconv>
#include <cstdio>
#include <string>
#include <vector>

#include <json.hpp>

#include "najulia/dimension.hpp"
#include "najulia/errors.hpp"
#include "najulia/geometry.hpp"
#include "najulia/ncifs.hpp"
#include "najulia/seqcore.hpp"

namespace najulia {

using json = nlohmann::json;

inline json to_json(Complex z) {
    return json::array({z.real(), z.imag()});
}

inline Complex complex_from_json(const json& j, const std::string& field) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw ConfigParseError("field '" + field + "' must be a [re, im] pair");
    return {j[0].get<double>(), j[1].get<double>()};
}

inline json param_spec_to_json(const ParamSpec& spec) {
    json j;
    switch (spec.kind()) {
    case SpecKind::HdMaxFormula:
        j["kind"] = "hdmax";
        break;
    case SpecKind::ConstantFormula:
        j["kind"] = "constant";
        j["c"] = to_json(spec.constant_c());
        j["m"] = spec.constant_m();
        break;
    case SpecKind::ExplicitList: {
        j["kind"] = "explicit";
        json list = json::array();
        for (const auto& e : spec.entries())
            list.push_back(json::array({e.c.real(), e.c.imag(), e.m}));
        j["list"] = std::move(list);
        break;
    }
    }
    j["declared_bounded"] = spec.declared_bounded();
    j["horizon_default"] = spec.horizon_default();
    return j;
}

inline ParamSpec param_spec_from_json(const json& j) {
    if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string())
        throw ConfigParseError("spec must be an object with a string 'kind'");
    const std::string kind = j["kind"].get<std::string>();
    const std::int64_t horizon = j.value("horizon_default", std::int64_t(64));
    if (kind == "hdmax")
        return ParamSpec::hd_max(horizon);
    if (kind == "constant") {
        if (!j.contains("c") || !j.contains("m"))
            throw ConfigParseError("constant spec needs 'c' and 'm'");
        if (!j["m"].is_number_integer())
            throw ConfigParseError("field 'm' must be an integer");
        return ParamSpec::constant(complex_from_json(j["c"], "c"), j["m"].get<std::int64_t>(),
                                   horizon);
    }
    if (kind == "explicit") {
        if (!j.contains("list") || !j["list"].is_array())
            throw ConfigParseError("explicit spec needs a 'list' array");
        std::vector<ParamEntry> entries;
        for (const auto& row : j["list"]) {
            if (!row.is_array() || row.size() != 3 || !row[2].is_number_integer())
                throw ConfigParseError("explicit list rows must be [re, im, m] with integer m");
            entries.push_back({Complex(row[0].get<double>(), row[1].get<double>()),
                               row[2].get<std::int64_t>()});
        }
        return ParamSpec::explicit_list(std::move(entries), j.value("declared_bounded", false));
    }
    throw ConfigParseError("unknown spec kind '" + kind + "'");
}

// --- reports ---------------------------------------------------------------

inline json to_json(const ValidationReport& rep) {
    json rows = json::array();
    for (const auto& r : rep.rows)
        rows.push_back({{"k", r.k},
                        {"c", to_json(r.c)},
                        {"m", r.m},
                        {"modulus_ok", r.modulus_ok},
                        {"strong_ok", r.strong_ok},
                        {"weak_ok", r.weak_ok}});
    return {{"rows", std::move(rows)},
            {"all_modulus", rep.all_modulus},
            {"all_strong", rep.all_strong},
            {"all_weak", rep.all_weak}};
}

inline json to_json(const DimensionReport& rep) {
    json trend = json::array();
    for (const auto& t : rep.trend)
        trend.push_back({{"k", t.k}, {"a", t.a}, {"b", t.b}, {"ratio", t.ratio}});
    return {{"K", rep.K},
            {"a_K", rep.a_K},
            {"b_K", rep.b_K},
            {"ratio", rep.ratio},
            {"trend", std::move(trend)},
            {"limits_stabilized", rep.limits_stabilized},
            {"rel_change_a", rep.rel_change_a},
            {"rel_change_b", rep.rel_change_b},
            {"cover_bound_theorem", rep.cover_bound_theorem},
            {"cover_bound_sharp", rep.cover_bound_sharp}};
}

inline json to_json(const BoxCountResult& res) {
    return {{"scales", res.scales},
            {"counts", res.counts},
            {"slope", res.slope},
            {"r_squared", res.r_squared}};
}

inline json to_json(const SystemCheck& chk) {
    return {{"open_set_ok", chk.open_set_ok},
            {"conformality_ok", chk.conformality_ok},
            {"contraction_ok", chk.contraction_ok},
            {"balanced_ok", chk.balanced_ok},
            {"epsilon", chk.epsilon},
            {"eta_eps", chk.eta_eps},
            {"min_branch_clearance", chk.min_branch_clearance},
            {"distortion_ratio", chk.distortion_ratio},
            {"pass", chk.pass()}};
}

inline const char* verdict_name(Verdict v) {
    switch (v) {
    case Verdict::UniformlyPerfect:
        return "uniformly_perfect";
    case Verdict::HNUP:
        return "hnup";
    case Verdict::Undetermined:
        return "undetermined";
    }
    return "undetermined";
}

inline json to_json(const Classification& cl) {
    return {{"verdict", verdict_name(cl.verdict)},
            {"horizon", cl.horizon},
            {"sup_abs_c", cl.sup_abs_c},
            {"modulus_first", cl.modulus_first},
            {"modulus_last", cl.modulus_last}};
}

inline json to_json(const SeparationResult& res) {
    return {{"k", res.k},
            {"pass", res.pass},
            {"preimage_containment_ok", res.preimage_containment_ok},
            {"annuli_ok", res.annuli_ok},
            {"containment_clearance", res.containment_clearance},
            {"min_clearance", res.min_clearance},
            {"mesh_spacing", res.mesh_spacing},
            {"words_checked", res.words_checked}};
}

inline json to_json(const Word& w) {
    return json(w.letters);
}

// --- files ------------------------------------------------------------------

namespace detail {

class CsvFile {
public:
    explicit CsvFile(const std::string& path) : path_(path), f_(std::fopen(path.c_str(), "wb")) {
        if (!f_)
            throw IoFailure("cannot open " + path + " for writing");
    }
    ~CsvFile() {
        if (f_)
            std::fclose(f_);
    }
    CsvFile(const CsvFile&) = delete;
    CsvFile& operator=(const CsvFile&) = delete;

    void line(const std::string& s) {
        if (std::fputs(s.c_str(), f_) < 0 || std::fputc('\n', f_) == EOF)
            throw IoFailure("short write to " + path_);
    }

private:
    std::string path_;
    std::FILE* f_;
};

// shortest round-trip decimal, deterministic for a given value
inline std::string fmt(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

} // namespace detail

inline void write_trend_csv(const DimensionReport& rep, const std::string& path) {
    detail::CsvFile f(path);
    f.line("k,a,b,ratio");
    for (const auto& t : rep.trend)
        f.line(std::to_string(t.k) + "," + detail::fmt(t.a) + "," + detail::fmt(t.b) + "," +
               detail::fmt(t.ratio));
}

inline void write_boxcount_csv(const BoxCountResult& res, const std::string& path) {
    detail::CsvFile f(path);
    f.line("scale,count");
    for (std::size_t i = 0; i < res.scales.size(); ++i)
        f.line(detail::fmt(res.scales[i]) + "," + std::to_string(res.counts[i]));
}

inline void write_thinness_csv(const ThinnessTable& table, const std::string& path) {
    detail::CsvFile f(path);
    f.line("k,modulus,diam_bound,count");
    for (const auto& r : table.rows)
        f.line(std::to_string(r.k) + "," + detail::fmt(r.modulus) + "," + detail::fmt(r.diam_bound) +
               "," + detail::fmt(r.count));
}

inline std::string word_label(const Word& w) {
    std::string s;
    for (std::size_t i = 0; i < w.letters.size(); ++i) {
        if (i)
            s += '-';
        s += std::to_string(w.letters[i]);
    }
    return s;
}

// limit-point dump: one row per word, lexicographic order
inline void write_limit_points_csv(const ParamSpec& spec, std::int64_t level,
                                   const std::vector<Complex>& points, const std::string& path) {
    detail::CsvFile f(path);
    f.line("word,re,im,radius_bound");
    const std::string rb = detail::fmt(cylinder_radius_bound(spec, level));
    for (std::size_t i = 0; i < points.size(); ++i) {
        const Word w = word_from_index(spec, level, static_cast<std::int64_t>(i));
        f.line(word_label(w) + "," + detail::fmt(points[i].real()) + "," +
               detail::fmt(points[i].imag()) + "," + rb);
    }
}

inline void write_json_file(const json& j, const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "wb");
    if (!f)
        throw IoFailure("cannot open " + path + " for writing");
    const std::string text = j.dump(2) + "\n";
    const bool ok = std::fwrite(text.data(), 1, text.size(), f) == text.size();
    std::fclose(f);
    if (!ok)
        throw IoFailure("short write to " + path);
}

} // namespace najulia
