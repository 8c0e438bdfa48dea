/**
 * @file io.hpp
 * @brief Run configuration, atomic file output and JSON serialisation.
 *
 * Needs nlohmann/json (`json.hpp`) on the include path. The configuration
 * schema is versioned and strict: unknown keys are errors.
 */
#pragma once

#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "stagwave/bifurcation.hpp"
#include "stagwave/dispersion.hpp"
#include "stagwave/error.hpp"
#include "stagwave/flowviz.hpp"
#include "stagwave/format.hpp"
#include "stagwave/model.hpp"

namespace stagwave::io {

using json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

enum class Format { Json, Csv, Svg };

inline const char* to_string(Format f) {
    switch (f) {
    case Format::Json: return "json";
    case Format::Csv: return "csv";
    case Format::Svg: return "svg";
    }
    return "?";
}

inline Format parse_format(const std::string& s) {
    if (s == "json") return Format::Json;
    if (s == "csv") return Format::Csv;
    if (s == "svg") return Format::Svg;
    throw Error(ErrorCode::ConfigError, "unknown output format '" + s + "'");
}

/// Comma-separated list such as "json,csv".
inline std::set<Format> parse_formats(const std::string& list) {
    std::set<Format> out;
    std::size_t start = 0;
    while (start <= list.size()) {
        const std::size_t end = std::min(list.find(',', start), list.size());
        out.insert(parse_format(list.substr(start, end - start)));
        start = end + 1;
    }
    return out;
}

struct SweepGrid {
    std::vector<double> gamma1, gamma2, d1, d2, L;
};

struct DispersionGrid {
    double t_min = 0.1;
    double t_max = 1e4;
    int samples = 200;
};

struct RunConfig {
    FluidParams fluid;               ///< L is ignored when `wavelength` is empty
    std::vector<int> branches{1};    ///< {1, 2, 3} for "all"
    std::optional<double> wavelength;  ///< empty: AUTO from the threshold
    std::optional<double> amplitude;   ///< empty: AUTO
    std::string output_directory = "out";
    std::set<Format> formats{Format::Json, Format::Csv, Format::Svg};
    std::optional<SweepGrid> sweep;
    DispersionGrid dispersion;
    int k_max = kDefaultKMax;
    double wavelength_fraction = kAutoWavelengthFraction;

    bool wants(Format f) const { return formats.count(f) > 0; }
    /// Fluid with the explicit wavelength, or with L = 1 as a placeholder under AUTO.
    FluidConfig fluid_config() const {
        FluidParams p = fluid;
        p.L = wavelength.value_or(1.0);
        return validate_config(p);
    }
};

namespace detail {

[[noreturn]] inline void config_error(const std::string& msg) { throw Error(ErrorCode::ConfigError, msg); }

inline void reject_unknown(const json& obj, const std::string& where, std::initializer_list<const char*> known) {
    if (!obj.is_object()) config_error(where + " must be an object");
    for (const auto& [key, value] : obj.items()) {
        bool ok = false;
        for (const char* k : known) ok = ok || key == k;
        if (!ok) config_error("unknown field '" + key + "' in " + where);
    }
}

inline double number(const json& v, const std::string& where) {
    if (!v.is_number()) config_error(where + " must be a number");
    return v.get<double>();
}

inline std::vector<double> grid(const json& v, const std::string& where) {
    if (!v.is_array()) config_error(where + " must be an array of numbers");
    if (v.empty()) config_error(where + " must not be empty");
    std::vector<double> out;
    for (const json& x : v) out.push_back(number(x, where + " entry"));
    return out;
}

}  // namespace detail

inline std::vector<int> parse_branch(const std::string& s) {
    if (s == "all") return {1, 2, 3};
    if (s == "1" || s == "2" || s == "3") return {s[0] - '0'};
    throw Error(ErrorCode::ConfigError, "branch must be 1, 2, 3 or all, got '" + s + "'");
}

/// Parse and validate a configuration document. The fluid is validated too.
inline RunConfig parse_run_config(const json& doc) {
    using detail::config_error;
    detail::reject_unknown(doc, "config",
                           {"schema_version", "fluid", "branch", "wavelength", "amplitude", "output", "sweep",
                            "dispersion", "tolerances"});
    if (!doc.contains("schema_version")) config_error("missing schema_version");
    if (!doc["schema_version"].is_number_integer() || doc["schema_version"].get<int>() != kSchemaVersion)
        config_error("unsupported schema_version, expected " + std::to_string(kSchemaVersion));
    if (!doc.contains("fluid")) config_error("missing fluid");

    RunConfig rc;
    const json& f = doc["fluid"];
    detail::reject_unknown(f, "fluid", {"gamma1", "gamma2", "d1", "d2", "g"});
    for (const char* k : {"gamma1", "gamma2", "d1", "d2"})
        if (!f.contains(k)) config_error(std::string("missing fluid.") + k);
    rc.fluid.gamma1 = detail::number(f["gamma1"], "fluid.gamma1");
    rc.fluid.gamma2 = detail::number(f["gamma2"], "fluid.gamma2");
    rc.fluid.d1 = detail::number(f["d1"], "fluid.d1");
    rc.fluid.d2 = detail::number(f["d2"], "fluid.d2");
    if (f.contains("g")) rc.fluid.g = detail::number(f["g"], "fluid.g");

    if (doc.contains("branch")) {
        const json& b = doc["branch"];
        if (b.is_number_integer())
            rc.branches = parse_branch(std::to_string(b.get<int>()));
        else if (b.is_string())
            rc.branches = parse_branch(b.get<std::string>());
        else
            config_error("branch must be 1, 2, 3 or \"all\"");
    }
    for (const char* key : {"wavelength", "amplitude"}) {
        if (!doc.contains(key)) continue;
        const json& v = doc[key];
        std::optional<double> value;
        if (v.is_string()) {
            if (v.get<std::string>() != "auto") config_error(std::string(key) + " must be a number or \"auto\"");
        } else {
            value = detail::number(v, key);
        }
        (std::string(key) == "wavelength" ? rc.wavelength : rc.amplitude) = value;
    }
    if (rc.amplitude && !(*rc.amplitude >= 0.0)) config_error("amplitude must be non-negative");

    if (doc.contains("output")) {
        const json& o = doc["output"];
        detail::reject_unknown(o, "output", {"directory", "formats"});
        if (o.contains("directory")) {
            if (!o["directory"].is_string()) config_error("output.directory must be a string");
            rc.output_directory = o["directory"].get<std::string>();
        }
        if (o.contains("formats")) {
            if (!o["formats"].is_array()) config_error("output.formats must be an array");
            rc.formats.clear();
            for (const json& x : o["formats"]) {
                if (!x.is_string()) config_error("output.formats entries must be strings");
                rc.formats.insert(parse_format(x.get<std::string>()));
            }
            if (rc.formats.empty()) config_error("output.formats must not be empty");
        }
    }

    if (doc.contains("sweep")) {
        const json& s = doc["sweep"];
        detail::reject_unknown(s, "sweep", {"gamma1", "gamma2", "d1", "d2", "L"});
        if (s.empty()) config_error("sweep must contain at least one grid");
        SweepGrid g;
        if (s.contains("gamma1")) g.gamma1 = detail::grid(s["gamma1"], "sweep.gamma1");
        if (s.contains("gamma2")) g.gamma2 = detail::grid(s["gamma2"], "sweep.gamma2");
        if (s.contains("d1")) g.d1 = detail::grid(s["d1"], "sweep.d1");
        if (s.contains("d2")) g.d2 = detail::grid(s["d2"], "sweep.d2");
        if (s.contains("L")) g.L = detail::grid(s["L"], "sweep.L");
        rc.sweep = g;
    }

    if (doc.contains("dispersion")) {
        const json& d = doc["dispersion"];
        detail::reject_unknown(d, "dispersion", {"t_min", "t_max", "samples"});
        if (d.contains("t_min")) rc.dispersion.t_min = detail::number(d["t_min"], "dispersion.t_min");
        if (d.contains("t_max")) rc.dispersion.t_max = detail::number(d["t_max"], "dispersion.t_max");
        if (d.contains("samples")) {
            if (!d["samples"].is_number_integer()) config_error("dispersion.samples must be an integer");
            rc.dispersion.samples = d["samples"].get<int>();
        }
        if (!(rc.dispersion.t_min > 0.0) || !(rc.dispersion.t_max > rc.dispersion.t_min) || rc.dispersion.samples < 2)
            config_error("dispersion grid needs 0 < t_min < t_max and at least 2 samples");
    }

    if (doc.contains("tolerances")) {
        const json& t = doc["tolerances"];
        detail::reject_unknown(t, "tolerances", {"k_max", "wavelength_fraction"});
        if (t.contains("k_max")) {
            if (!t["k_max"].is_number_integer() || t["k_max"].get<int>() < 2)
                config_error("tolerances.k_max must be an integer >= 2");
            rc.k_max = t["k_max"].get<int>();
        }
        if (t.contains("wavelength_fraction")) {
            rc.wavelength_fraction = detail::number(t["wavelength_fraction"], "tolerances.wavelength_fraction");
            if (!(rc.wavelength_fraction > 0.0 && rc.wavelength_fraction <= 1.0))
                config_error("tolerances.wavelength_fraction must lie in (0, 1]");
        }
    }

    rc.fluid_config();
    return rc;
}

inline RunConfig load_run_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::ConfigError, "cannot open config " + path.string());
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::ConfigError, path.string() + ": " + e.what());
    }
    return parse_run_config(doc);
}

// ---------------------------------------------------------------------------
// Output

/// Write `content` to `path` through a temporary file in the same directory and a rename.
inline void write_atomic(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(ErrorCode::ConfigError, "cannot write " + tmp.string());
        out << content;
        out.flush();
        if (!out) throw Error(ErrorCode::ConfigError, "write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

/// CSV with 17 significant digits; strings are written verbatim.
class CsvWriter {
public:
    explicit CsvWriter(const std::vector<std::string>& header) { row_strings(header); }
    void row(const std::vector<double>& values) {
        for (std::size_t i = 0; i < values.size(); ++i) out_ += (i ? "," : "") + fmt::sig17(values[i]);
        out_ += '\n';
    }
    void row_strings(const std::vector<std::string>& values) {
        for (std::size_t i = 0; i < values.size(); ++i) out_ += (i ? "," : "") + values[i];
        out_ += '\n';
    }
    const std::string& str() const { return out_; }

private:
    std::string out_;
};

/// Finite doubles as numbers, everything else as strings ("inf", "nan").
inline json number_json(double v) { return std::isfinite(v) ? json(v) : json(fmt::sig17(v)); }

inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

inline json fluid_json(const FluidConfig& c) {
    return {{"gamma1", c.gamma1()}, {"gamma2", c.gamma2()}, {"d1", c.d1()}, {"d2", c.d2()}, {"g", c.g()},
            {"L", c.L()}};
}

inline json certificate_json(const BranchCertificate& c) {
    json simplicity = json::array();
    for (const ModeDeterminant& m : c.simplicity)
        simplicity.push_back({{"k", m.k}, {"D", number_json(m.D)}, {"scale", number_json(m.scale)}});
    const StagnationReport& sr = c.stagnation_report;
    json report = {{"top_layer", to_string(sr.top_layer)}, {"bottom_layer", to_string(sr.bottom_layer)}};
    report["y0_top"] = sr.y0_top ? json(*sr.y0_top) : json(nullptr);
    report["y0_bottom"] = sr.y0_bottom ? json(*sr.y0_bottom) : json(nullptr);
    return {
        {"theorem", to_string(c.theorem)},
        {"branch", c.branch_id},
        {"effective_branch", c.effective_branch},
        {"fluid", fluid_json(c.cfg)},
        {"Lambda_star", c.Lambda_star},
        {"L", c.cfg.L()},
        {"L_effective", c.L_effective},
        {"resonance_k", c.resonance_k},
        {"resonance_gap", number_json(c.resonance_gap)},
        {"t0", c.t0},
        {"L0", c.L0},
        {"kernel", {{"a", c.kernel.a}, {"b", c.kernel.b}, {"formula", c.kernel.formula}}},
        {"symbols", {{"m11", c.symbols.m11}, {"m12", c.symbols.m12}, {"m21", c.symbols.m21}, {"m22", c.symbols.m22}}},
        {"amplitude_ratio", number_json(c.amplitude_ratio)},
        {"defining_residual", number_json(c.defining_residual)},
        {"simplicity", simplicity},
        {"min_simplicity_ratio", number_json(c.min_simplicity_ratio)},
        {"asymptotic_dominance", c.asymptotic_dominance},
        {"transversality", number_json(c.transversality)},
        {"D_lambda", number_json(c.D_lambda)},
        {"stagnation", c.stagnation.tag()},
        {"stagnation_report", report},
        {"notes", c.notes},
    };
}

inline json predicate_json(const PredicateReport& r) {
    json items = json::array();
    for (const PredicateItem& it : r.items) {
        json checks = json::array();
        for (const SignCheck& c : it.checks)
            checks.push_back(
                {{"name", c.name}, {"passed", c.passed}, {"margin", number_json(c.margin)}, {"samples", c.samples}});
        items.push_back({{"id", it.id}, {"passed", it.passed}, {"checks", checks}});
    }
    return {{"lemma", r.lemma},
            {"reading", to_string(r.reading)},
            {"all_pass", r.all_pass},
            {"failing_predicate", r.failing_predicate()},
            {"items", items}};
}

}  // namespace stagwave::io
