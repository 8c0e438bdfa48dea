/**
 * @file cli.hpp
 * @brief The `stagwave` subcommands: dispersion, wave, flow, sweep and verify.
 *
 * Exit codes: 0 ok, 1 verification failure, 2 validation, 3 dispersion
 * regime, 4 certification, 5 amplitude or topology. Needs CLI11 and
 * nlohmann/json on the include path.
 */
#pragma once

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "stagwave/acceptance.hpp"
#include "stagwave/bifurcation.hpp"
#include "stagwave/dispersion.hpp"
#include "stagwave/error.hpp"
#include "stagwave/fields.hpp"
#include "stagwave/flowviz.hpp"
#include "stagwave/format.hpp"
#include "stagwave/io.hpp"

namespace stagwave::cli {

namespace fs = std::filesystem;
using io::json;

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerifyFailed = 1;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitDispersion = 3;
inline constexpr int kExitCertification = 4;
inline constexpr int kExitTopology = 5;

inline int exit_code(ErrorCode code) {
    switch (code) {
    case ErrorCode::NonPositiveDepth:
    case ErrorCode::NonPositiveGravity:
    case ErrorCode::NonPositiveWavelength:
    case ErrorCode::EqualVorticities:
    case ErrorCode::NonPositiveWavenumber:
    case ErrorCode::InvalidArgument:
    case ErrorCode::ConfigError: return kExitValidation;
    case ErrorCode::NotThreeRealRoots:
    case ErrorCode::DegenerateRoot: return kExitDispersion;
    case ErrorCode::UnsupportedCase:
    case ErrorCode::NoAdmissibleThreshold:
    case ErrorCode::NonFredholmSpeed:
    case ErrorCode::KernelNotSimple:
    case ErrorCode::TransversalityFailure:
    case ErrorCode::UnsupportedRegime:
    case ErrorCode::WavelengthAboveThreshold:
    case ErrorCode::SingularSystem:
    case ErrorCode::NoSignChange: return kExitCertification;
    case ErrorCode::AmplitudeSelectionFailed:
    case ErrorCode::PointOutsideFluid:
    case ErrorCode::BracketingFailed:
    case ErrorCode::NewtonDivergence:
    case ErrorCode::DegenerateLaminarLine:
    case ErrorCode::GridTooCoarse: return kExitTopology;
    }
    return kExitValidation;
}

/// Command-line values that take precedence over the configuration file.
struct Overrides {
    std::string out;
    std::string format;
    std::string branch;
    std::string s;
};

inline void apply(io::RunConfig& rc, const Overrides& o) {
    if (!o.out.empty()) rc.output_directory = o.out;
    if (!o.format.empty()) rc.formats = io::parse_formats(o.format);
    if (!o.branch.empty()) rc.branches = io::parse_branch(o.branch);
    if (!o.s.empty()) {
        if (o.s == "auto") {
            rc.amplitude.reset();
        } else {
            double v = 0.0;
            try {
                std::size_t used = 0;
                v = std::stod(o.s, &used);
                if (used != o.s.size()) throw std::invalid_argument(o.s);
            } catch (const std::exception&) {
                throw Error(ErrorCode::ConfigError, "--s must be a number or auto, got '" + o.s + "'");
            }
            if (!(v >= 0.0)) throw Error(ErrorCode::ConfigError, "--s must be non-negative");
            rc.amplitude = v;
        }
    }
}

struct Context {
    std::ostream& out;
    std::ostream& err;
};

inline void emit(const Context& ctx, const fs::path& path, const std::string& content) {
    io::write_atomic(path, content);
    ctx.out << "wrote " << path.string() << '\n';
}

inline std::string suffix(int branch) { return "_b" + std::to_string(branch); }

// ---------------------------------------------------------------------------
// dispersion

inline const char* ordering_text(Regime r) {
    switch (r) {
    case Regime::PositiveTop: return "Lambda3 < 0 < Lambda2 < Lambda1";
    case Regime::ZeroTopPositiveBottom: return "Lambda3 < 0 < Lambda2 < Lambda1 < gamma1*d1";
    case Regime::ZeroTopNegativeBottom: return "gamma1*d1 < Lambda3 < Lambda2 < 0 < Lambda1";
    case Regime::NegativeTop: return "Lambda3 < Lambda2 < 0 < Lambda1";
    }
    return "?";
}

/// Asymptotic roots at t, through the symmetry map for the mirrored regimes.
inline std::optional<std::array<double, 3>> asymptotic_roots(const FluidConfig& cfg, double t) {
    const Regime r = classify_regime(cfg);
    const bool mirrored = r == Regime::NegativeTop || r == Regime::ZeroTopPositiveBottom;
    const AsymptoticReference a = asymptotic_reference(mirrored ? cfg.mirrored() : cfg, t);
    if (!a.lambda1 || !a.lambda2 || !a.lambda3) return std::nullopt;
    if (mirrored) return std::array<double, 3>{-*a.lambda3, -*a.lambda2, -*a.lambda1};
    return std::array<double, 3>{*a.lambda1, *a.lambda2, *a.lambda3};
}

inline int cmd_dispersion(const io::RunConfig& rc, const Context& ctx) {
    const FluidConfig cfg = rc.fluid_config();
    const Regime regime = classify_regime(cfg);
    const std::vector<double> ts = threshold_grid(rc.dispersion.t_min, rc.dispersion.t_max,
                                                  static_cast<std::size_t>(rc.dispersion.samples));
    const double nan = std::numeric_limits<double>::quiet_NaN();
    io::CsvWriter csv({"t", "Lambda1", "Lambda2", "Lambda3", "disc", "A", "B", "C", "asym_err_Lambda1",
                       "asym_err_Lambda2", "asym_err_Lambda3"});
    int three_real = 0;
    std::optional<double> ordering_from;
    bool ordering_tail = true;
    // walk down from t_max: ordering_from is the start of the tail on which the ordering holds
    for (auto it = ts.rbegin(); it != ts.rend(); ++it) {
        const double t = *it;
        const CubicCoefficients c = cubic_coefficients(cfg, t);
        try {
            const RootTriple r = solve_cubic(c);
            ++three_real;
            if (ordering_tail && regime_ordering_holds(cfg, r))
                ordering_from = t;
            else
                ordering_tail = false;
        } catch (const Error&) {
            ordering_tail = false;
        }
    }
    for (double t : ts) {
        const CubicCoefficients c = cubic_coefficients(cfg, t);
        const double p = c.B - c.A * c.A / 3.0;
        const double q = 2.0 * c.A * c.A * c.A / 27.0 - c.A * c.B / 3.0 + c.C;
        const double disc = std::pow(p / 3.0, 3) + q * q / 4.0;
        std::array<double, 3> roots{nan, nan, nan}, errs{nan, nan, nan};
        try {
            roots = solve_cubic(c).values();
            if (const auto a = asymptotic_roots(cfg, t))
                for (int k = 0; k < 3; ++k) errs[k] = std::abs(roots[k] - (*a)[k]);
        } catch (const Error&) {
        }
        csv.row({t, roots[0], roots[1], roots[2], disc, c.A, c.B, c.C, errs[0], errs[1], errs[2]});
    }

    const std::array<double, 3> limits = regime_limits(cfg);
    json fluid = io::fluid_json(cfg);
    if (!rc.wavelength) fluid.erase("L");
    json summary = {
        {"fluid", fluid},
        {"regime", regime_tag(regime)},
        {"ordering", ordering_text(regime)},
        {"ordering_holds_at_t_max", ordering_from.has_value()},
        {"ordering_holds_from_t", ordering_from ? json(*ordering_from) : json(nullptr)},
        {"limits", {limits[0], limits[1], limits[2]}},
        {"t_min", rc.dispersion.t_min},
        {"t_max", rc.dispersion.t_max},
        {"samples", rc.dispersion.samples},
        {"three_real_root_samples", three_real},
    };

    const fs::path dir = rc.output_directory;
    if (rc.wants(io::Format::Csv)) emit(ctx, dir / "dispersion.csv", csv.str());
    if (rc.wants(io::Format::Json)) emit(ctx, dir / "dispersion.json", io::dump(summary));
    if (three_real == 0) {
        ctx.err << "error: NotThreeRealRoots: the cubic has one real root at every sampled t\n";
        return kExitDispersion;
    }
    ctx.out << "regime " << regime_tag(regime) << ", three real roots at " << three_real << "/" << ts.size()
            << " samples\n";
    return kExitOk;
}

// ---------------------------------------------------------------------------
// wave

inline BranchCertificate certify_branch(const io::RunConfig& rc, int branch) {
    const FluidConfig cfg = rc.fluid_config();
    if (!rc.wavelength) return certify_auto_wavelength(cfg, branch, rc.wavelength_fraction, rc.k_max);
    return certify(cfg, branch, rc.k_max);
}

struct WaveOutcome {
    BranchCertificate cert;
    WaveSolution wave;
    AmplitudeSearch search;  ///< empty for an explicit amplitude
};

inline WaveOutcome solve_wave(const io::RunConfig& rc, int branch) {
    BranchCertificate cert = certify_branch(rc, branch);
    AmplitudeSearch search;
    WaveSolution wave = rc.amplitude ? build_wave(cert, *rc.amplitude) : build_wave_auto(cert, &search);
    return {std::move(cert), std::move(wave), std::move(search)};
}

inline json wave_json(const WaveOutcome& w, const io::RunConfig& rc) {
    json j = io::certificate_json(w.cert);
    json trials = json::array();
    for (const AmplitudeTrial& t : w.search.trials)
        trials.push_back(
            {{"s", t.s}, {"admissible", t.admissible}, {"predicates", t.predicates}, {"failure", t.failure}});
    j["wavelength_policy"] = rc.wavelength ? "explicit" : "auto";
    j["amplitude"] = {{"policy", rc.amplitude ? "explicit" : "auto"},
                      {"s", w.wave.s},
                      {"f_amp", w.wave.f_amp},
                      {"h_amp", w.wave.h_amp},
                      {"s0", w.search.s0},
                      {"trials", trials}};
    return j;
}

inline std::string profiles_csv(const WaveSolution& w) {
    io::CsvWriter csv({"x", "f", "h"});
    const double L = w.L_effective();
    for (int i = 0; i < 1024; ++i) {
        const double x = L * i / 1024.0;
        csv.row({x, w.f(x), w.h(x)});
    }
    return csv.str();
}

inline void write_wave(const WaveOutcome& w, const io::RunConfig& rc, int branch, const Context& ctx) {
    const fs::path dir = rc.output_directory;
    if (rc.wants(io::Format::Json)) emit(ctx, dir / ("certificate" + suffix(branch) + ".json"), io::dump(wave_json(w, rc)));
    if (rc.wants(io::Format::Csv)) emit(ctx, dir / ("profiles" + suffix(branch) + ".csv"), profiles_csv(w.wave));
}

/// Runs `body` per configured branch; the first failure decides the exit code, later branches still run.
template <class Body>
int for_each_branch(const io::RunConfig& rc, const Context& ctx, Body body) {
    int code = kExitOk;
    for (int b : rc.branches) {
        try {
            const int c = body(b);
            if (code == kExitOk) code = c;
        } catch (const Error& e) {
            ctx.err << "error: branch " << b << ": " << e.what() << '\n';
            if (code == kExitOk) code = exit_code(e.code());
        }
    }
    return code;
}

inline int cmd_wave(const io::RunConfig& rc, const Context& ctx) {
    return for_each_branch(rc, ctx, [&](int b) {
        const WaveOutcome w = solve_wave(rc, b);
        write_wave(w, rc, b, ctx);
        ctx.out << "branch " << b << ": " << to_string(w.cert.theorem) << ", Lambda* = " << fmt::sig17(w.cert.Lambda_star)
                << ", s = " << fmt::sig17(w.wave.s) << ", stagnation " << w.cert.stagnation.tag() << '\n';
        return kExitOk;
    });
}

// ---------------------------------------------------------------------------
// flow

inline std::string stagnation_csv(const FlowTopology& t) {
    io::CsvWriter csv({"x", "y", "kind", "layer", "hessian_det", "grad_norm"});
    for (const StagnationPoint& p : t.stagnation_points)
        csv.row_strings({fmt::sig17(p.x), fmt::sig17(p.y), to_string(p.kind), to_string(p.layer),
                         fmt::sig17(p.hessian_det), fmt::sig17(p.grad_norm)});
    return csv.str();
}

inline std::string critical_layer_csv(const FlowTopology& t) {
    io::CsvWriter csv({"layer", "x", "xi", "dxi", "level", "dlevel"});
    for (const CriticalLayer& cl : t.critical_layers)
        for (std::size_t i = 0; i < cl.x.size(); ++i)
            csv.row_strings({to_string(cl.layer), fmt::sig17(cl.x[i]), fmt::sig17(cl.xi[i]), fmt::sig17(cl.dxi[i]),
                             fmt::sig17(cl.level[i]), fmt::sig17(cl.dlevel[i])});
    return csv.str();
}

inline std::string separatrix_csv(const FlowTopology& t) {
    io::CsvWriter csv({"saddle", "branch", "closed", "closure_distance", "psi_drift", "points"});
    for (const Separatrix& s : t.separatrices)
        csv.row_strings({std::to_string(s.saddle), std::to_string(s.branch), s.closed ? "true" : "false",
                         fmt::sig17(s.closure_distance), fmt::sig17(s.psi_drift), std::to_string(s.path.points.size())});
    return csv.str();
}

inline json topology_json(const FlowField& field, const FlowTopology& t) {
    json layers = json::array();
    for (std::size_t i = 0; i < t.critical_layers.size(); ++i) {
        const CriticalLayer& cl = t.critical_layers[i];
        layers.push_back({{"layer", to_string(cl.layer)},
                          {"xi_direction", cl.xi_direction},
                          {"level_direction", cl.level_direction},
                          {"min_gap", cl.min_gap},
                          {"stagnation_count", t.stagnation_count[i]}});
    }
    json points = json::array();
    for (const StagnationPoint& p : t.stagnation_points)
        points.push_back({{"x", p.x}, {"y", p.y}, {"kind", to_string(p.kind)}, {"layer", to_string(p.layer)}});
    return {{"lemma", t.lemma},
            {"period", field.period()},
            {"critical_layers", layers},
            {"stagnation_points", points},
            {"stated", io::predicate_json(t.predicate_report)},
            {"amended", io::predicate_json(t.amended_report)}};
}

inline int cmd_flow(const io::RunConfig& rc, const Context& ctx) {
    return for_each_branch(rc, ctx, [&](int b) {
        const WaveOutcome w = solve_wave(rc, b);
        write_wave(w, rc, b, ctx);
        const FlowField field(w.wave);
        const FlowTopology topo = analyze_flow(field);
        const fs::path dir = rc.output_directory;
        const std::string sfx = suffix(b);
        if (rc.wants(io::Format::Svg)) emit(ctx, dir / ("flow" + sfx + ".svg"), render_svg(field, topo));
        if (rc.wants(io::Format::Csv)) {
            emit(ctx, dir / ("stagnation_points" + sfx + ".csv"), stagnation_csv(topo));
            emit(ctx, dir / ("critical_layers" + sfx + ".csv"), critical_layer_csv(topo));
            emit(ctx, dir / ("separatrices" + sfx + ".csv"), separatrix_csv(topo));
        }
        if (rc.wants(io::Format::Json))
            emit(ctx, dir / ("predicate_report" + sfx + ".json"), io::dump(topology_json(field, topo)));
        ctx.out << "branch " << b << ": " << topo.lemma << ", " << topo.stagnation_points.size()
                << " stagnation points, amended predicates " << (topo.amended_report.all_pass ? "pass" : "fail")
                << ", stated predicates " << (topo.predicate_report.all_pass ? "pass" : "fail") << '\n';
        if (!topo.amended_report.all_pass) {
            ctx.err << "error: branch " << b << ": predicate " << topo.amended_report.failing_predicate() << " fails\n";
            return kExitTopology;
        }
        return kExitOk;
    });
}

// ---------------------------------------------------------------------------
// sweep

struct SweepPoint {
    std::size_t index = 0;
    FluidParams params;
    bool explicit_L = false;
    int branch = 1;
};

struct SweepRow {
    std::string status = "ok";
    std::string regime;
    std::string theorem;
    double Lambda_star = std::numeric_limits<double>::quiet_NaN();
    double L = std::numeric_limits<double>::quiet_NaN();
    double L0 = std::numeric_limits<double>::quiet_NaN();
    double kernel_a = std::numeric_limits<double>::quiet_NaN();
    double kernel_b = std::numeric_limits<double>::quiet_NaN();
    std::string stagnation;
};

inline std::vector<SweepPoint> sweep_points(const io::RunConfig& rc) {
    const io::SweepGrid& g = *rc.sweep;
    const auto axis = [](const std::vector<double>& v, double base) {
        return v.empty() ? std::vector<double>{base} : v;
    };
    const double base_L = rc.wavelength.value_or(std::numeric_limits<double>::quiet_NaN());
    std::vector<SweepPoint> out;
    for (double g1 : axis(g.gamma1, rc.fluid.gamma1))
        for (double g2 : axis(g.gamma2, rc.fluid.gamma2))
            for (double d1 : axis(g.d1, rc.fluid.d1))
                for (double d2 : axis(g.d2, rc.fluid.d2))
                    for (double L : axis(g.L, base_L))
                        for (int b : rc.branches) {
                            SweepPoint p;
                            p.index = out.size();
                            p.params = {g1, g2, d1, d2, rc.fluid.g, std::isnan(L) ? 1.0 : L};
                            p.explicit_L = !std::isnan(L);
                            p.branch = b;
                            out.push_back(p);
                        }
    return out;
}

inline SweepRow sweep_row(const io::RunConfig& rc, const SweepPoint& p) {
    SweepRow row;
    try {
        const FluidConfig cfg = validate_config(p.params);
        row.regime = regime_tag(classify_regime(cfg));
        const BranchCertificate c = p.explicit_L ? certify(cfg, p.branch, rc.k_max)
                                                 : certify_auto_wavelength(cfg, p.branch, rc.wavelength_fraction, rc.k_max);
        row.theorem = to_string(c.theorem);
        row.Lambda_star = c.Lambda_star;
        row.L = c.cfg.L();
        row.L0 = c.L0;
        row.kernel_a = c.kernel.a;
        row.kernel_b = c.kernel.b;
        row.stagnation = c.stagnation.tag();
    } catch (const Error& e) {
        row.status = to_string(e.code());
    }
    return row;
}

/// Evaluates every point on a worker pool; rows keep the grid order.
inline std::vector<SweepRow> run_sweep(const io::RunConfig& rc, const std::vector<SweepPoint>& pts) {
    std::vector<SweepRow> rows(pts.size());
    std::atomic<std::size_t> next{0};
    const auto worker = [&] {
        for (std::size_t i = next++; i < pts.size(); i = next++) rows[i] = sweep_row(rc, pts[i]);
    };
    const unsigned n = std::max(1u, std::min<unsigned>(std::thread::hardware_concurrency(),
                                                       static_cast<unsigned>(pts.size())));
    std::vector<std::thread> pool;
    for (unsigned i = 1; i < n; ++i) pool.emplace_back(worker);
    worker();
    for (std::thread& t : pool) t.join();
    return rows;
}

inline int cmd_sweep(const io::RunConfig& rc, const Context& ctx) {
    if (!rc.sweep) throw Error(ErrorCode::ConfigError, "sweep needs a sweep section in the config");
    const std::vector<SweepPoint> pts = sweep_points(rc);
    const std::vector<SweepRow> rows = run_sweep(rc, pts);

    io::CsvWriter csv({"index", "gamma1", "gamma2", "d1", "d2", "g", "branch", "status", "regime", "theorem",
                       "Lambda_star", "L", "L0", "kernel_a", "kernel_b", "stagnation"});
    json arr = json::array();
    int ok = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const SweepPoint& p = pts[i];
        const SweepRow& r = rows[i];
        ok += r.status == "ok";
        csv.row_strings({std::to_string(p.index), fmt::sig17(p.params.gamma1), fmt::sig17(p.params.gamma2),
                         fmt::sig17(p.params.d1), fmt::sig17(p.params.d2), fmt::sig17(p.params.g),
                         std::to_string(p.branch), r.status, r.regime, r.theorem, fmt::sig17(r.Lambda_star),
                         fmt::sig17(r.L), fmt::sig17(r.L0), fmt::sig17(r.kernel_a), fmt::sig17(r.kernel_b),
                         r.stagnation});
        arr.push_back({{"index", p.index},
                       {"fluid", {{"gamma1", p.params.gamma1}, {"gamma2", p.params.gamma2}, {"d1", p.params.d1},
                                  {"d2", p.params.d2}, {"g", p.params.g}}},
                       {"branch", p.branch},
                       {"status", r.status},
                       {"regime", r.regime},
                       {"theorem", r.theorem},
                       {"Lambda_star", io::number_json(r.Lambda_star)},
                       {"L", io::number_json(r.L)},
                       {"L0", io::number_json(r.L0)},
                       {"kernel", {io::number_json(r.kernel_a), io::number_json(r.kernel_b)}},
                       {"stagnation", r.stagnation}});
    }
    const fs::path dir = rc.output_directory;
    if (rc.wants(io::Format::Csv)) emit(ctx, dir / "sweep.csv", csv.str());
    if (rc.wants(io::Format::Json)) emit(ctx, dir / "sweep.json", io::dump({{"points", arr}}));
    ctx.out << ok << "/" << pts.size() << " sweep points certified\n";
    return kExitOk;
}

// ---------------------------------------------------------------------------
// verify

struct VerifyOptions {
    acceptance::Options acceptance;
    std::vector<int> expected_fail;
    std::optional<io::RunConfig> config;
    std::string config_name;
    std::string out = "verify_out";
};

/// Certification and predicates of a user configuration, as one extra report line.
inline acceptance::CriterionResult verify_config(const io::RunConfig& rc, const std::string& name) {
    acceptance::CriterionResult res{0, "config " + name, true, {}};
    std::vector<std::string> parts;
    for (int b : rc.branches) {
        try {
            const WaveOutcome w = solve_wave(rc, b);
            const PredicateReport rep = verify_lemma_predicates(FlowField(w.wave), LemmaReading::Amended);
            std::string part = "branch " + std::to_string(b) + " " + to_string(w.cert.theorem) + " s=" + fmt::sci(w.wave.s);
            if (!rep.all_pass) {
                res.passed = false;
                std::vector<std::string> failing;
                for (const PredicateItem& it : rep.items)
                    for (const SignCheck& c : it.checks)
                        if (!c.passed) failing.push_back("(" + it.id + ") " + c.name);
                part += " failing predicates: " + acceptance::detail::join(failing, "; ");
            } else {
                part += " predicates pass";
            }
            parts.push_back(part);
        } catch (const Error& e) {
            res.passed = false;
            parts.push_back("branch " + std::to_string(b) + " " + e.what());
        }
    }
    res.detail = acceptance::detail::join(parts, "; ");
    return res;
}

inline int cmd_verify(const VerifyOptions& vo, const Context& ctx) {
    std::vector<acceptance::CriterionResult> results = acceptance::run_all(vo.acceptance);
    if (vo.config) results.push_back(verify_config(*vo.config, vo.config_name));
    std::string text = acceptance::render(results, vo.expected_fail);
    ctx.out << text;

    json arr = json::array();
    for (const acceptance::CriterionResult& r : results)
        arr.push_back({{"id", r.id}, {"title", r.title}, {"passed", r.passed}, {"detail", r.detail}});
    const bool ok = acceptance::acceptable(results, vo.expected_fail);
    const json doc = {{"seed", vo.acceptance.seed},
                      {"quick", vo.acceptance.quick},
                      {"expected_fail", vo.expected_fail},
                      {"all_pass", ok},
                      {"criteria", arr}};
    const fs::path dir = vo.out;
    emit(ctx, dir / "verify_report.txt", text);
    emit(ctx, dir / "verify_report.json", io::dump(doc));
    return ok ? kExitOk : kExitVerifyFailed;
}

// ---------------------------------------------------------------------------
// entry point

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    CLI::App app{"Stagnation points in two-layer rotational water waves"};
    app.require_subcommand(1);
    const Context ctx{out, err};

    std::string config_path;
    Overrides ov;
    auto add_common = [&](CLI::App* sub, bool config_required) {
        auto* opt = sub->add_option("--config", config_path, "JSON run configuration");
        if (config_required) opt->required();
        sub->add_option("--out", ov.out, "output directory");
        sub->add_option("--format", ov.format, "comma-separated subset of json,csv,svg");
        sub->add_option("--branch", ov.branch, "1, 2, 3 or all");
        sub->add_option("--s", ov.s, "amplitude, or auto");
    };
    CLI::App* dispersion = app.add_subcommand("dispersion", "roots of the dispersion relation against t");
    CLI::App* wave = app.add_subcommand("wave", "bifurcation certificate and first-order profiles");
    CLI::App* flow = app.add_subcommand("flow", "streamline plot, topology tables and lemma predicates");
    CLI::App* sweep = app.add_subcommand("sweep", "certify every point of a parameter grid");
    CLI::App* verify = app.add_subcommand("verify", "run the acceptance criteria");
    for (CLI::App* sub : {dispersion, wave, flow, sweep}) add_common(sub, true);
    add_common(verify, false);

    VerifyOptions vo;
    verify->add_option("--seed", vo.acceptance.seed, "seed for the random draws");
    verify->add_flag("--quick", vo.acceptance.quick, "one tenth of the random draws");
    verify->add_option("--expect-fail", vo.expected_fail, "criteria known to fail")->check(CLI::Range(1, 10));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitValidation;
    }

    try {
        if (verify->parsed()) {
            if (!ov.out.empty()) vo.out = ov.out;
            if (!config_path.empty()) {
                io::RunConfig rc = io::load_run_config(config_path);
                apply(rc, ov);
                vo.config = rc;
                vo.config_name = fs::path(config_path).filename().string();
            }
            return cmd_verify(vo, ctx);
        }
        io::RunConfig rc = io::load_run_config(config_path);
        apply(rc, ov);
        if (dispersion->parsed()) return cmd_dispersion(rc, ctx);
        if (wave->parsed()) return cmd_wave(rc, ctx);
        if (flow->parsed()) return cmd_flow(rc, ctx);
        return cmd_sweep(rc, ctx);
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return exit_code(e.code());
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitValidation;
    }
}

}  // namespace stagwave::cli
