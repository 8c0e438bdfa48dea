/**
 * @file acceptance.hpp
 * @brief The ten acceptance criteria, shared by the acceptance binary and `stagwave verify`.
 *
 * Every criterion is a deterministic function of the seed. Reports carry no
 * timings, so two runs with the same seed render byte-identical text.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "stagwave/bifurcation.hpp"
#include "stagwave/dispersion.hpp"
#include "stagwave/error.hpp"
#include "stagwave/fields.hpp"
#include "stagwave/flowviz.hpp"
#include "stagwave/format.hpp"
#include "stagwave/model.hpp"
#include "stagwave/oracle.hpp"
#include "stagwave/reference_cases.hpp"
#include "stagwave/symbols.hpp"

namespace stagwave::acceptance {

struct Options {
    std::uint64_t seed = 20261016;
    bool quick = false;  ///< one tenth of the random draws
};

struct CriterionResult {
    int id = 0;
    std::string title;
    bool passed = false;
    std::string detail;
};

namespace detail {

class Draws {
public:
    explicit Draws(std::uint64_t seed) : rng_(seed) {}
    double uniform(double lo, double hi) {
        const double u = static_cast<double>(rng_() >> 11) * 0x1.0p-53;
        return lo + (hi - lo) * u;
    }
    double log_uniform(double lo, double hi) { return std::exp(uniform(std::log(lo), std::log(hi))); }
    /// Vorticity with |γ| in [0.1, 10] and the given sign.
    double vorticity(int sign) { return sign * uniform(0.1, 10.0); }
    FluidConfig config(double g1, double g2) {
        return validate_config({g1, g2, uniform(0.3, 2.5), uniform(0.3, 2.5), uniform(0.1, 12.0), 1.0});
    }
    FluidConfig config() {
        double g1 = uniform(-10.0, 10.0), g2 = uniform(-10.0, 10.0);
        while (std::abs(g1 - g2) < 1e-3) g2 = uniform(-10.0, 10.0);
        return config(g1, g2);
    }

private:
    std::mt19937_64 rng_;
};

inline int count(int n, const Options& o) { return o.quick ? std::max(1, n / 10) : n; }

inline double rel_err(double a, double b) {
    return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300});
}

/// Seed of criterion `id`, so that `--quick` or reordering leaves the others untouched.
inline std::uint64_t sub_seed(const Options& o, int id) {
    std::seed_seq seq{static_cast<std::uint32_t>(o.seed), static_cast<std::uint32_t>(o.seed >> 32),
                      static_cast<std::uint32_t>(id)};
    std::uint32_t out[2];
    seq.generate(out, out + 2);
    return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

inline std::string join(const std::vector<std::string>& v, const char* sep = ", ") {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? sep : "") + v[i];
    return s;
}

/// Draw a configuration of the given sign regime.
inline FluidConfig regime_config(Draws& d, Regime r) {
    switch (r) {
    case Regime::PositiveTop: {
        const double g2 = d.vorticity(+1);
        double g1 = d.uniform(-10.0, 10.0);
        while (std::abs(g1 - g2) < 1e-3) g1 = d.uniform(-10.0, 10.0);
        return d.config(g1, g2);
    }
    case Regime::ZeroTopNegativeBottom: return d.config(d.vorticity(-1), 0.0);
    case Regime::ZeroTopPositiveBottom: return d.config(d.vorticity(+1), 0.0);
    case Regime::NegativeTop: {
        const double g2 = d.vorticity(-1);
        double g1 = d.uniform(-10.0, 10.0);
        while (std::abs(g1 - g2) < 1e-3) g1 = d.uniform(-10.0, 10.0);
        return d.config(g1, g2);
    }
    }
    throw Error(ErrorCode::InvalidArgument, "unknown regime");
}

/// First-order profiles with their closed-form right-hand sides, for the finite-difference oracle.
inline double fd_error(const oracle::BVPSpec& spec, int n, const std::function<double(double)>& exact) {
    const oracle::BVPSolution sol = oracle::fd_solve(spec, n);
    double e = 0.0;
    for (std::size_t i = 0; i < sol.y.size(); ++i) e = std::max(e, std::abs(sol.u[i] - exact(sol.y[i])));
    return e;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// 1. Cardano correctness

inline CriterionResult cardano_correctness(const Options& o) {
    CriterionResult res{1, "Cardano correctness", true, {}};
    detail::Draws d(detail::sub_seed(o, 1));
    const int n = detail::count(500, o);
    double worst = 0.0;
    int failures = 0;
    for (Regime r : {Regime::PositiveTop, Regime::ZeroTopNegativeBottom, Regime::ZeroTopPositiveBottom,
                     Regime::NegativeTop}) {
        for (int i = 0; i < n; ++i) {
            const FluidConfig cfg = detail::regime_config(d, r);
            const double t = d.log_uniform(50.0, 1e4);
            try {
                const RootTriple roots = dispersion_roots(cfg, t);
                for (double L : roots.values())
                    worst = std::max(worst, std::abs(roots.coeffs(L)) / roots.coeffs.scale(L));
                if (!(roots.lambda1 >= roots.lambda2 && roots.lambda2 >= roots.lambda3)) ++failures;
            } catch (const Error&) {
                ++failures;
            }
        }
    }

    // disc < 0 on the certified part of every reference threshold grid
    int grid_points = 0, positive_disc = 0;
    for (const ReferenceCase& rc : reference_cases()) {
        const FluidConfig cfg = reference_config(rc);
        const ThresholdCertificate thr = stagwave::detail::default_threshold(cfg, rc.branch_id);
        for (double t : threshold_grid(thr.t0, thr.t_hi, detail::count(400, o))) {
            ++grid_points;
            const CubicCoefficients c = cubic_coefficients(cfg, t);
            const double p = c.B - c.A * c.A / 3.0;
            const double q = 2.0 * c.A * c.A * c.A / 27.0 - c.A * c.B / 3.0 + c.C;
            if (!(std::pow(p / 3.0, 3) + q * q / 4.0 < 0.0)) ++positive_disc;
        }
    }
    res.passed = failures == 0 && worst <= 1e-10 && positive_disc == 0;
    res.detail = std::to_string(4 * n) + " configs, max residual " + fmt::sci(worst) + "·scale, " +
                 std::to_string(failures) + " ordering/solver failures; disc < 0 at " +
                 std::to_string(grid_points - positive_disc) + "/" + std::to_string(grid_points) +
                 " certified grid points";
    return res;
}

// ---------------------------------------------------------------------------
// 2. Determinant equivalence

inline CriterionResult determinant_equivalence(const Options& o) {
    CriterionResult res{2, "Determinant equivalence", true, {}};
    detail::Draws d(detail::sub_seed(o, 2));
    const int n = detail::count(200, o);
    double worst_residual = 0.0, worst_mp = 0.0, worst_bisection = 0.0;
    int skipped = 0, failures = 0;
    for (int i = 0; i < n;) {
        const FluidConfig cfg = d.config();
        const double t = d.uniform(1.0, 10.0);
        RootTriple roots;
        try {
            roots = dispersion_roots(cfg, t);
        } catch (const Error&) {
            ++skipped;  // one real root at this t
            continue;
        }
        ++i;
        const auto mp_roots = oracle::mp::cubic_roots(oracle::mp::cubic_coefficients(cfg, t));
        const std::array<double, 3> r = roots.values();
        for (int k = 0; k < 3; ++k) {
            const oracle::mp::Symbols s = oracle::mp::symbol_matrix(cfg, mp_roots[k], t);
            worst_residual = std::max(worst_residual,
                                      oracle::mp::to_double(abs(s.determinant()) / oracle::mp::determinant_scale(s)));
            worst_mp = std::max(worst_mp, detail::rel_err(r[k], oracle::mp::to_double(mp_roots[k])));

            const double below = k < 2 ? r[k] - r[k + 1] : std::abs(r[k]) + 1.0;
            const double above = k > 0 ? r[k - 1] - r[k] : std::abs(r[k]) + 1.0;
            const double w = 0.25 * std::min(below, above);
            try {
                const double b = oracle::bisect_root([&](double L) { return determinant(cfg, L, t); },
                                                     {r[k] - w, r[k] + w});
                worst_bisection = std::max(worst_bisection, detail::rel_err(b, r[k]));
            } catch (const Error&) {
                ++failures;
            }
        }
    }
    res.passed = failures == 0 && worst_residual <= 1e-8 && worst_mp <= 1e-10 && worst_bisection <= 1e-8;
    res.detail = std::to_string(n) + " configs (t in [1, 10], " + std::to_string(skipped) +
                 " draws with one real root skipped): |D(1,Λ)|/scale " + fmt::sci(worst_residual) +
                 " in 50-digit arithmetic, double vs 50-digit roots " + fmt::sci(worst_mp) +
                 ", bisection vs Cardano " + fmt::sci(worst_bisection) + ", " + std::to_string(failures) +
                 " brackets without a sign change";
    return res;
}

// ---------------------------------------------------------------------------
// 3. Asymptotics

inline CriterionResult asymptotics(const Options& o) {
    CriterionResult res{3, "Asymptotics", true, {}};
    detail::Draws d(detail::sub_seed(o, 3));
    const int n = detail::count(100, o);

    // γ2 > 0: t·|Λ1 − γ2 d2| bounded, Λ2 and Λ3 decaying
    int positive_failures = 0;
    double max_growth = 0.0, min_decay = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
        const FluidConfig cfg = detail::regime_config(d, Regime::PositiveTop);
        std::vector<double> scaled, small;
        for (double t : {1e2, 1e3, 1e4}) {
            const RootTriple r = dispersion_roots(cfg, t);
            scaled.push_back(t * std::abs(r.lambda1 - cfg.gamma2() * cfg.d2()));
            small.push_back(std::max(std::abs(r.lambda2), std::abs(r.lambda3)));
        }
        const double growth = *std::max_element(scaled.begin(), scaled.end()) / scaled.front();
        max_growth = std::max(max_growth, growth);
        for (std::size_t j = 1; j < small.size(); ++j) min_decay = std::min(min_decay, small[j - 1] / small[j]);
        if (growth > 1.5 || !(small[1] < small[0] && small[2] < small[1])) ++positive_failures;
    }

    // γ2 = 0, γ1 < 0: Λ1,3 = ±√(g/t), Λ2 = γ1/(2t); the error falls faster than t^(-3/2) along t = 100·2^j
    int zero_failures = 0;
    double worst_weighted = 0.0;
    for (int i = 0; i < n; ++i) {
        const FluidConfig cfg = detail::regime_config(d, Regime::ZeroTopNegativeBottom);
        double prev = std::numeric_limits<double>::infinity();
        for (int j = 0; j < 8; ++j) {
            const double t = 100.0 * std::pow(2.0, j);
            const RootTriple r = dispersion_roots(cfg, t);
            const AsymptoticReference a = asymptotic_reference(cfg, t);
            const double err = std::max({std::abs(r.lambda1 - *a.lambda1), std::abs(r.lambda2 - *a.lambda2),
                                         std::abs(r.lambda3 - *a.lambda3)});
            const double floor = 64.0 * std::numeric_limits<double>::epsilon() * std::sqrt(cfg.g() / t);
            const double weighted = std::pow(t, 1.5) * err;
            worst_weighted = std::max(worst_weighted, weighted);
            if (err > floor && weighted > prev) ++zero_failures;
            prev = std::max(weighted, std::pow(t, 1.5) * floor);
        }
    }
    res.passed = positive_failures == 0 && zero_failures == 0 && worst_weighted <= 1e-6;
    res.detail = "gamma2>0: " + std::to_string(n) + " configs, max growth of t|Λ1-γ2d2| " + fmt::sci(max_growth) +
                 ", min decay factor of Λ2,Λ3 per decade " + fmt::sci(min_decay) + "; gamma2=0, gamma1<0: " +
                 std::to_string(n) + " configs, max t^1.5·error " + fmt::sci(worst_weighted) +
                 " against Λ2 = γ1/(2t), Λ1,3 = ±√(g/t)";
    return res;
}

// ---------------------------------------------------------------------------
// 4. Symmetry

inline CriterionResult symmetry(const Options& o) {
    CriterionResult res{4, "Symmetry", true, {}};
    detail::Draws d(detail::sub_seed(o, 4));
    const int n = detail::count(200, o);
    double worst = 0.0;
    int skipped = 0, failures = 0;
    for (int i = 0; i < n;) {
        const FluidConfig cfg = d.config();
        const double t = d.log_uniform(0.5, 100.0);
        RootTriple roots;
        try {
            roots = dispersion_roots(cfg, t);
        } catch (const Error&) {
            ++skipped;
            continue;
        }
        ++i;
        try {
            const RootTriple m = symmetry_map(cfg, roots);
            const std::array<double, 3> expect = negate_reverse(roots);
            const double scale = std::max({std::abs(roots.lambda1), std::abs(roots.lambda3)});
            for (int k = 0; k < 3; ++k) worst = std::max(worst, std::abs(m.values()[k] - expect[k]) / scale);
        } catch (const Error&) {
            ++failures;
        }
    }
    res.passed = failures == 0 && worst <= 1e-10;
    res.detail = std::to_string(n) + " configs (" + std::to_string(skipped) +
                 " draws with one real root skipped), max deviation " + fmt::sci(worst) + " relative to max|Λ|";
    return res;
}

// ---------------------------------------------------------------------------
// 5. Profile coefficients

inline CriterionResult profile_coefficients(const Options& o) {
    CriterionResult res{5, "Profile coefficients", true, {}};
    detail::Draws d(detail::sub_seed(o, 5));
    const int n = detail::count(50, o);
    double worst_bc = 0.0, worst_ode = 0.0, min_order = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
        const FluidConfig cfg = d.config();
        const double Lambda = d.uniform(-6.0, 6.0);
        const double R = d.uniform(0.1, 6.0);
        const LinearizedCoefficients k(cfg, Lambda, R);
        const double d2 = cfg.d2(), dd = cfg.d();
        const double scale = 1.0 + std::abs(Lambda) + std::abs(cfg.gamma1()) * cfg.d1() + std::abs(cfg.gamma2()) * d2;

        for (double v : {k.A(0.0), k.A(-d2), k.B(0.0), k.B(-d2), k.C(-d2), k.C(-dd)})
            worst_bc = std::max(worst_bc, std::abs(v) / scale);

        for (int j = 0; j < 100; ++j) {
            const double c = 0.5 * (1.0 - std::cos(M_PI * (j + 0.5) / 100.0));
            const double yt = -d2 + c * d2;
            const double yb = -dd + c * (dd - d2);
            const Jet2 a = k.A(Jet2::variable_y(yt));
            const Jet2 b = k.B(Jet2::variable_y(yt));
            const Jet2 cc = k.C(Jet2::variable_y(yb));
            const double s = scale * (1.0 + R * R);
            worst_ode = std::max({worst_ode, std::abs(a.dyy - R * R * a.v - k.rhs_A(yt)) / s,
                                  std::abs(b.dyy - R * R * b.v - k.rhs_B(yt)) / s,
                                  std::abs(cc.dyy - R * R * cc.v - k.rhs_C(yb)) / s});
        }

        const double R2 = R * R;
        const std::vector<std::pair<oracle::BVPSpec, std::function<double(double)>>> problems = {
            {{-d2, 0.0, R2, [&](double y) { return k.rhs_A(y); }}, [&](double y) { return k.A(y); }},
            {{-d2, 0.0, R2, [&](double y) { return k.rhs_B(y); }}, [&](double y) { return k.B(y); }},
            {{-dd, -d2, R2, [&](double y) { return k.rhs_C(y); }}, [&](double y) { return k.C(y); }},
        };
        for (const auto& [spec, exact] : problems) {
            const double e1 = detail::fd_error(spec, 64, exact);
            const double e2 = detail::fd_error(spec, 128, exact);
            const double e3 = detail::fd_error(spec, 256, exact);
            min_order = std::min({min_order, std::log2(e1 / e2), std::log2(e2 / e3)});
        }
    }
    res.passed = worst_bc <= 1e-12 && worst_ode <= 1e-9 && min_order >= 1.9;
    res.detail = std::to_string(n) + " draws: boundary values " + fmt::sci(worst_bc) + "·scale, ODE residual " +
                 fmt::sci(worst_ode) + "·scale at 100 points, finite-difference order >= " + fmt::fixed(min_order, 3);
    return res;
}

// ---------------------------------------------------------------------------
// 6. Symbol consistency

inline CriterionResult symbol_consistency(const Options& o) {
    CriterionResult res{6, "Symbol consistency", true, {}};
    detail::Draws d(detail::sub_seed(o, 6));
    const int n = detail::count(200, o);
    double worst = 0.0, worst_limit = 0.0;
    for (int i = 0; i < n; ++i) {
        const FluidConfig cfg = d.config();
        const double Lambda = d.uniform(-6.0, 6.0);
        const double R = d.uniform(0.1, 6.0);
        const SymbolMatrix m = symbol_matrix(cfg, Lambda, R);
        const SymbolMatrix p = symbols_from_profiles(cfg, Lambda, R);
        // each entry against the largest entry of its row
        const double top = std::max(std::abs(m.m11), std::abs(m.m12));
        const double bottom = std::max(std::abs(m.m21), std::abs(m.m22));
        worst = std::max({worst, std::abs(m.m11 - p.m11) / top, std::abs(m.m12 - p.m12) / top,
                          std::abs(m.m21 - p.m21) / bottom, std::abs(m.m22 - p.m22) / bottom});

        const SymbolMatrix z = symbol_matrix(cfg, Lambda, 0.0);
        const SymbolMatrix e = symbol_matrix(cfg, Lambda, 1e-4);
        const double s = std::max({std::abs(z.m11), std::abs(z.m12), std::abs(z.m21), std::abs(z.m22)});
        worst_limit = std::max({worst_limit, std::abs(z.m11 - e.m11) / s, std::abs(z.m12 - e.m12) / s,
                                std::abs(z.m21 - e.m21) / s, std::abs(z.m22 - e.m22) / s});
    }
    res.passed = worst <= 1e-10 && worst_limit <= 1e-6;
    res.detail = std::to_string(n) + " draws: profile identities " + fmt::sci(worst) + " relative to the row, R=0 limit vs R=1e-4 " +
                 fmt::sci(worst_limit);
    return res;
}

// ---------------------------------------------------------------------------
// 7. Field correctness

inline CriterionResult field_correctness(const Options&) {
    CriterionResult res{7, "Field correctness", true, {}};
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0, worst_bed = 0.0;
    std::vector<std::string> failed;
    for (const ReferenceCase& rc : reference_cases()) {
        const BranchCertificate cert = certify_reference(rc);
        const double s0 = 2e-3 / std::max(std::abs(cert.kernel.a), std::abs(cert.kernel.b));
        FieldResiduals prev;
        bool ok = true;
        for (int level = 0; level < 3; ++level) {
            const FlowField field(build_wave(cert, s0 / std::pow(2.0, level)));
            const FieldResiduals r = field_residuals(field, 64);
            const double bed = r.bed_value / field.wave().laminar.Q;
            worst_bed = std::max(worst_bed, bed);
            ok = ok && bed <= 1e-12;
            if (level > 0) {
                for (double ratio : {prev.bernoulli / r.bernoulli, prev.surface_psi_eulerian / r.surface_psi_eulerian,
                                     prev.interface_jump / r.interface_jump}) {
                    lo = std::min(lo, ratio);
                    hi = std::max(hi, ratio);
                    ok = ok && ratio >= 3.5 && ratio <= 4.5;
                }
            }
            prev = r;
        }
        if (!ok) failed.push_back(rc.name);
    }
    res.passed = failed.empty();
    res.detail = "8 cases (MT1-MT5): s-halving ratios in [" + fmt::fixed(lo, 3) + ", " + fmt::fixed(hi, 3) +
                 "], bed value " + fmt::sci(worst_bed) + "·Q" + (failed.empty() ? "" : "; failing: " + detail::join(failed));
    return res;
}

// ---------------------------------------------------------------------------
// 8. Topology

inline CriterionResult topology(const Options&) {
    CriterionResult res{8, "Topology", true, {}};
    std::vector<std::string> count_fail, stated_fail, center_fail, amended_fail;
    for (const ReferenceCase& rc : reference_cases()) {
        const BranchCertificate cert = certify_reference(rc);
        const FlowField field(build_wave_auto(cert));
        const FlowTopology topo = analyze_flow(field);
        for (int c : topo.stagnation_count)
            if (c != 3) {
                count_fail.push_back(rc.name);
                break;
            }
        if (!topo.predicate_report.all_pass)
            stated_fail.push_back(rc.name + " " + topo.predicate_report.failing_predicate());
        if (!topo.amended_report.all_pass) amended_fail.push_back(rc.name);

        // a center at x = L_eff/2 in every critical layer
        const double L = field.period();
        for (const CriticalLayer& cl : topo.critical_layers) {
            const bool centered = std::any_of(topo.stagnation_points.begin(), topo.stagnation_points.end(),
                                              [&](const StagnationPoint& p) {
                                                  return p.layer == cl.layer && p.kind == StagnationKind::Center &&
                                                         std::abs(p.x - 0.5 * L) < 1e-6 * L;
                                              });
            if (!centered) center_fail.push_back(rc.name + "/" + to_string(cl.layer));
        }
    }
    res.passed = count_fail.empty() && stated_fail.empty() && center_fail.empty() && amended_fail.empty();
    std::ostringstream os;
    os << "8 cases at AUTO amplitude: stagnation count 3 " << (count_fail.empty() ? "everywhere" : "fails for " + detail::join(count_fail))
       << "; amended predicates " << (amended_fail.empty() ? "pass" : "fail for " + detail::join(amended_fail))
       << "; stated predicates fail for " << (stated_fail.empty() ? "none" : detail::join(stated_fail, "; "))
       << "; no center at L/2 in " << (center_fail.empty() ? "none" : detail::join(center_fail));
    res.detail = os.str();
    return res;
}

// ---------------------------------------------------------------------------
// 9. Amplitude-ratio divergence

struct RatioConfig {
    const char* label;
    double gamma1;
    double gamma2;
    int branch_id;
};

inline std::vector<RatioConfig> ratio_configs() {
    return {{"MT1 (6,4)", 6.0, 4.0, 1}, {"MT2 (2,4)", 2.0, 4.0, 2}, {"MT3 (-10,4)", -10.0, 4.0, 3},
            {"MT4 (-3,0)", -3.0, 0.0, 3}};
}

inline CriterionResult amplitude_ratio_divergence(const Options&) {
    CriterionResult res{9, "Amplitude-ratio divergence", true, {}};
    std::vector<std::string> parts;
    for (const RatioConfig& rc : ratio_configs()) {
        const FluidConfig cfg = validate_config({rc.gamma1, rc.gamma2, 1.0, 1.0, 9.81, 1.0});
        const ThresholdCertificate thr = stagwave::detail::default_threshold(cfg, rc.branch_id);
        const AmplitudeRatioTable t =
            amplitude_ratio_diagnostic(cfg, rc.branch_id, {thr.L0, thr.L0 / 2.0, thr.L0 / 4.0}, thr);
        res.passed = res.passed && t.monotone_divergence;
        std::string s = std::string(rc.label) + ":";
        for (const AmplitudeRatioRow& r : t.rows) s += " " + fmt::sci(r.ratio);
        parts.push_back(s);
    }
    res.detail = "d1=d2=1, g=9.81, L in {L0, L0/2, L0/4}: " + detail::join(parts, "; ");
    return res;
}

// ---------------------------------------------------------------------------
// Report

inline std::vector<CriterionResult> run_criteria(const Options& o) {
    return {cardano_correctness(o),   determinant_equivalence(o), asymptotics(o),
            symmetry(o),              profile_coefficients(o),   symbol_consistency(o),
            field_correctness(o),     topology(o),                amplitude_ratio_divergence(o)};
}

inline std::string render(const std::vector<CriterionResult>& results, const std::vector<int>& expected_fail = {}) {
    std::ostringstream os;
    for (const CriterionResult& r : results) {
        const bool expected = std::find(expected_fail.begin(), expected_fail.end(), r.id) != expected_fail.end();
        if (r.id > 0) os << "criterion " << r.id << ' ';
        os << '[' << r.title << "]: ";
        if (r.passed)
            os << "PASS";
        else
            os << (expected ? "FAIL (expected: documented conflict)" : "FAIL");
        os << " -- " << r.detail << '\n';
    }
    return os.str();
}

/// Criteria 1-9, then criterion 10: a second run must render the same report byte for byte.
inline std::vector<CriterionResult> run_all(const Options& o) {
    std::vector<CriterionResult> first = run_criteria(o);
    const std::vector<CriterionResult> second = run_criteria(o);
    const bool same = render(first) == render(second);
    first.push_back({10, "Determinism", same,
                     same ? "two runs with seed " + std::to_string(o.seed) + " rendered identical reports"
                          : "reports differ between two runs with seed " + std::to_string(o.seed)});
    return first;
}

/// True when every criterion passes except, optionally, the listed ones.
inline bool acceptable(const std::vector<CriterionResult>& results, const std::vector<int>& expected_fail = {}) {
    return std::all_of(results.begin(), results.end(), [&](const CriterionResult& r) {
        return r.passed || std::find(expected_fail.begin(), expected_fail.end(), r.id) != expected_fail.end();
    });
}

}  // namespace stagwave::acceptance
