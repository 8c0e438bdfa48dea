/**
 * @file dispersion.hpp
 * @brief The cubic dispersion relation Λ³ + A(t)Λ² + B(t)Λ + C(t) = 0.
 *
 * For a fixed wavenumber t the determinant of the symbol matrix is a positive
 * multiple of this cubic in the surface speed Λ. Its three roots
 * Λ₁ ≥ Λ₂ ≥ Λ₃ are obtained with the trigonometric form of Cardano's formula,
 * which also fixes the branch labels used everywhere else. The branch
 * derivatives dΛᵢ/dt follow by implicit differentiation with analytic
 * t-derivatives of A, B and C.
 *
 * Only large t (short waves) is covered: outside that regime the cubic may
 * have a single real root, reported as NotThreeRealRoots.
 */
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "stagwave/error.hpp"
#include "stagwave/hyperbolic.hpp"
#include "stagwave/model.hpp"
#include "stagwave/symbols.hpp"

namespace stagwave {

struct CubicCoefficients {
    double t = 0.0;
    double A = 0.0;
    double B = 0.0;
    double C = 0.0;

    double operator()(double L) const { return ((L + A) * L + B) * L + C; }
    double dlambda(double L) const { return (3.0 * L + 2.0 * A) * L + B; }
    /// Size of the individual terms at L; the reference for residual tolerances.
    double scale(double L) const {
        const double a = std::abs(L);
        return a * a * a + std::abs(A) * a * a + std::abs(B) * a + std::abs(C);
    }
};

/// dA/dt, dB/dt, dC/dt.
struct CubicDerivatives {
    double dA = 0.0;
    double dB = 0.0;
    double dC = 0.0;
};

inline CubicCoefficients cubic_coefficients(const FluidConfig& cfg, double t) {
    if (!(t > 0.0) || !std::isfinite(t))
        throw Error(ErrorCode::NonPositiveWavenumber, "t must be positive, got " + std::to_string(t));
    const double g1 = cfg.gamma1();
    const double g2 = cfg.gamma2();
    const double d1 = cfg.d1();
    const double d2 = cfg.d2();
    const double a = t * d1;
    const double b = t * d2;

    const double s_top = hyp::sinh_cosh_over_cosh(b, a);     // sinh(td2)cosh(td1)/cosh(td)
    const double s_bottom = hyp::sinh_cosh_over_cosh(a, b);  // sinh(td1)cosh(td2)/cosh(td)
    const double p = hyp::sinh_sinh_over_sinh(a, b);         // sinh(td1)sinh(td2)/sinh(td)
    const double th = std::tanh(t * cfg.d());

    CubicCoefficients c;
    c.t = t;
    c.A = -g2 * d2 - (g2 * s_top + g1 * s_bottom) / t;
    c.B = th * ((g2 * g2 * d2 - cfg.g()) / t + g2 * (g1 - g2) * p / (t * t));
    c.C = cfg.g() * th * ((g1 - g2) * p / (t * t) + g2 * d2 / t);
    return c;
}

inline CubicDerivatives cubic_coefficient_derivatives(const FluidConfig& cfg, double t) {
    if (!(t > 0.0) || !std::isfinite(t))
        throw Error(ErrorCode::NonPositiveWavenumber, "t must be positive, got " + std::to_string(t));
    const double g1 = cfg.gamma1();
    const double g2 = cfg.gamma2();
    const double d1 = cfg.d1();
    const double d2 = cfg.d2();
    const double g = cfg.g();
    const double a = t * d1;
    const double b = t * d2;
    const double t2 = t * t;
    const double t3 = t2 * t;

    const double s_top = hyp::sinh_cosh_over_cosh(b, a);
    const double s_bottom = hyp::sinh_cosh_over_cosh(a, b);
    // d/dt [sinh(u)cosh(v)/cosh(u+v)] = (u' cosh²v - v' sinh²u) / cosh²(u+v)
    const double ds_top = d2 * std::pow(hyp::cosh_over_cosh(b, a), 2) - d1 * std::pow(hyp::sinh_over_cosh(b, a), 2);
    const double ds_bottom = d1 * std::pow(hyp::cosh_over_cosh(a, b), 2) - d2 * std::pow(hyp::sinh_over_cosh(a, b), 2);

    const double p = hyp::sinh_sinh_over_sinh(a, b);
    // d/dt [sinh(u)sinh(v)/sinh(u+v)] = (u' sinh²v + v' sinh²u) / sinh²(u+v)
    const double dp = d1 * std::pow(hyp::sinh_over_sinh(a, b), 2) + d2 * std::pow(hyp::sinh_over_sinh(b, a), 2);

    const double th = std::tanh(t * cfg.d());
    const double dth = cfg.d() * hyp::sech2(t * cfg.d());

    const double bb = (g2 * g2 * d2 - g) / t + g2 * (g1 - g2) * p / t2;
    const double dbb = -(g2 * g2 * d2 - g) / t2 + g2 * (g1 - g2) * (dp / t2 - 2.0 * p / t3);
    const double cc = (g1 - g2) * p / t2 + g2 * d2 / t;
    const double dcc = (g1 - g2) * (dp / t2 - 2.0 * p / t3) - g2 * d2 / t2;

    CubicDerivatives out;
    out.dA = (g2 * s_top + g1 * s_bottom) / t2 - (g2 * ds_top + g1 * ds_bottom) / t;
    out.dB = dth * bb + th * dbb;
    out.dC = g * (dth * cc + th * dcc);
    return out;
}

struct DepressedCubic {
    double p = 0.0;
    double q = 0.0;
    double disc = 0.0;  ///< (p/3)³ + (q/2)²
    double r = 0.0;     ///< sqrt(-4p/3)
    double beta = 0.0;  ///< in [0, π/3]
};

struct RootTriple {
    double lambda1 = 0.0;
    double lambda2 = 0.0;
    double lambda3 = 0.0;
    CubicCoefficients coeffs;
    DepressedCubic depressed;

    /// Root by branch id 1, 2 or 3.
    double root(int branch_id) const {
        switch (branch_id) {
        case 1: return lambda1;
        case 2: return lambda2;
        case 3: return lambda3;
        default: throw Error(ErrorCode::InvalidArgument, "branch id must be 1, 2 or 3");
        }
    }
    std::array<double, 3> values() const { return {lambda1, lambda2, lambda3}; }
};

/// Window within which the arccos argument may be clamped back onto [-1, 1].
inline constexpr double kArccosClampWindow = 1e-12;

inline RootTriple solve_cubic(const CubicCoefficients& c) {
    const double A = c.A;
    const double B = c.B;
    DepressedCubic dc;
    dc.p = B - A * A / 3.0;
    dc.q = 2.0 * A * A * A / 27.0 - A * B / 3.0 + c.C;
    dc.disc = std::pow(dc.p / 3.0, 3) + (dc.q / 2.0) * (dc.q / 2.0);
    if (!(dc.disc < 0.0) || !(dc.p < 0.0))
        throw Error(ErrorCode::NotThreeRealRoots,
                    "discriminant " + std::to_string(dc.disc) + " is not negative at t = " + std::to_string(c.t));

    dc.r = std::sqrt(-4.0 * dc.p / 3.0);
    double arg = -(dc.q / 2.0) * std::sqrt(-27.0 / (dc.p * dc.p * dc.p));
    if (std::abs(arg) > 1.0) {
        if (std::abs(arg) - 1.0 > kArccosClampWindow)
            throw Error(ErrorCode::NotThreeRealRoots, "arccos argument outside [-1, 1]");
        arg = std::clamp(arg, -1.0, 1.0);
    }
    dc.beta = std::acos(arg) / 3.0;

    RootTriple roots;
    roots.coeffs = c;
    roots.depressed = dc;
    roots.lambda1 = dc.r * std::cos(dc.beta) - A / 3.0;
    roots.lambda2 = -dc.r * std::cos(dc.beta + M_PI / 3.0) - A / 3.0;
    roots.lambda3 = -dc.r * std::cos(dc.beta - M_PI / 3.0) - A / 3.0;
    return roots;
}

inline RootTriple dispersion_roots(const FluidConfig& cfg, double t) { return solve_cubic(cubic_coefficients(cfg, t)); }

struct BranchValue {
    double Lambda = 0.0;
    double dLambda_dt = 0.0;
    double phi_lambda = 0.0;  ///< ∂φ/∂Λ at the root
    double phi_t = 0.0;       ///< ∂φ/∂t at the root
};

/// Root Λᵢ(t) of the selected branch and its t-derivative.
inline BranchValue branch(const FluidConfig& cfg, int branch_id, double t) {
    const RootTriple roots = dispersion_roots(cfg, t);
    const double L = roots.root(branch_id);
    const CubicCoefficients& c = roots.coeffs;
    const CubicDerivatives dc = cubic_coefficient_derivatives(cfg, t);

    BranchValue out;
    out.Lambda = L;
    out.phi_lambda = c.dlambda(L);
    const double scale = 3.0 * L * L + 2.0 * std::abs(c.A * L) + std::abs(c.B);
    if (std::abs(out.phi_lambda) < 1e-12 * scale)
        throw Error(ErrorCode::DegenerateRoot, "double root at t = " + std::to_string(t));
    out.phi_t = (dc.dA * L + dc.dB) * L + dc.dC;
    out.dLambda_dt = -out.phi_t / out.phi_lambda;
    return out;
}

// ---------------------------------------------------------------------------
// Regimes (sign patterns of the vorticities)

enum class Regime {
    PositiveTop,             ///< gamma2 > 0
    ZeroTopNegativeBottom,   ///< gamma2 = 0, gamma1 < 0
    ZeroTopPositiveBottom,   ///< gamma2 = 0, gamma1 > 0
    NegativeTop,             ///< gamma2 < 0
};

inline Regime classify_regime(const FluidConfig& cfg) {
    if (cfg.gamma2() > 0.0) return Regime::PositiveTop;
    if (cfg.gamma2() < 0.0) return Regime::NegativeTop;
    return cfg.gamma1() < 0.0 ? Regime::ZeroTopNegativeBottom : Regime::ZeroTopPositiveBottom;
}

inline const char* regime_tag(Regime r) {
    switch (r) {
    case Regime::PositiveTop: return "gamma2>0";
    case Regime::ZeroTopNegativeBottom: return "gamma2=0, gamma1<0";
    case Regime::ZeroTopPositiveBottom: return "gamma2=0, gamma1>0";
    case Regime::NegativeTop: return "gamma2<0";
    }
    return "?";
}

/// Whether the root ordering characteristic of the regime holds for large t.
inline bool regime_ordering_holds(const FluidConfig& cfg, const RootTriple& r) {
    const double l1 = r.lambda1, l2 = r.lambda2, l3 = r.lambda3;
    switch (classify_regime(cfg)) {
    case Regime::PositiveTop: return l3 < 0.0 && 0.0 < l2 && l2 < l1;
    case Regime::ZeroTopPositiveBottom: return l3 < 0.0 && 0.0 < l2 && l2 < l1 && l1 < cfg.gamma1() * cfg.d1();
    case Regime::ZeroTopNegativeBottom: return cfg.gamma1() * cfg.d1() < l3 && l3 < l2 && l2 < 0.0 && 0.0 < l1;
    case Regime::NegativeTop: return l3 < l2 && l2 < 0.0 && 0.0 < l1;
    }
    return false;
}

/// Large-t limit of each root for the regime.
inline std::array<double, 3> regime_limits(const FluidConfig& cfg) {
    switch (classify_regime(cfg)) {
    case Regime::PositiveTop: return {cfg.gamma2() * cfg.d2(), 0.0, 0.0};
    case Regime::NegativeTop: return {0.0, 0.0, cfg.gamma2() * cfg.d2()};
    default: return {0.0, 0.0, 0.0};
    }
}

// ---------------------------------------------------------------------------
// Asymptotics

/// Leading-plus-first-order expansions of the coefficients and roots as t -> ∞.
struct AsymptoticReference {
    Regime regime = Regime::PositiveTop;
    double t = 0.0;
    std::optional<double> A;
    std::optional<double> B;
    std::optional<double> C;
    std::optional<double> r;
    std::optional<double> lambda1;
    std::optional<double> lambda2;
    std::optional<double> lambda3;
};

inline AsymptoticReference asymptotic_reference(const FluidConfig& cfg, double t) {
    if (!(t > 0.0)) throw Error(ErrorCode::NonPositiveWavenumber, "t must be positive");
    const double g1 = cfg.gamma1();
    const double g2 = cfg.gamma2();
    const double d2 = cfg.d2();
    const double g = cfg.g();

    AsymptoticReference ref;
    ref.regime = classify_regime(cfg);
    ref.t = t;
    switch (ref.regime) {
    case Regime::PositiveTop: {
        const double g2d2 = g2 * d2;
        ref.A = -g2d2 - (g1 + g2) / (2.0 * t);
        ref.B = (g2 * g2 * d2 - g) / t;
        ref.C = g * g2d2 / t;
        ref.r = 2.0 * g2d2 / 3.0 - (g2d2 * (2.0 * g2 - g1) - 3.0 * g) / (3.0 * g2d2 * t);
        ref.lambda1 = g2d2;
        ref.lambda2 = 0.0;
        ref.lambda3 = 0.0;
        break;
    }
    case Regime::ZeroTopNegativeBottom:
        ref.A = -g1 / (2.0 * t);
        ref.B = -g / t;
        ref.C = g * g1 / (2.0 * t * t);
        ref.r = 2.0 * std::sqrt(g / 3.0) / std::sqrt(t);
        // Up to exponentially small terms the cubic factors as (Λ - γ₁/(2t))(Λ² - g/t).
        ref.lambda1 = std::sqrt(g / t);
        ref.lambda2 = g1 / (2.0 * t);
        ref.lambda3 = -std::sqrt(g / t);
        break;
    default:
        throw Error(ErrorCode::UnsupportedCase,
                    std::string("regime ") + regime_tag(ref.regime) + " is reached through symmetry_map");
    }
    return ref;
}

// ---------------------------------------------------------------------------
// Symmetry (gamma1, gamma2, Λ) -> (-gamma1, -gamma2, -Λ)

/// Roots for the mirrored configuration, recomputed at the same wavenumber.
inline RootTriple symmetry_map(const FluidConfig& cfg, const RootTriple& roots) {
    return dispersion_roots(cfg.mirrored(), roots.coeffs.t);
}

/// (Λ₁, Λ₂, Λ₃) -> (-Λ₃, -Λ₂, -Λ₁): the triple the mirrored configuration must produce.
inline std::array<double, 3> negate_reverse(const RootTriple& roots) {
    return {-roots.lambda3, -roots.lambda2, -roots.lambda1};
}

// ---------------------------------------------------------------------------
// Threshold certification

struct ThresholdCertificate {
    int branch_id = 0;
    Regime regime = Regime::PositiveTop;
    double t0 = 0.0;
    double L0 = 0.0;  ///< 2π / t0
    double t_lo = 0.0;
    double t_hi = 0.0;
    std::size_t samples = 0;
    std::size_t admissible_samples = 0;  ///< sampled t >= t0
    std::vector<std::string> conditions;
    static constexpr const char* kScope = "certified on sampled grid only";
};

/// Geometric grid of `samples` points on [t_lo, t_hi].
inline std::vector<double> threshold_grid(double t_lo, double t_hi, std::size_t samples) {
    std::vector<double> ts(samples);
    for (std::size_t i = 0; i < samples; ++i)
        ts[i] = t_lo * std::pow(t_hi / t_lo, static_cast<double>(i) / static_cast<double>(samples - 1));
    ts.back() = t_hi;
    return ts;
}

namespace detail {

inline bool zero_mode_nonsingular(const FluidConfig& cfg, double Lambda) {
    const SymbolMatrix s = symbol_matrix(cfg, Lambda, 0.0);
    return std::abs(s.determinant()) > 1e-6 * s.scale();
}

}  // namespace detail

/// Scans the grid for the smallest sampled t0 above which every branch condition holds.
inline ThresholdCertificate certify_threshold(const FluidConfig& cfg, int branch_id, double t_lo, double t_hi,
                                              std::size_t samples) {
    if (!(t_lo > 0.0) || !(t_hi > t_lo)) throw Error(ErrorCode::InvalidArgument, "need 0 < t_lo < t_hi");
    if (samples < 2) throw Error(ErrorCode::InvalidArgument, "need at least two samples");
    if (branch_id < 1 || branch_id > 3) throw Error(ErrorCode::InvalidArgument, "branch id must be 1, 2 or 3");

    const Regime regime = classify_regime(cfg);
    const double g1 = cfg.gamma1();
    const double g2 = cfg.gamma2();
    const double g2d2 = g2 * cfg.d2();
    const double g1d1 = g1 * cfg.d1();

    ThresholdCertificate cert;
    cert.branch_id = branch_id;
    cert.regime = regime;
    cert.t_lo = t_lo;
    cert.t_hi = t_hi;
    cert.samples = samples;

    if (regime == Regime::PositiveTop) {
        if (branch_id == 3 && !(g1d1 + g2d2 < 0.0))
            throw Error(ErrorCode::UnsupportedRegime, "branch 3 needs gamma1*d1 + gamma2*d2 < 0");
    } else if (regime == Regime::ZeroTopNegativeBottom) {
        if (branch_id == 1) throw Error(ErrorCode::UnsupportedRegime, "branch 1 has no stagnation when gamma2 = 0");
    } else {
        throw Error(ErrorCode::UnsupportedRegime,
                    std::string("regime ") + regime_tag(regime) + " is handled through the symmetry map");
    }

    switch (regime == Regime::PositiveTop ? branch_id : 10 + branch_id) {
    case 1:
        cert.conditions = {"three real roots", g1 < g2 ? "dLambda1/dt > 0" : "dLambda1/dt < 0",
                           g1 < g2 ? "top-layer stagnation" : "bottom-layer stagnation",
                           "inf Lambda1^2 > sup(Lambda2^2 + Lambda3^2)", "D(0, Lambda1) != 0"};
        break;
    case 2:
        cert.conditions = {"three real roots", "dLambda2/dt < 0", "top-layer stagnation", "sup Lambda2 < inf Lambda1",
                           "D(0, Lambda2) != 0"};
        break;
    case 3:
        cert.conditions = {"three real roots", "dLambda3/dt > 0", "bottom-layer stagnation", "D(0, Lambda3) != 0"};
        break;
    default:
        cert.conditions = {"three real roots", "gamma1*d1 < Lambda3 < Lambda2 < 0 < Lambda1",
                           "dLambda2/dt > 0 and dLambda3/dt > 0", "D(0, Lambda2) != 0 and D(0, Lambda3) != 0"};
        break;
    }

    const std::vector<double> ts = threshold_grid(t_lo, t_hi, samples);
    struct Sample {
        bool pointwise = false;
        double l1 = 0.0, l2 = 0.0, l3 = 0.0;
    };

    auto evaluate = [&](double t) {
        Sample s;
        RootTriple roots;
        try {
            roots = dispersion_roots(cfg, t);
        } catch (const Error&) {
            return s;
        }
        s.l1 = roots.lambda1;
        s.l2 = roots.lambda2;
        s.l3 = roots.lambda3;
        auto slope = [&](int id) {
            try {
                return branch(cfg, id, t).dLambda_dt;
            } catch (const Error&) {
                return std::numeric_limits<double>::quiet_NaN();
            }
        };
        const LaminarFlow flow = laminar_flow(cfg, roots.root(branch_id));
        const StagnationReport stag = stagnation_report(flow, cfg);

        bool ok = false;
        if (regime == Regime::PositiveTop) {
            const double L = roots.root(branch_id);
            const double dl = slope(branch_id);
            switch (branch_id) {
            case 1:
                ok = (g1 < g2 ? dl > 0.0 : dl < 0.0) &&
                     (g1 < g2 ? stag.top_layer : stag.bottom_layer) == LayerStagnation::Strict;
                break;
            case 2: ok = dl < 0.0 && stag.top_layer == LayerStagnation::Strict; break;
            default: ok = dl > 0.0 && stag.bottom_layer == LayerStagnation::Strict; break;
            }
            ok = ok && detail::zero_mode_nonsingular(cfg, L);
        } else {
            ok = g1d1 < s.l3 && s.l3 < s.l2 && s.l2 < 0.0 && 0.0 < s.l1 && slope(2) > 0.0 && slope(3) > 0.0 &&
                 detail::zero_mode_nonsingular(cfg, s.l2) && detail::zero_mode_nonsingular(cfg, s.l3);
        }
        s.pointwise = ok;
        return s;
    };

    std::vector<Sample> values(samples);
    for (std::size_t i = 0; i < samples; ++i) values[i] = evaluate(ts[i]);

    // Walk down from t_hi while every condition, including the sup/inf ones, still holds.
    double inf_l1 = std::numeric_limits<double>::infinity();
    double inf_l1_sq = std::numeric_limits<double>::infinity();
    double sup_l2 = -std::numeric_limits<double>::infinity();
    double sup_l23_sq = 0.0;
    std::size_t first = samples;
    for (std::size_t j = samples; j-- > 0;) {
        const Sample& s = values[j];
        if (!s.pointwise) break;
        const double n_inf_l1 = std::min(inf_l1, s.l1);
        const double n_inf_l1_sq = std::min(inf_l1_sq, s.l1 * s.l1);
        const double n_sup_l2 = std::max(sup_l2, s.l2);
        const double n_sup_l23_sq = std::max(sup_l23_sq, s.l2 * s.l2 + s.l3 * s.l3);
        if (regime == Regime::PositiveTop) {
            if (branch_id == 1 && !(n_inf_l1_sq > n_sup_l23_sq)) break;
            if (branch_id == 2 && !(n_sup_l2 < n_inf_l1)) break;
        }
        inf_l1 = n_inf_l1;
        inf_l1_sq = n_inf_l1_sq;
        sup_l2 = n_sup_l2;
        sup_l23_sq = n_sup_l23_sq;
        first = j;
    }
    if (first == samples)
        throw Error(ErrorCode::NoAdmissibleThreshold,
                    "branch conditions fail at t_hi = " + std::to_string(t_hi) + " (grid too coarse or regime absent)");

    cert.t0 = ts[first];
    cert.L0 = 2.0 * M_PI / cert.t0;
    cert.admissible_samples = samples - first;
    return cert;
}

}  // namespace stagwave
