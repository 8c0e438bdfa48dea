/**
 * @file bifurcation.hpp
 * @brief Bifurcation points on the dispersion branches and first-order waves.
 *
 * certify() checks, at Λ* = Λᵢ(2π/L), the computable hypotheses of a simple
 * bifurcation from the laminar family: the mode-1 determinant vanishes, no
 * other mode (k = 0, 2..K_max) is singular, Λ* avoids the non-Fredholm
 * speeds 0 and γ₂d₂, and the root crosses transversally. The kernel
 * direction (m22, -m21) of mode 1 then gives the leading-order surface and
 * interface amplitudes.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "stagwave/dispersion.hpp"
#include "stagwave/error.hpp"
#include "stagwave/model.hpp"
#include "stagwave/symbols.hpp"

namespace stagwave {

enum class Theorem { MT1, MT2, MT3, MT4, MT5i, MT5ii };

inline const char* to_string(Theorem t) {
    switch (t) {
    case Theorem::MT1: return "MT1";
    case Theorem::MT2: return "MT2";
    case Theorem::MT3: return "MT3";
    case Theorem::MT4: return "MT4";
    case Theorem::MT5i: return "MT5i";
    case Theorem::MT5ii: return "MT5ii";
    }
    return "?";
}

/// Which layers of the laminar flow at Λ* contain a line of stagnation points.
struct StagnationLayer {
    bool top = false;
    bool bottom = false;

    const char* tag() const {
        if (top && bottom) return "both";
        if (top) return "top";
        if (bottom) return "bottom";
        return "none";
    }
};

/// Mode-1 kernel (a, b) ∝ (m22, -m21), scaled to max(|a|, |b|) = 1 without changing orientation.
struct KernelDirection {
    double a = 0.0;
    double b = 0.0;
    /// "interface row" when b/a = -m21/m22, "surface row" when b/a = -m11/m12.
    std::string formula;
};

struct ModeDeterminant {
    int k = 0;
    double D = 0.0;
    double scale = 0.0;
};

inline constexpr int kDefaultKMax = 64;
inline constexpr double kSimplicityTolerance = 1e-6;
inline constexpr double kResonanceTolerance = 1e-8;
inline constexpr double kTransversalityTolerance = 1e-12;

struct BranchCertificate {
    FluidConfig cfg;  ///< carries the wavelength actually requested
    int branch_id = 0;
    int effective_branch = 0;  ///< 3 after the MT5(ii) wavelength replacement, else branch_id
    Theorem theorem = Theorem::MT1;
    double Lambda_star = 0.0;
    double L_effective = 0.0;
    int resonance_k = 0;  ///< k of Λ₃(2πk/L) = Λ₂(2π/L), 0 if none
    double resonance_gap = std::numeric_limits<double>::infinity();
    double t0 = 0.0;  ///< threshold wavenumber used for the L <= L₀ check
    double L0 = 0.0;
    KernelDirection kernel{};
    SymbolMatrix symbols{};  ///< mode-1 symbols at Λ*
    double amplitude_ratio = 0.0;  ///< b/a
    double defining_residual = 0.0;  ///< |D(1, Λ*)| / scale
    std::vector<ModeDeterminant> simplicity{};
    double min_simplicity_ratio = 0.0;  ///< min over checked k of |D(k)| / scale(k)
    bool asymptotic_dominance = false;  ///< |D(k)|/scale(k) increasing over the last checked modes
    double transversality = 0.0;  ///< φ_Λ(2π/L_eff, Λ*)
    double D_lambda = 0.0;  ///< ∂D/∂Λ of mode 1 at Λ*
    StagnationReport stagnation_report{};
    StagnationLayer stagnation{};
    std::vector<std::string> notes{};

    double wavenumber() const { return 2.0 * M_PI / L_effective; }
    FluidConfig effective_config() const { return cfg.with_wavelength(L_effective); }
};

namespace detail {

inline Theorem theorem_for(const FluidConfig& cfg, int branch_id) {
    const double g1 = cfg.gamma1();
    const double g2 = cfg.gamma2();
    if (g2 > 0.0) {
        if (branch_id == 1) return Theorem::MT1;
        if (branch_id == 2) return Theorem::MT2;
        if (branch_id == 3) {
            if (g1 * cfg.d1() + g2 * cfg.d2() < 0.0) return Theorem::MT3;
            throw Error(ErrorCode::UnsupportedRegime, "branch 3 with gamma2 > 0 needs gamma1*d1 + gamma2*d2 < 0");
        }
    } else if (g2 == 0.0 && g1 < 0.0) {
        if (branch_id == 3) return Theorem::MT4;
        if (branch_id == 2) return Theorem::MT5i;
        if (branch_id == 1) throw Error(ErrorCode::UnsupportedRegime, "branch 1 is not covered when gamma2 = 0");
    } else {
        throw Error(ErrorCode::UnsupportedRegime,
                    "supported sign patterns are gamma2 > 0, or gamma2 = 0 with gamma1 < 0 (use the mirrored config)");
    }
    throw Error(ErrorCode::InvalidArgument, "branch id must be 1, 2 or 3");
}

/// Default search grid for the wavelength threshold.
inline ThresholdCertificate default_threshold(const FluidConfig& cfg, int branch_id) {
    const double t = cfg.wavenumber();
    return certify_threshold(cfg, branch_id, 1e-2, std::max(1e4, 4.0 * t), 3000);
}

inline KernelDirection kernel_direction(const FluidConfig& cfg, double Lambda, double R, const SymbolMatrix& m) {
    const SymbolFactors k = symbol_factors(cfg, R);
    const double g2d2 = cfg.gamma2() * cfg.d2();
    // conditioning of each row: computed value relative to the size of its terms
    const double size21 =
        std::abs(cfg.gamma2() - cfg.gamma1()) + std::abs(Lambda - g2d2) * (k.r_coth1 + k.r_coth2);
    const double size12 = 2.0 * (cfg.g() + std::abs(cfg.gamma2() * Lambda) + Lambda * Lambda * k.r_coth2);
    const double c21 = std::abs(m.m21) / size21;
    const double c12 = std::abs(m.m12) / size12;

    KernelDirection dir;
    double a = m.m22;
    double b = 0.0;
    if (c21 >= c12) {
        b = -m.m21;
        dir.formula = "interface row";
    } else {
        // D = 0 gives m21 = m11 m22 / m12
        b = -m.m11 * m.m22 / m.m12;
        dir.formula = "surface row";
    }
    if (a == 0.0 && b == 0.0) throw Error(ErrorCode::KernelNotSimple, "kernel direction underflows");
    const double n = std::max(std::abs(a), std::abs(b));
    dir.a = a / n;
    dir.b = b / n;
    return dir;
}

inline double D_lambda(const FluidConfig& cfg, double Lambda, double R) {
    const SymbolMatrix m = symbol_matrix(cfg, Lambda, R);
    const SymbolMatrix dm = symbol_matrix_dlambda(cfg, Lambda, R);
    return dm.m11 * m.m22 + m.m11 * dm.m22 - dm.m12 * m.m21 - m.m12 * dm.m21;
}

}  // namespace detail

/**
 * Certifies the bifurcation point of `branch_id` at the configured wavelength.
 * Without a threshold certificate one is computed on a default grid first.
 */
inline BranchCertificate certify(const FluidConfig& cfg, int branch_id, int k_max = kDefaultKMax,
                                 const std::optional<ThresholdCertificate>& threshold = std::nullopt) {
    if (k_max < 2) throw Error(ErrorCode::InvalidArgument, "k_max must be at least 2");
    BranchCertificate cert{.cfg = cfg};
    cert.branch_id = branch_id;
    cert.effective_branch = branch_id;
    cert.theorem = detail::theorem_for(cfg, branch_id);

    const ThresholdCertificate thr = threshold ? *threshold : detail::default_threshold(cfg, branch_id);
    if (thr.branch_id != branch_id && !(cfg.gamma2() == 0.0 && thr.regime == Regime::ZeroTopNegativeBottom))
        throw Error(ErrorCode::InvalidArgument, "threshold certificate belongs to another branch");
    cert.t0 = thr.t0;
    cert.L0 = thr.L0;
    if (cfg.L() > thr.L0)
        throw Error(ErrorCode::WavelengthAboveThreshold,
                    "L = " + std::to_string(cfg.L()) + " exceeds L0 = " + std::to_string(thr.L0));

    const double t = cfg.wavenumber();
    double Lambda = branch(cfg, branch_id, t).Lambda;
    double t_eff = t;
    cert.L_effective = cfg.L();

    if (cert.theorem == Theorem::MT5i) {
        for (int k = 2; k <= k_max; ++k) {
            const double gap = std::abs(dispersion_roots(cfg, k * t).lambda3 - Lambda);
            cert.resonance_gap = std::min(cert.resonance_gap, gap);
            if (gap < kResonanceTolerance * std::abs(Lambda)) {
                cert.theorem = Theorem::MT5ii;
                cert.resonance_k = k;
                cert.effective_branch = 3;
                cert.L_effective = cfg.L() / k;
                t_eff = k * t;
                Lambda = dispersion_roots(cfg, t_eff).lambda3;
                cert.notes.push_back("resonance with mode " + std::to_string(k) + ": wavelength replaced by L/" +
                                     std::to_string(k) + " (tolerance 1e-8 relative)");
                break;
            }
        }
    }
    cert.Lambda_star = Lambda;

    cert.stagnation_report = stagnation_report(laminar_flow(cfg, Lambda), cfg);
    if (cert.stagnation_report.top_layer == LayerStagnation::Boundary)
        throw Error(ErrorCode::NonFredholmSpeed, "Lambda* is 0 or gamma2*d2 within tolerance");
    cert.stagnation.top = cert.stagnation_report.top_layer == LayerStagnation::Strict;
    cert.stagnation.bottom = cert.stagnation_report.bottom_layer == LayerStagnation::Strict;

    cert.symbols = symbol_matrix(cfg, Lambda, t_eff);
    cert.defining_residual = std::abs(cert.symbols.determinant()) / cert.symbols.scale();

    cert.min_simplicity_ratio = std::numeric_limits<double>::infinity();
    std::vector<double> ratios;
    for (int k = 0; k <= k_max; ++k) {
        if (k == 1) continue;
        const SymbolMatrix m = symbol_matrix(cfg, Lambda, k * t_eff);
        const ModeDeterminant md{k, m.determinant(), m.scale()};
        cert.simplicity.push_back(md);
        const double ratio = md.scale > 0.0 ? std::abs(md.D) / md.scale : 0.0;
        ratios.push_back(ratio);
        cert.min_simplicity_ratio = std::min(cert.min_simplicity_ratio, ratio);
        if (!(ratio > kSimplicityTolerance))
            throw Error(ErrorCode::KernelNotSimple, "mode " + std::to_string(k) + " is singular at Lambda*");
    }
    const std::size_t n = ratios.size();
    cert.asymptotic_dominance = n >= 3 && ratios[n - 1] >= ratios[n - 2] && ratios[n - 2] >= ratios[n - 3];

    const CubicCoefficients c = cubic_coefficients(cfg, t_eff);
    cert.transversality = c.dlambda(Lambda);
    const double tscale = 3.0 * Lambda * Lambda + 2.0 * std::abs(c.A * Lambda) + std::abs(c.B);
    if (!(std::abs(cert.transversality) > kTransversalityTolerance * tscale))
        throw Error(ErrorCode::TransversalityFailure, "double root of the dispersion relation at Lambda*");
    cert.D_lambda = detail::D_lambda(cfg, Lambda, t_eff);

    cert.kernel = detail::kernel_direction(cfg, Lambda, t_eff, cert.symbols);
    cert.amplitude_ratio = cert.kernel.b / cert.kernel.a;
    return cert;
}

/// Fraction of the threshold wavelength L0 used when the wavelength is chosen automatically.
inline constexpr double kAutoWavelengthFraction = 0.9;

/// Certifies at L = fraction·L0, with L0 from the default threshold search.
inline BranchCertificate certify_auto_wavelength(const FluidConfig& cfg, int branch_id,
                                                 double fraction = kAutoWavelengthFraction, int k_max = kDefaultKMax) {
    if (!(fraction > 0.0 && fraction <= 1.0))
        throw Error(ErrorCode::InvalidArgument, "wavelength fraction must lie in (0, 1]");
    detail::theorem_for(cfg, branch_id);
    const ThresholdCertificate thr = detail::default_threshold(cfg, branch_id);
    return certify(cfg.with_wavelength(fraction * thr.L0), branch_id, k_max, thr);
}

// ---------------------------------------------------------------------------

struct AmplitudeRatioRow {
    double L = 0.0;
    double f_amp = 0.0;
    double h_amp = 0.0;
    double ratio = 0.0;  ///< |f/h| on branch 1, |h/f| otherwise
    double ratio_interface_row = 0.0;  ///< -m22/m21
    double ratio_surface_row = 0.0;    ///< -m12/m11
};

struct AmplitudeRatioTable {
    int branch_id = 0;
    std::vector<AmplitudeRatioRow> rows;
    bool monotone_divergence = false;  ///< ratio strictly increasing as L decreases
};

inline AmplitudeRatioTable amplitude_ratio_diagnostic(const FluidConfig& cfg, int branch_id,
                                                      const std::vector<double>& L_sequence,
                                                      const std::optional<ThresholdCertificate>& threshold =
                                                          std::nullopt) {
    AmplitudeRatioTable table;
    table.branch_id = branch_id;
    const ThresholdCertificate thr = threshold ? *threshold : detail::default_threshold(cfg, branch_id);
    for (double L : L_sequence) {
        const BranchCertificate c = certify(cfg.with_wavelength(L), branch_id, kDefaultKMax, thr);
        AmplitudeRatioRow row;
        row.L = L;
        row.f_amp = c.kernel.a;
        row.h_amp = c.kernel.b;
        row.ratio = branch_id == 1 ? std::abs(c.kernel.a / c.kernel.b) : std::abs(c.kernel.b / c.kernel.a);
        row.ratio_interface_row = -c.symbols.m22 / c.symbols.m21;
        row.ratio_surface_row = -c.symbols.m12 / c.symbols.m11;
        table.rows.push_back(row);
    }
    table.monotone_divergence = table.rows.size() >= 2;
    for (std::size_t i = 1; i < table.rows.size(); ++i) {
        const bool shorter = table.rows[i].L < table.rows[i - 1].L;
        const bool larger = table.rows[i].ratio > table.rows[i - 1].ratio;
        if (!(shorter && larger)) table.monotone_divergence = false;
    }
    return table;
}

// ---------------------------------------------------------------------------

/// First-order wave f = s·a·cos(Rx), h = s·b·cos(Rx) on the laminar flow at Λ*.
struct WaveSolution {
    BranchCertificate certificate;
    double s = 0.0;
    LaminarFlow laminar{};
    double f_amp = 0.0;
    double h_amp = 0.0;

    double wavenumber() const { return certificate.wavenumber(); }
    double L_effective() const { return certificate.L_effective; }
    const FluidConfig& cfg() const { return certificate.cfg; }

    double f(double x) const { return f_amp * std::cos(wavenumber() * x); }
    double h(double x) const { return h_amp * std::cos(wavenumber() * x); }
    double df(double x) const { return -f_amp * wavenumber() * std::sin(wavenumber() * x); }
    double dh(double x) const { return -h_amp * wavenumber() * std::sin(wavenumber() * x); }

    /// -d < -d2 + f(x) < h(x) for every x.
    bool admissible() const {
        return std::abs(f_amp) < cfg().d1() && std::abs(f_amp - h_amp) < cfg().d2();
    }
};

inline WaveSolution build_wave(const BranchCertificate& cert, double s) {
    if (!(s >= 0.0) || !std::isfinite(s))
        throw Error(ErrorCode::InvalidArgument, "amplitude s must be finite and non-negative");
    WaveSolution w{.certificate = cert};
    w.s = s;
    w.laminar = laminar_flow(cert.cfg, cert.Lambda_star);
    w.f_amp = s * cert.kernel.a;
    w.h_amp = s * cert.kernel.b;
    if (!w.admissible())
        throw Error(ErrorCode::AmplitudeSelectionFailed, "profiles leave the admissible set at s = " + std::to_string(s));
    return w;
}

}  // namespace stagwave
