/**
 * @file model.hpp
 * @brief Physical parameters, laminar base flows and stagnation criteria.
 *
 * Two layers of constant vorticity sit on a flat bed y = -d: gamma1 in the
 * bottom layer -d < y < -d2, gamma2 in the top layer -d2 < y < 0 (for the
 * laminar flow). The laminar stream function is parametrised by the
 * relative surface speed Lambda = d/dy psi at y = 0.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

#include "stagwave/error.hpp"

namespace stagwave {

/// Unvalidated parameter record, e.g. straight from a config file.
struct FluidParams {
    double gamma1 = 0.0;
    double gamma2 = 0.0;
    double d1 = 1.0;
    double d2 = 1.0;
    double g = 9.81;
    double L = 1.0;
};

/// Validated physical parameters. Only obtainable through validate_config().
class FluidConfig {
public:
    double gamma1() const noexcept { return gamma1_; }
    double gamma2() const noexcept { return gamma2_; }
    double d1() const noexcept { return d1_; }
    double d2() const noexcept { return d2_; }
    double d() const noexcept { return d_; }
    double g() const noexcept { return g_; }
    double L() const noexcept { return L_; }

    /// Fundamental wavenumber 2π/L.
    double wavenumber() const noexcept { return 2.0 * M_PI / L_; }

    FluidParams params() const { return {gamma1_, gamma2_, d1_, d2_, g_, L_}; }

    /// Same fluid, different wavelength.
    FluidConfig with_wavelength(double L) const;

    /// The configuration with (gamma1, gamma2) -> (-gamma1, -gamma2).
    FluidConfig mirrored() const;

    friend FluidConfig validate_config(const FluidParams& raw);

private:
    FluidConfig() = default;

    double gamma1_ = 0.0;
    double gamma2_ = 0.0;
    double d1_ = 0.0;
    double d2_ = 0.0;
    double d_ = 0.0;
    double g_ = 0.0;
    double L_ = 0.0;
};

inline FluidConfig validate_config(const FluidParams& raw) {
    if (!(raw.d1 > 0.0) || !std::isfinite(raw.d1))
        throw Error(ErrorCode::NonPositiveDepth, "d1 must be positive, got " + std::to_string(raw.d1));
    if (!(raw.d2 > 0.0) || !std::isfinite(raw.d2))
        throw Error(ErrorCode::NonPositiveDepth, "d2 must be positive, got " + std::to_string(raw.d2));
    if (!(raw.g > 0.0) || !std::isfinite(raw.g))
        throw Error(ErrorCode::NonPositiveGravity, "g must be positive, got " + std::to_string(raw.g));
    if (!(raw.L > 0.0) || !std::isfinite(raw.L))
        throw Error(ErrorCode::NonPositiveWavelength, "L must be positive, got " + std::to_string(raw.L));
    if (!std::isfinite(raw.gamma1) || !std::isfinite(raw.gamma2))
        throw Error(ErrorCode::InvalidArgument, "vorticities must be finite");
    if (raw.gamma1 == raw.gamma2)
        throw Error(ErrorCode::EqualVorticities, "gamma1 and gamma2 must differ");

    FluidConfig cfg;
    cfg.gamma1_ = raw.gamma1;
    cfg.gamma2_ = raw.gamma2;
    cfg.d1_ = raw.d1;
    cfg.d2_ = raw.d2;
    cfg.d_ = raw.d1 + raw.d2;
    cfg.g_ = raw.g;
    cfg.L_ = raw.L;
    return cfg;
}

inline FluidConfig FluidConfig::with_wavelength(double L) const {
    FluidParams p = params();
    p.L = L;
    return validate_config(p);
}

inline FluidConfig FluidConfig::mirrored() const {
    FluidParams p = params();
    p.gamma1 = -p.gamma1;
    p.gamma2 = -p.gamma2;
    return validate_config(p);
}

/// Quadratic a2·y² + a1·y + a0.
struct Quadratic {
    double a2 = 0.0;
    double a1 = 0.0;
    double a0 = 0.0;

    double operator()(double y) const { return (a2 * y + a1) * y + a0; }
    double derivative(double y) const { return 2.0 * a2 * y + a1; }
};

/// x-independent solution with flat surface and flat interface.
struct LaminarFlow {
    double Lambda = 0.0;  ///< relative surface speed
    double lambda = 0.0;  ///< stream value on the interface
    double m = 0.0;       ///< stream value on the bed
    double Q = 0.0;       ///< Bernoulli constant on the surface
    Quadratic psi_bottom;  ///< on [-d, -d2]
    Quadratic psi_top;     ///< on [-d2, 0]
};

inline LaminarFlow laminar_flow(const FluidConfig& cfg, double Lambda) {
    const double d1 = cfg.d1();
    const double d2 = cfg.d2();
    const double d = cfg.d();
    const double g1 = cfg.gamma1();
    const double g2 = cfg.gamma2();

    LaminarFlow flow;
    flow.Lambda = Lambda;
    flow.lambda = d2 * (g2 * d2 / 2.0 - Lambda);
    flow.m = flow.lambda * d / d2 + d1 * (g1 * d1 + g2 * d2) / 2.0;
    flow.Q = Lambda * Lambda + 2.0 * cfg.g() * d;

    flow.psi_top = {g2 / 2.0, g2 * d2 / 2.0 - flow.lambda / d2, 0.0};
    flow.psi_bottom = {g1 / 2.0,
                       g1 * (d + d2) / 2.0 + (flow.lambda - flow.m) / d1,
                       flow.lambda * d / d1 + g1 * d * d2 / 2.0 - flow.m * d2 / d1};
    return flow;
}

enum class LayerStagnation { Strict, Boundary, None };

inline const char* to_string(LayerStagnation s) {
    switch (s) {
    case LayerStagnation::Strict: return "strict";
    case LayerStagnation::Boundary: return "boundary";
    case LayerStagnation::None: return "none";
    }
    return "?";
}

struct StagnationReport {
    LayerStagnation top_layer = LayerStagnation::None;
    LayerStagnation bottom_layer = LayerStagnation::None;
    std::optional<double> y0_top;     ///< zero of d/dy psi in (-d2, 0)
    std::optional<double> y0_bottom;  ///< zero of d/dy psi in (-d, -d2)
};

/// Relative tolerance applied to the two stagnation products.
inline constexpr double kStagnationProductTolerance = 1e-12;

inline StagnationReport stagnation_report(const LaminarFlow& flow, const FluidConfig& cfg) {
    const double L = flow.Lambda;
    const double g2d2 = cfg.gamma2() * cfg.d2();
    const double g1d1 = cfg.gamma1() * cfg.d1();
    const double scale = std::max({1.0, L * L, g2d2 * g2d2, (g1d1 + g2d2) * (g1d1 + g2d2)});
    const double tol = kStagnationProductTolerance * scale;

    auto classify = [tol](double product) {
        if (std::abs(product) <= tol) return LayerStagnation::Boundary;
        return product < 0.0 ? LayerStagnation::Strict : LayerStagnation::None;
    };

    StagnationReport report;
    report.top_layer = classify(L * (L - g2d2));
    report.bottom_layer = classify((L - g2d2) * (L - g1d1 - g2d2));

    // d/dy psi_top = gamma2·y + Lambda; opposite end values force gamma2 != 0.
    if (report.top_layer == LayerStagnation::Strict) report.y0_top = -L / cfg.gamma2();
    // d/dy psi_bottom = (Lambda - gamma2·d2) + gamma1·(y + d2).
    if (report.bottom_layer == LayerStagnation::Strict)
        report.y0_bottom = -cfg.d2() - (L - g2d2) / cfg.gamma1();
    return report;
}

}  // namespace stagwave
