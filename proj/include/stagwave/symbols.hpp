/**
 * @file symbols.hpp
 * @brief Fourier-multiplier symbols of the linearised operator at a laminar flow.
 *
 * For the cosine mode cos(R x) the linearisation of the surface Bernoulli
 * condition and of the interface gradient-continuity condition with respect
 * to (f, h) is the 2x2 matrix [m11 m12; m21 m22]. Bifurcation candidates are
 * the speeds Lambda at which its determinant vanishes.
 */
#pragma once

#include <algorithm>
#include <cmath>

#include "stagwave/error.hpp"
#include "stagwave/hyperbolic.hpp"
#include "stagwave/model.hpp"

namespace stagwave {

struct SymbolMatrix {
    double m11 = 0.0;
    double m12 = 0.0;
    double m21 = 0.0;
    double m22 = 0.0;

    double determinant() const { return m11 * m22 - m12 * m21; }

    /// Magnitude reference for tolerances on the determinant.
    double scale() const { return std::abs(m11 * m22) + std::abs(m12 * m21); }
};

/// Hyperbolic factors R/sinh(R d2), R coth(R d1), R coth(R d2) shared by the symbols.
struct SymbolFactors {
    double r_csch2 = 0.0;
    double r_coth1 = 0.0;
    double r_coth2 = 0.0;
};

/// R·max(d1, d2) below the small-argument cutoff selects the R -> 0 limits.
inline SymbolFactors symbol_factors(const FluidConfig& cfg, double R) {
    if (!(R >= 0.0)) throw Error(ErrorCode::InvalidArgument, "wavenumber must be non-negative");
    const double d1 = cfg.d1();
    const double d2 = cfg.d2();
    if (R * std::max(d1, d2) < hyp::kSmallArgument) return {1.0 / d2, 1.0 / d1, 1.0 / d2};
    return {hyp::x_csch(R * d2) / d2, hyp::x_coth(R * d1) / d1, hyp::x_coth(R * d2) / d2};
}

inline SymbolMatrix symbol_matrix(const FluidConfig& cfg, double Lambda, double R) {
    const SymbolFactors k = symbol_factors(cfg, R);
    const double g2d2 = cfg.gamma2() * cfg.d2();

    SymbolMatrix s;
    s.m11 = -2.0 * Lambda * (g2d2 - Lambda) * k.r_csch2;
    s.m12 = 2.0 * (cfg.g() + cfg.gamma2() * Lambda - Lambda * Lambda * k.r_coth2);
    s.m21 = cfg.gamma2() - cfg.gamma1() + (Lambda - g2d2) * (k.r_coth1 + k.r_coth2);
    s.m22 = -Lambda * k.r_csch2;
    return s;
}

/// Lambda-derivatives of the four symbols.
inline SymbolMatrix symbol_matrix_dlambda(const FluidConfig& cfg, double Lambda, double R) {
    const SymbolFactors k = symbol_factors(cfg, R);
    const double g2d2 = cfg.gamma2() * cfg.d2();

    SymbolMatrix s;
    s.m11 = -2.0 * (g2d2 - 2.0 * Lambda) * k.r_csch2;
    s.m12 = 2.0 * (cfg.gamma2() - 2.0 * Lambda * k.r_coth2);
    s.m21 = k.r_coth1 + k.r_coth2;
    s.m22 = -k.r_csch2;
    return s;
}

/// D(R, Lambda) = m11 m22 - m12 m21.
inline double determinant(const FluidConfig& cfg, double Lambda, double R) {
    return symbol_matrix(cfg, Lambda, R).determinant();
}

/// D(k, Lambda) at the k-th harmonic R_k = 2kπ/L of the configured wavelength.
inline double determinant_mode(const FluidConfig& cfg, double Lambda, int k) {
    return determinant(cfg, Lambda, k * cfg.wavenumber());
}

}  // namespace stagwave
