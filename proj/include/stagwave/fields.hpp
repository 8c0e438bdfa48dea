/**
 * @file fields.hpp
 * @brief First-order stream function of a bifurcating wave.
 *
 * In flattened coordinates (fixed strips -d2 < ỹ < 0 and -d < ỹ < -d2) the
 * linearised stream function of the mode cos(Rx) is the laminar profile plus
 * a·A(ỹ)+b·B(ỹ) in the top layer and a·C(ỹ) in the bottom layer, where A, B,
 * C solve two-point boundary value problems with closed-form solutions.
 * Physical points are mapped to ỹ by the exact affine inverse of the
 * flattening maps, so the surface, interface and bed values of ψ are exact
 * by construction.
 *
 * Everything is templated over the scalar so that evaluation with Jet2
 * returns ψ together with its exact gradient and Hessian.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "stagwave/bifurcation.hpp"
#include "stagwave/error.hpp"
#include "stagwave/hyperbolic.hpp"
#include "stagwave/jet.hpp"
#include "stagwave/model.hpp"
#include "stagwave/symbols.hpp"

namespace stagwave {

/// Mode profiles A(ỹ), B(ỹ) on [-d2, 0] and C(ỹ) on [-d, -d2] at wavenumber R.
class LinearizedCoefficients {
public:
    LinearizedCoefficients(const FluidConfig& cfg, double Lambda, double R)
        : g1_(cfg.gamma1()), g2_(cfg.gamma2()), d1_(cfg.d1()), d2_(cfg.d2()), d_(cfg.d()), Lambda_(Lambda), R_(R) {
        if (!(R > 0.0) || !std::isfinite(R))
            throw Error(ErrorCode::NonPositiveWavenumber, "mode wavenumber must be positive");
        // quadratic part of C
        c2_ = g1_ / d1_;
        c1_ = ((d_ + d2_) * g1_ + (Lambda_ - g2_ * d2_)) / d1_;
        c0_ = (d_ * Lambda_ + d_ * d2_ * (g1_ - g2_)) / d1_;
    }

    double Lambda() const { return Lambda_; }
    double R() const { return R_; }

    template <class T>
    T A(const T& y) const {
        return (Lambda_ - g2_ * d2_) * hyp::sinh_ratio(R_ * y, R_ * d2_) - (g2_ * y * y + Lambda_ * y) / d2_;
    }

    template <class T>
    T B(const T& y) const {
        return -Lambda_ * hyp::sinh_ratio(R_ * (y + d2_), R_ * d2_) + (g2_ / d2_) * y * y +
               ((g2_ * d2_ + Lambda_) / d2_) * y + Lambda_;
    }

    template <class T>
    T C(const T& y) const {
        return (g2_ * d2_ - Lambda_) * hyp::sinh_ratio(R_ * (d_ + y), R_ * d1_) + (c2_ * y + c1_) * y + c0_;
    }

    double dA(double y) const { return A(Jet2::variable_y(y)).dy; }
    double dB(double y) const { return B(Jet2::variable_y(y)).dy; }
    double dC(double y) const { return C(Jet2::variable_y(y)).dy; }

    /// Right-hand sides of u'' - R²u = rhs for the three profiles.
    double rhs_A(double y) const {
        return -2.0 * g2_ / d2_ + R_ * R_ * (g2_ * y * y + Lambda_ * y) / d2_;
    }
    double rhs_B(double y) const {
        return 2.0 * g2_ / d2_ - R_ * R_ * ((g2_ / d2_) * y * y + ((g2_ * d2_ + Lambda_) / d2_) * y + Lambda_);
    }
    double rhs_C(double y) const { return 2.0 * g1_ / d1_ - R_ * R_ * ((c2_ * y + c1_) * y + c0_); }

private:
    double g1_, g2_, d1_, d2_, d_;
    double Lambda_, R_;
    double c2_ = 0.0, c1_ = 0.0, c0_ = 0.0;
};

inline LinearizedCoefficients linearized_coefficients(const FluidConfig& cfg, double Lambda, double R) {
    return LinearizedCoefficients(cfg, Lambda, R);
}

enum class Layer { Bottom, Top };

inline const char* to_string(Layer l) { return l == Layer::Top ? "top" : "bottom"; }

/// Immutable first-order flow of a WaveSolution.
class FlowField {
public:
    explicit FlowField(WaveSolution wave)
        : wave_(std::move(wave)), coeffs_(wave_.cfg(), wave_.certificate.Lambda_star, wave_.wavenumber()) {}

    const WaveSolution& wave() const { return wave_; }
    const FluidConfig& cfg() const { return wave_.cfg(); }
    const LinearizedCoefficients& coefficients() const { return coeffs_; }
    double period() const { return wave_.L_effective(); }

    double surface(double x) const { return wave_.h(x); }
    double interface(double x) const { return -cfg().d2() + wave_.f(x); }
    double bed() const { return -cfg().d(); }

    bool contains(double x, double y) const {
        const double tol = 1e-12 * cfg().d();
        return y >= bed() - tol && y <= surface(x) + tol;
    }

    /// Points within 1e-12·d of the interface belong to the bottom layer.
    Layer layer_of(double x, double y) const {
        if (!contains(x, y))
            throw Error(ErrorCode::PointOutsideFluid,
                        "point (" + std::to_string(x) + ", " + std::to_string(y) + ") is outside the fluid");
        return y <= interface(x) + 1e-12 * cfg().d() ? Layer::Bottom : Layer::Top;
    }

    /// ψ of one layer's formula, evaluated without a membership check.
    template <class T>
    T psi_layer(Layer layer, const T& x, const T& y) const {
        using std::cos;
        const double R = wave_.wavenumber();
        const T c = cos(R * x);
        const T f = wave_.f_amp * c;
        const double d1 = cfg().d1();
        const double d2 = cfg().d2();
        if (layer == Layer::Top) {
            const T h = wave_.h_amp * c;
            const T yt = d2 * (y - h) / (h - f + d2);
            const Quadratic& q = wave_.laminar.psi_top;
            return (q.a2 * yt + q.a1) * yt + q.a0 + (wave_.f_amp * coeffs_.A(yt) + wave_.h_amp * coeffs_.B(yt)) * c;
        }
        const T yt = (d1 * y - cfg().d() * f) / (d1 + f);
        const Quadratic& q = wave_.laminar.psi_bottom;
        return (q.a2 * yt + q.a1) * yt + q.a0 + wave_.f_amp * coeffs_.C(yt) * c;
    }

    Jet2 jet_layer(Layer layer, double x, double y) const {
        return psi_layer(layer, Jet2::variable_x(x), Jet2::variable_y(y));
    }

    /// ψ with gradient and Hessian at a fluid point.
    Jet2 jet(double x, double y) const { return jet_layer(layer_of(x, y), x, y); }

    double psi(double x, double y) const { return psi_layer(layer_of(x, y), x, y); }

    /// Eulerian first-order expansion ψ⁰(y) + (δψ)(y)·cos(Rx), i.e. the flattening map linearised in s.
    /// Unlike psi_layer its surface and interface values carry an O(s²) error.
    double psi_eulerian(Layer layer, double x, double y) const {
        const double c = std::cos(wave_.wavenumber() * x);
        const double fa = wave_.f_amp;
        const double ha = wave_.h_amp;
        const double d2 = cfg().d2();
        if (layer == Layer::Top) {
            const Quadratic& q = wave_.laminar.psi_top;
            const double shift = ha + y * (ha - fa) / d2;
            return q(y) + (fa * coeffs_.A(y) + ha * coeffs_.B(y) - q.derivative(y) * shift) * c;
        }
        const Quadratic& q = wave_.laminar.psi_bottom;
        return q(y) + fa * (coeffs_.C(y) - q.derivative(y) * (cfg().d() + y) / cfg().d1()) * c;
    }

    /// Flattened coordinate ỹ of a physical point in the given layer.
    double flattened_y(Layer layer, double x, double y) const {
        const double f = wave_.f(x);
        if (layer == Layer::Top) {
            const double h = wave_.h(x);
            return cfg().d2() * (y - h) / (h - f + cfg().d2());
        }
        return (cfg().d1() * y - cfg().d() * f) / (cfg().d1() + f);
    }

    /// Physical y of the flattened coordinate ỹ in the given layer.
    double physical_y(Layer layer, double x, double yt) const {
        const double f = wave_.f(x);
        if (layer == Layer::Top) {
            const double h = wave_.h(x);
            return h + yt * (h - f + cfg().d2()) / cfg().d2();
        }
        return (yt * (cfg().d1() + f) + cfg().d() * f) / cfg().d1();
    }

private:
    WaveSolution wave_;
    LinearizedCoefficients coeffs_;
};

inline double stream_function(const FlowField& field, double x, double y) { return field.psi(x, y); }

/// (u - c, v) = (∂yψ, -∂xψ).
inline std::pair<double, double> velocity(const FlowField& field, double x, double y) {
    const Jet2 j = field.jet(x, y);
    return {j.dy, -j.dx};
}

/// Boundary-condition defects of a FlowField sampled at n points of one period.
struct FieldResiduals {
    double bernoulli = 0.0;           ///< max |∇ψ|² + 2g(d+h) - Q on y = h
    double surface_psi = 0.0;         ///< max |ψ(x, h)|
    double surface_psi_eulerian = 0.0;  ///< max |ψ(x, h)| of the Eulerian expansion
    double interface_jump = 0.0;      ///< max |[∂yψ]| across y = -d2 + f
    double interface_value = 0.0;     ///< max |ψ - λ| on y = -d2 + f, both layers
    double bed_value = 0.0;           ///< max |ψ(x, -d) - m|
};

inline FieldResiduals field_residuals(const FlowField& field, int n = 64) {
    if (n < 1) throw Error(ErrorCode::InvalidArgument, "need at least one sample");
    const LaminarFlow& lam = field.wave().laminar;
    const double g = field.cfg().g();
    const double d = field.cfg().d();
    FieldResiduals r;
    for (int i = 0; i < n; ++i) {
        const double x = field.period() * i / n;
        const double h = field.surface(x);
        const double yi = field.interface(x);
        const Jet2 s = field.jet_layer(Layer::Top, x, h);
        const Jet2 top = field.jet_layer(Layer::Top, x, yi);
        const Jet2 bot = field.jet_layer(Layer::Bottom, x, yi);
        r.bernoulli = std::max(r.bernoulli, std::abs(s.dx * s.dx + s.dy * s.dy + 2.0 * g * (d + h) - lam.Q));
        r.surface_psi = std::max(r.surface_psi, std::abs(s.v));
        r.surface_psi_eulerian = std::max(r.surface_psi_eulerian, std::abs(field.psi_eulerian(Layer::Top, x, h)));
        r.interface_jump = std::max(r.interface_jump, std::abs(top.dy - bot.dy));
        r.interface_value = std::max({r.interface_value, std::abs(top.v - lam.lambda), std::abs(bot.v - lam.lambda)});
        r.bed_value = std::max(r.bed_value, std::abs(field.psi_layer(Layer::Bottom, x, field.bed()) - lam.m));
    }
    return r;
}

/// Symbols rebuilt from boundary derivatives of the mode profiles.
inline SymbolMatrix symbols_from_profiles(const FluidConfig& cfg, double Lambda, double R) {
    const LinearizedCoefficients k(cfg, Lambda, R);
    const double d1 = cfg.d1();
    const double d2 = cfg.d2();
    const double shear = Lambda - cfg.gamma2() * d2;  // ∂yψ⁰ at the interface
    SymbolMatrix m;
    m.m11 = 2.0 * (Lambda * Lambda / d2 + Lambda * k.dA(0.0));
    m.m12 = 2.0 * (cfg.g() + Lambda * k.dB(0.0) - Lambda * Lambda / d2);
    m.m21 = k.dA(-d2) - k.dC(-d2) + shear * (1.0 / d1 + 1.0 / d2);
    m.m22 = k.dB(-d2) - shear / d2;
    return m;
}

}  // namespace stagwave
