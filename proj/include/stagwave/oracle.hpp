/**
 * @file oracle.hpp
 * @brief Independent reference computations used for verification.
 *
 * - fd_solve: second-order finite differences for u'' - R²u = rhs with zero
 *   Dirichlet data, solved by tridiagonal elimination.
 * - bisect_roots: bracketed bisection with one centred-difference Newton step.
 * - mp: the textbook formulas for the cubic coefficients, its Cardano roots,
 *   the symbols and the laminar constants in 50-digit binary floating point,
 *   with plain sinh/cosh/tanh and no rearrangement.
 *
 * Only the verify subcommand and the tests include this header.
 */
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include "stagwave/error.hpp"
#include "stagwave/model.hpp"

namespace stagwave::oracle {

struct BVPSpec {
    double y_lo = 0.0;
    double y_hi = 1.0;
    double R2 = 0.0;
    std::function<double(double)> rhs;
};

struct BVPSolution {
    std::vector<double> y;
    std::vector<double> u;
    double h = 0.0;
};

inline BVPSolution fd_solve(const BVPSpec& spec, int n) {
    if (n < 4) throw Error(ErrorCode::InvalidArgument, "need at least 4 mesh cells");
    if (!(spec.y_lo < spec.y_hi)) throw Error(ErrorCode::InvalidArgument, "need y_lo < y_hi");
    if (!(spec.R2 >= 0.0)) throw Error(ErrorCode::InvalidArgument, "R² must be non-negative");
    if (!spec.rhs) throw Error(ErrorCode::InvalidArgument, "missing right-hand side");

    BVPSolution sol;
    sol.h = (spec.y_hi - spec.y_lo) / n;
    sol.y.resize(n + 1);
    sol.u.assign(n + 1, 0.0);
    for (int i = 0; i <= n; ++i) sol.y[i] = spec.y_lo + i * sol.h;
    sol.y[n] = spec.y_hi;

    // interior unknowns 1..n-1: (u[i-1] - 2u[i] + u[i+1]) / h² - R² u[i] = rhs(y[i])
    const int m = n - 1;
    const double off = 1.0 / (sol.h * sol.h);
    const double diag = -2.0 * off - spec.R2;
    std::vector<double> c(m), d(m);
    double denom = diag;
    for (int i = 0; i < m; ++i) {
        const double r = spec.rhs(sol.y[i + 1]);
        if (!std::isfinite(r)) throw Error(ErrorCode::InvalidArgument, "right-hand side is not finite");
        if (i == 0) {
            denom = diag;
            c[i] = off / denom;
            d[i] = r / denom;
        } else {
            denom = diag - off * c[i - 1];
            c[i] = off / denom;
            d[i] = (r - off * d[i - 1]) / denom;
        }
        if (denom == 0.0) throw Error(ErrorCode::SingularSystem, "zero pivot in tridiagonal elimination");
    }
    sol.u[m] = d[m - 1];
    for (int i = m - 2; i >= 0; --i) sol.u[i + 1] = d[i] - c[i] * sol.u[i + 2];
    return sol;
}

using Bracket = std::pair<double, double>;

inline double bisect_root(const std::function<double(double)>& f, Bracket br) {
    double a = std::min(br.first, br.second);
    double b = std::max(br.first, br.second);
    double fa = f(a);
    double fb = f(b);
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if ((fa < 0.0) == (fb < 0.0))
        throw Error(ErrorCode::NoSignChange,
                    "no sign change on [" + std::to_string(a) + ", " + std::to_string(b) + "]");
    for (int it = 0; it < 400; ++it) {
        const double mid = 0.5 * (a + b);
        if (mid <= a || mid >= b) break;
        if (b - a <= 1e-12 * std::max(std::abs(a), std::abs(b))) break;
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((fm < 0.0) == (fa < 0.0)) {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    const double x = 0.5 * (a + b);
    // one Newton step with a centred difference, kept only if it improves the residual inside the bracket
    const double h = std::max(b - a, 1e-8 * std::max(std::abs(x), 1e-300));
    const double slope = (f(x + h) - f(x - h)) / (2.0 * h);
    const double fx = f(x);
    if (slope != 0.0 && std::isfinite(slope)) {
        const double xn = x - fx / slope;
        if (xn >= a && xn <= b && std::abs(f(xn)) < std::abs(fx)) return xn;
    }
    return x;
}

inline std::vector<double> bisect_roots(const std::function<double(double)>& f, const std::vector<Bracket>& brackets) {
    std::vector<double> roots;
    roots.reserve(brackets.size());
    for (const Bracket& br : brackets) roots.push_back(bisect_root(f, br));
    return roots;
}

// ---------------------------------------------------------------------------
// Extended precision re-evaluation

namespace mp {

using real = boost::multiprecision::cpp_bin_float_50;

struct Cubic {
    real A, B, C;
};

inline Cubic cubic_coefficients(const FluidConfig& cfg, double t_in) {
    using boost::multiprecision::cosh;
    using boost::multiprecision::sinh;
    using boost::multiprecision::tanh;
    const real t = t_in, g1 = cfg.gamma1(), g2 = cfg.gamma2(), d1 = cfg.d1(), d2 = cfg.d2(), g = cfg.g();
    const real d = d1 + d2;
    Cubic c;
    c.A = -(g2 * (t * d2 + sinh(t * d2) * cosh(t * d1) / cosh(t * d)) + g1 * sinh(t * d1) * cosh(t * d2) / cosh(t * d)) / t;
    const real P = sinh(t * d1) * sinh(t * d2) / sinh(t * d);
    c.B = tanh(t * d) * ((g2 * g2 * d2 - g) / t + g2 * (g1 - g2) * P / (t * t));
    c.C = g * tanh(t * d) / (t * t) * ((g1 - g2) * P + g2 * d2 * t);
    return c;
}

inline real cubic_value(const Cubic& c, const real& L) { return ((L + c.A) * L + c.B) * L + c.C; }

/// Trigonometric Cardano roots in descending order.
inline std::array<real, 3> cubic_roots(const Cubic& c) {
    using boost::multiprecision::acos;
    using boost::multiprecision::cos;
    using boost::multiprecision::sqrt;
    const real pi = boost::math::constants::pi<real>();
    const real p = c.B - c.A * c.A / 3;
    const real q = 2 * c.A * c.A * c.A / 27 - c.A * c.B / 3 + c.C;
    if (!(p < 0)) throw Error(ErrorCode::NotThreeRealRoots, "depressed cubic has p >= 0");
    const real r = 2 * sqrt(-p / 3);
    real arg = 3 * q / (p * r);
    if (arg > 1 || arg < -1) throw Error(ErrorCode::NotThreeRealRoots, "discriminant is not negative");
    const real beta = acos(arg) / 3;
    std::array<real, 3> out;
    for (int k = 0; k < 3; ++k) out[k] = r * cos(beta - 2 * pi * k / 3) - c.A / 3;
    std::sort(out.begin(), out.end(), [](const real& a, const real& b) { return a > b; });
    return out;
}

struct Symbols {
    real m11, m12, m21, m22;
    real determinant() const { return m11 * m22 - m12 * m21; }
};

inline Symbols symbol_matrix(const FluidConfig& cfg, const real& L, double R_in) {
    using boost::multiprecision::cosh;
    using boost::multiprecision::sinh;
    const real R = R_in, g1 = cfg.gamma1(), g2 = cfg.gamma2(), d1 = cfg.d1(), d2 = cfg.d2(), g = cfg.g();
    Symbols s;
    if (R == 0) {
        s.m11 = -2 * L * (g2 * d2 - L) / d2;
        s.m12 = 2 * (g + g2 * L - L * L / d2);
        s.m21 = (g2 - g1) + (L - g2 * d2) * (1 / d1 + 1 / d2);
        s.m22 = -L / d2;
        return s;
    }
    const real coth1 = cosh(R * d1) / sinh(R * d1);
    const real coth2 = cosh(R * d2) / sinh(R * d2);
    s.m11 = -2 * L * (g2 * d2 - L) * R / sinh(R * d2);
    s.m12 = 2 * (g + g2 * L - L * L * R * coth2);
    s.m21 = g2 - g1 + (L - g2 * d2) * (R * coth1 + R * coth2);
    s.m22 = -L * R / sinh(R * d2);
    return s;
}

inline Symbols symbol_matrix(const FluidConfig& cfg, double Lambda, double R) {
    return symbol_matrix(cfg, real(Lambda), R);
}

/// |m11·m22| + |m12·m21|, the size of the two products in D.
inline real determinant_scale(const Symbols& s) { return abs(s.m11 * s.m22) + abs(s.m12 * s.m21); }

struct Laminar {
    real lambda, m, Q;
};

inline Laminar laminar_flow(const FluidConfig& cfg, double Lambda_in) {
    const real L = Lambda_in, g1 = cfg.gamma1(), g2 = cfg.gamma2(), d1 = cfg.d1(), d2 = cfg.d2(), g = cfg.g();
    const real d = d1 + d2;
    Laminar out;
    out.lambda = d2 * (g2 * d2 / 2 - L);
    out.m = out.lambda * d / d2 + d1 * (g1 * d1 + g2 * d2) / 2;
    out.Q = L * L + 2 * g * d;
    return out;
}

inline double to_double(const real& x) { return x.convert_to<double>(); }

}  // namespace mp

}  // namespace stagwave::oracle
