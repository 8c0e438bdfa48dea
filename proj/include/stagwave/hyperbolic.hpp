/**
 * @file hyperbolic.hpp
 * @brief Overflow-free hyperbolic ratios.
 *
 * Every quotient of hyperbolic functions appearing in the symbols, the cubic
 * coefficients and the mode profiles is rewritten in terms of exp(-2x) and
 * expm1(-2x) with non-positive exponents, so the evaluation neither
 * overflows for large arguments nor cancels for small ones.
 */
#pragma once

#include <cmath>

#include "stagwave/jet.hpp"

namespace stagwave::hyp {

/// Below this argument x·csch(x) and x·coth(x) are replaced by their limit 1.
inline constexpr double kSmallArgument = 1e-6;

/// x / sinh(x) for x >= 0.
inline double x_csch(double x) {
    if (x < kSmallArgument) return 1.0;
    return -2.0 * x * std::exp(-x) / std::expm1(-2.0 * x);
}

/// x · coth(x) for x >= 0.
inline double x_coth(double x) {
    if (x < kSmallArgument) return 1.0;
    return -x * (2.0 + std::expm1(-2.0 * x)) / std::expm1(-2.0 * x);
}

/// 1 / sinh(x)² for x > 0.
inline double csch2(double x) {
    const double c = -2.0 * std::exp(-x) / std::expm1(-2.0 * x);
    return c * c;
}

/// sech(x)² for x >= 0.
inline double sech2(double x) {
    const double e = std::exp(-2.0 * x);
    return 4.0 * e / ((1.0 + e) * (1.0 + e));
}

/// sinh(a)·cosh(b) / cosh(a + b) for a, b >= 0.
inline double sinh_cosh_over_cosh(double a, double b) {
    return -std::expm1(-2.0 * a) * (1.0 + std::exp(-2.0 * b)) / (2.0 * (1.0 + std::exp(-2.0 * (a + b))));
}

/// sinh(a)·sinh(b) / sinh(a + b) for a, b >= 0, a + b > 0.
inline double sinh_sinh_over_sinh(double a, double b) {
    return -std::expm1(-2.0 * a) * std::expm1(-2.0 * b) / (2.0 * std::expm1(-2.0 * (a + b)));
}

/// cosh(b) / cosh(a + b) for a, b >= 0.
inline double cosh_over_cosh(double a, double b) {
    return std::exp(-a) * (1.0 + std::exp(-2.0 * b)) / (1.0 + std::exp(-2.0 * (a + b)));
}

/// sinh(a) / cosh(a + b) for a, b >= 0.
inline double sinh_over_cosh(double a, double b) {
    return -std::exp(-b) * std::expm1(-2.0 * a) / (1.0 + std::exp(-2.0 * (a + b)));
}

/// sinh(b) / sinh(a + b) for a, b >= 0, a + b > 0.
inline double sinh_over_sinh(double a, double b) {
    return std::exp(-a) * std::expm1(-2.0 * b) / std::expm1(-2.0 * (a + b));
}

/// sinh(u) / sinh(w) for w > 0 and any real u (scalar or jet).
template <class T>
T sinh_ratio(const T& u, double w) {
    using std::exp;
    using std::expm1;
    const double den = std::expm1(-2.0 * w);
    if (value_of(u) >= 0.0) return exp(u - w) * expm1(-2.0 * u) / den;
    return -(exp(-u - w) * expm1(2.0 * u) / den);
}

/// cosh(u) / sinh(w) for w > 0 and any real u (scalar or jet).
template <class T>
T cosh_ratio(const T& u, double w) {
    using std::exp;
    const double den = -std::expm1(-2.0 * w);
    if (value_of(u) >= 0.0) return exp(u - w) * (1.0 + exp(-2.0 * u)) / den;
    return exp(-u - w) * (1.0 + exp(2.0 * u)) / den;
}

}  // namespace stagwave::hyp
