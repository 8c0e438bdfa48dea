/**
 * @file jet.hpp
 * @brief Second-order forward-mode jets in two variables (x, y).
 *
 * A Jet2 carries a value together with its gradient and Hessian, so any
 * expression written against it yields exact first and second partial
 * derivatives. The field evaluators are templates over the scalar type and
 * are instantiated with double for plain values and with Jet2 for ∇ψ and
 * Hess ψ.
 */
#pragma once

#include <cmath>

namespace stagwave {

struct Jet2 {
    double v = 0.0;
    double dx = 0.0;
    double dy = 0.0;
    double dxx = 0.0;
    double dxy = 0.0;
    double dyy = 0.0;

    constexpr Jet2() = default;
    constexpr Jet2(double value) : v(value) {}  // NOLINT: implicit constants are convenient here
    constexpr Jet2(double value, double gx, double gy, double hxx, double hxy, double hyy)
        : v(value), dx(gx), dy(gy), dxx(hxx), dxy(hxy), dyy(hyy) {}

    static constexpr Jet2 variable_x(double x) { return {x, 1.0, 0.0, 0.0, 0.0, 0.0}; }
    static constexpr Jet2 variable_y(double y) { return {y, 0.0, 1.0, 0.0, 0.0, 0.0}; }

    Jet2& operator+=(const Jet2& o) { return *this = *this + o; }
    Jet2& operator-=(const Jet2& o) { return *this = *this - o; }
    Jet2& operator*=(const Jet2& o) { return *this = *this * o; }
    Jet2& operator/=(const Jet2& o) { return *this = *this / o; }

    friend constexpr Jet2 operator+(const Jet2& a, const Jet2& b) {
        return {a.v + b.v, a.dx + b.dx, a.dy + b.dy, a.dxx + b.dxx, a.dxy + b.dxy, a.dyy + b.dyy};
    }
    friend constexpr Jet2 operator-(const Jet2& a, const Jet2& b) {
        return {a.v - b.v, a.dx - b.dx, a.dy - b.dy, a.dxx - b.dxx, a.dxy - b.dxy, a.dyy - b.dyy};
    }
    friend constexpr Jet2 operator-(const Jet2& a) { return {-a.v, -a.dx, -a.dy, -a.dxx, -a.dxy, -a.dyy}; }
    friend constexpr Jet2 operator*(const Jet2& a, const Jet2& b) {
        return {a.v * b.v,
                a.dx * b.v + a.v * b.dx,
                a.dy * b.v + a.v * b.dy,
                a.dxx * b.v + 2.0 * a.dx * b.dx + a.v * b.dxx,
                a.dxy * b.v + a.dx * b.dy + a.dy * b.dx + a.v * b.dxy,
                a.dyy * b.v + 2.0 * a.dy * b.dy + a.v * b.dyy};
    }
    friend constexpr Jet2 operator/(const Jet2& a, const Jet2& b) { return a * reciprocal(b); }

    friend constexpr Jet2 reciprocal(const Jet2& b) {
        const double r = 1.0 / b.v;
        return chain(b, r, -r * r, 2.0 * r * r * r);
    }

    /// Composes a scalar function with value f0, first derivative f1 and second derivative f2.
    friend constexpr Jet2 chain(const Jet2& a, double f0, double f1, double f2) {
        return {f0,
                f1 * a.dx,
                f1 * a.dy,
                f1 * a.dxx + f2 * a.dx * a.dx,
                f1 * a.dxy + f2 * a.dx * a.dy,
                f1 * a.dyy + f2 * a.dy * a.dy};
    }
};

inline Jet2 exp(const Jet2& a) {
    const double e = std::exp(a.v);
    return chain(a, e, e, e);
}
inline Jet2 expm1(const Jet2& a) {
    const double e = std::exp(a.v);
    return chain(a, std::expm1(a.v), e, e);
}
inline Jet2 sin(const Jet2& a) {
    const double s = std::sin(a.v);
    return chain(a, s, std::cos(a.v), -s);
}
inline Jet2 cos(const Jet2& a) {
    const double c = std::cos(a.v);
    return chain(a, c, -std::sin(a.v), -c);
}

inline double value_of(double a) { return a; }
inline double value_of(const Jet2& a) { return a.v; }

}  // namespace stagwave
