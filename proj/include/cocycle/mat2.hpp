#pragma once

#include <array>
#include <cmath>
#include <ostream>

#include "cocycle/errors.hpp"

namespace cocycle {

struct Vec2 {
    double x = 0.0, y = 0.0;

    double norm() const { return std::hypot(x, y); }
    Vec2 normalized() const {
        const double n = norm();
        return {x / n, y / n};
    }
    // (y, -x): the clockwise orthogonal, matching the frame convention.
    Vec2 perp() const { return {y, -x}; }
};

inline double dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }

// Real 2x2 matrix, row-major [[a,b],[c,d]].
struct Mat2 {
    double a = 0.0, b = 0.0, c = 0.0, d = 0.0;

    static Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
    static Mat2 diag(double p, double q) { return {p, 0.0, 0.0, q}; }

    double det() const { return a * d - b * c; }
    double trace() const { return a + d; }

    Mat2 transpose() const { return {a, c, b, d}; }

    Mat2 inverse(double det_floor = 1e-12, long orbit_index = 0) const {
        const double dt = det();
        if (!(std::abs(dt) > det_floor)) throw non_invertible_error(dt, orbit_index);
        return {d / dt, -b / dt, -c / dt, a / dt};
    }

    Vec2 apply(const Vec2& v) const { return {a * v.x + b * v.y, c * v.x + d * v.y}; }

    double max_abs() const {
        return std::max(std::max(std::abs(a), std::abs(b)),
                        std::max(std::abs(c), std::abs(d)));
    }

    bool finite() const {
        return std::isfinite(a) && std::isfinite(b) && std::isfinite(c) && std::isfinite(d);
    }

    Mat2 operator*(const Mat2& o) const {
        return {a * o.a + b * o.c, a * o.b + b * o.d,
                c * o.a + d * o.c, c * o.b + d * o.d};
    }
    Mat2 operator*(double s) const { return {a * s, b * s, c * s, d * s}; }
    Mat2 operator-() const { return {-a, -b, -c, -d}; }
    Mat2 operator+(const Mat2& o) const { return {a + o.a, b + o.b, c + o.c, d + o.d}; }
    Mat2 operator-(const Mat2& o) const { return {a - o.a, b - o.b, c - o.c, d - o.d}; }
};

inline std::ostream& operator<<(std::ostream& os, const Mat2& m) {
    return os << "[[" << m.a << ", " << m.b << "], [" << m.c << ", " << m.d << "]]";
}

// Singular values in closed form: with E=(a+d)/2, F=(a-d)/2, G=(c+b)/2,
// H=(c-b)/2, the values are Q+R and |Q-R| for Q=hypot(E,H), R=hypot(F,G).
struct Sv2 {
    double s1 = 0.0; // largest
    double s2 = 0.0;
};

inline Sv2 singular_values(const Mat2& m) {
    const double e = 0.5 * (m.a + m.d);
    const double f = 0.5 * (m.a - m.d);
    const double g = 0.5 * (m.c + m.b);
    const double h = 0.5 * (m.c - m.b);
    const double q = std::hypot(e, h);
    const double r = std::hypot(f, g);
    return {q + r, std::abs(q - r)};
}

// Operator 2-norm (largest singular value).
inline double norm2(const Mat2& m) { return singular_values(m).s1; }

inline double max_abs_diff(const Mat2& p, const Mat2& q) { return (p - q).max_abs(); }

// R_theta = [[cos t, -sin t], [sin t, cos t]].
inline Mat2 rotation(double theta) {
    const double c = std::cos(theta), s = std::sin(theta);
    return {c, -s, s, c};
}

} // namespace cocycle
