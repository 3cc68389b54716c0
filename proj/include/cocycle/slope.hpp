#pragma once

#include <cmath>
#include <limits>
#include <ostream>

#include "cocycle/mat2.hpp"

namespace cocycle {

// Direction span((v1,v2)) in the slope chart z = v1/v2; span((1,0)) is the
// tagged point at infinity.
class Slope {
public:
    Slope() = default;
    explicit Slope(double v) : value_(v), infinite_(false) {}

    static Slope infinity() {
        Slope s;
        s.infinite_ = true;
        s.value_ = std::numeric_limits<double>::infinity();
        return s;
    }

    // Slope of a direction vector; (v1, 0) maps to infinity.
    static Slope of_direction(const Vec2& v) {
        if (v.y == 0.0) return infinity();
        return Slope(v.x / v.y);
    }

    bool is_infinite() const { return infinite_; }
    double value() const { return value_; } // +inf when infinite

    // Unit direction vector with the sign convention u2 > 0, or u1 > 0
    // when u2 = 0.
    Vec2 unit_vector() const {
        if (infinite_) return {1.0, 0.0};
        const double n = std::hypot(value_, 1.0);
        return {value_ / n, 1.0 / n};
    }

private:
    double value_ = 0.0;
    bool infinite_ = false;
};

inline std::ostream& operator<<(std::ostream& os, const Slope& s) {
    if (s.is_infinite()) return os << "inf";
    return os << s.value();
}

// Chordal distance on the extended real line (the real great circle of the
// Riemann sphere): d(z,w) = 2|z-w| / (sqrt(1+z^2) sqrt(1+w^2)), d(z,inf) =
// 2/sqrt(1+z^2). Equals 2|sin(phi_z - phi_w)| in direction angles, so
// orthogonal directions are at distance 2.
inline double chordal(const Slope& p, const Slope& q) {
    if (p.is_infinite() && q.is_infinite()) return 0.0;
    if (p.is_infinite()) return 2.0 / std::hypot(q.value(), 1.0);
    if (q.is_infinite()) return 2.0 / std::hypot(p.value(), 1.0);
    return 2.0 * std::abs(p.value() - q.value()) /
           (std::hypot(p.value(), 1.0) * std::hypot(q.value(), 1.0));
}

// Moebius action m.z = (az+b)/(cz+d) on the extended line, computed on a
// homogeneous representative so both charts are handled uniformly:
// z = inf acts on (1,0) giving a/c; a zero denominator gives inf.
inline Slope mobius_act(const Mat2& m, const Slope& z) {
    double p, q;
    if (z.is_infinite()) {
        p = m.a;
        q = m.c;
    } else if (std::abs(z.value()) > 1.0) {
        // reciprocal chart: representative (1, 1/z)
        const double w = 1.0 / z.value();
        p = m.a + m.b * w;
        q = m.c + m.d * w;
    } else {
        p = m.a * z.value() + m.b;
        q = m.c * z.value() + m.d;
    }
    if (q == 0.0) return Slope::infinity();
    const double r = p / q;
    if (std::isinf(r)) return Slope::infinity();
    return Slope(r);
}

} // namespace cocycle
