#include "cocycle/base_systems.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cocycle/errors.hpp"
#include "cocycle/summation.hpp"

namespace cocycle {

BaseSystem BaseSystem::circle_rotation(double alpha) {
    BaseSystem b;
    b.kind_ = Kind::circle_rotation;
    b.alpha_ = wrap01(alpha);
    return b;
}

BaseSystem BaseSystem::torus_automorphism(const IMat2& m) {
    if (std::abs(m.det()) != 1)
        throw std::invalid_argument("torus automorphism matrix must have |det| = 1");
    BaseSystem b;
    b.kind_ = Kind::torus_automorphism;
    b.mat_ = m;
    const long long s = m.det(); // +1 or -1; adjugate / det stays integral
    b.mat_inv_ = {s * m.d, -s * m.b, -s * m.c, s * m.a};
    return b;
}

BaseSystem BaseSystem::periodic_orbit(std::vector<BasePoint> points) {
    if (points.empty()) throw std::invalid_argument("periodic orbit must be nonempty");
    BaseSystem b;
    b.kind_ = Kind::periodic_orbit;
    b.points_ = std::move(points);
    for (std::size_t i = 0; i < b.points_.size(); ++i)
        b.points_[i].index = static_cast<int>(i);
    return b;
}

BaseSystem BaseSystem::reversed() const {
    BaseSystem b = *this;
    b.reversed_ = !b.reversed_;
    return b;
}

BasePoint BaseSystem::step(const BasePoint& p, Direction dir) const {
    if (reversed_) dir = reverse(dir);
    switch (kind_) {
    case Kind::circle_rotation: {
        const double a = dir == Direction::forward ? alpha_ : -alpha_;
        return {wrap01(p.x + a), 0.0, -1};
    }
    case Kind::torus_automorphism: {
        const IMat2& m = dir == Direction::forward ? mat_ : mat_inv_;
        const double nx = static_cast<double>(m.a) * p.x + static_cast<double>(m.b) * p.y;
        const double ny = static_cast<double>(m.c) * p.x + static_cast<double>(m.d) * p.y;
        return {wrap01(nx), wrap01(ny), -1};
    }
    case Kind::periodic_orbit: {
        const int n = static_cast<int>(points_.size());
        int i = p.index;
        if (i < 0 || i >= n) throw std::invalid_argument("point is not on the periodic orbit");
        i = dir == Direction::forward ? (i + 1) % n : (i + n - 1) % n;
        return points_[static_cast<std::size_t>(i)];
    }
    }
    throw std::logic_error("unreachable");
}

std::vector<BasePoint> BaseSystem::sample_measure(int count, std::uint64_t seed) const {
    if (count < 1) throw std::invalid_argument("sample count must be >= 1");
    std::vector<BasePoint> out;
    out.reserve(static_cast<std::size_t>(count));
    switch (kind_) {
    case Kind::circle_rotation:
        for (int i = 0; i < count; ++i)
            out.push_back({unit_double(splitmix64_at(seed, 2ull * i)), 0.0, -1});
        break;
    case Kind::torus_automorphism:
        for (int i = 0; i < count; ++i)
            out.push_back({unit_double(splitmix64_at(seed, 2ull * i)),
                           unit_double(splitmix64_at(seed, 2ull * i + 1)), -1});
        break;
    case Kind::periodic_orbit:
        for (int i = 0; i < count; ++i)
            out.push_back(points_[static_cast<std::size_t>(i) % points_.size()]);
        break;
    }
    return out;
}

std::vector<BasePoint> BaseSystem::periodic_points(int p) const {
    if (p < 1) throw std::invalid_argument("period must be >= 1");
    std::vector<BasePoint> out;
    switch (kind_) {
    case Kind::circle_rotation:
        // irrational rotations have none; rational ones are everywhere
        // periodic and carry no distinguished finite set
        return out;
    case Kind::periodic_orbit:
        if (static_cast<int>(points_.size()) % p == 0 || p % static_cast<int>(points_.size()) == 0)
            out = points_;
        return out;
    case Kind::torus_automorphism:
        break;
    }

    // Solutions of (M^p - I) x in Z^2 with x in [0,1)^2: x = K^{-1} m for
    // the integer vectors m inside K([0,1)^2).
    IMat2 k = mat_;
    for (int i = 1; i < p; ++i) {
        IMat2 r;
        r.a = mat_.a * k.a + mat_.b * k.c;
        r.b = mat_.a * k.b + mat_.b * k.d;
        r.c = mat_.c * k.a + mat_.d * k.c;
        r.d = mat_.c * k.b + mat_.d * k.d;
        k = r;
    }
    k.a -= 1;
    k.d -= 1;
    const long long det = k.det();
    if (det == 0) return out; // parabolic power: no isolated periodic points

    const auto corners_x = {0ll, k.a, k.b, k.a + k.b};
    const auto corners_y = {0ll, k.c, k.d, k.c + k.d};
    const long long x_lo = std::min(corners_x), x_hi = std::max(corners_x);
    const long long y_lo = std::min(corners_y), y_hi = std::max(corners_y);

    for (long long m1 = x_lo; m1 <= x_hi; ++m1) {
        for (long long m2 = y_lo; m2 <= y_hi; ++m2) {
            // x = adj(K) m / det, accepted iff both coordinates lie in [0,1)
            long long n1 = k.d * m1 - k.b * m2;
            long long n2 = -k.c * m1 + k.a * m2;
            long long den = det;
            if (den < 0) {
                n1 = -n1;
                n2 = -n2;
                den = -den;
            }
            if (n1 < 0 || n1 >= den || n2 < 0 || n2 >= den) continue;
            out.push_back({static_cast<double>(n1) / static_cast<double>(den),
                           static_cast<double>(n2) / static_cast<double>(den), -1});
        }
    }
    return out;
}

OrbitBuffer make_orbit(const BaseSystem& base, const BasePoint& x, int n_back, int n_fwd) {
    if (n_back < 0 || n_fwd < 0) throw std::invalid_argument("orbit extents must be >= 0");
    OrbitBuffer buf;
    buf.points.resize(static_cast<std::size_t>(n_back + n_fwd + 1));
    buf.origin = n_back;
    buf.points[static_cast<std::size_t>(n_back)] = x;
    BasePoint p = x;
    for (int j = n_back - 1; j >= 0; --j) {
        p = base.step(p, Direction::backward);
        buf.points[static_cast<std::size_t>(j)] = p;
    }
    p = x;
    for (int j = n_back + 1; j <= n_back + n_fwd; ++j) {
        p = base.step(p, Direction::forward);
        buf.points[static_cast<std::size_t>(j)] = p;
    }
    return buf;
}

double orbit_consistency(const BaseSystem& base, const OrbitBuffer& orbit) {
    double worst = 0.0;
    for (std::size_t j = 0; j + 1 < orbit.points.size(); ++j) {
        const BasePoint q = base.step(orbit.points[j], Direction::forward);
        const BasePoint& r = orbit.points[j + 1];
        // circle distance on each coordinate (coords live mod 1)
        auto circ = [](double a, double b) {
            const double d = std::abs(wrap01(a) - wrap01(b));
            return std::min(d, 1.0 - d);
        };
        worst = std::max(worst, std::max(circ(q.x, r.x), circ(q.y, r.y)));
    }
    return worst;
}

double birkhoff_average(const BaseSystem& base, const BasePoint& x,
                        const std::function<double(const BasePoint&)>& f, long n) {
    if (n < 1) throw std::invalid_argument("birkhoff length must be >= 1");
    NeumaierSum sum;
    BasePoint p = x;
    for (long j = 0; j < n; ++j) {
        const double v = f(p);
        if (!std::isfinite(v)) throw numeric_error("non-finite observable", j);
        sum.add(v);
        p = base.step(p, Direction::forward);
    }
    return sum.value() / static_cast<double>(n);
}

} // namespace cocycle
