#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

#include "cocycle/mat2.hpp"

namespace cocycle {

// Point of the base space. Circle points use x (mod 1), torus points (x, y)
// in [0,1)^2, periodic-orbit points carry their cycle position in `index`.
struct BasePoint {
    double x = 0.0;
    double y = 0.0;
    int index = -1;
};

enum class Direction { forward, backward };

inline Direction reverse(Direction d) {
    return d == Direction::forward ? Direction::backward : Direction::forward;
}

// v mod 1 in [0, 1).
inline double wrap01(double v) {
    double w = v - std::floor(v);
    if (w >= 1.0) w -= 1.0;
    return w;
}

// SplitMix64 used as a counter-based generator: draw k of a stream is
// finalize(seed + (k+1) * 0x9E3779B97F4A7C15). Bit-reproducible everywhere.
inline std::uint64_t splitmix64_at(std::uint64_t seed, std::uint64_t k) {
    std::uint64_t z = seed + (k + 1) * 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

inline double unit_double(std::uint64_t bits) {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

// 2x2 integer matrix (torus automorphisms).
struct IMat2 {
    long long a = 1, b = 0, c = 0, d = 1;
    long long det() const { return a * d - b * c; }
};

// Invertible base map T with a sampling scheme for its ergodic measure.
class BaseSystem {
public:
    enum class Kind { circle_rotation, torus_automorphism, periodic_orbit };

    static BaseSystem circle_rotation(double alpha);
    static BaseSystem torus_automorphism(const IMat2& m); // requires |det| = 1
    static BaseSystem periodic_orbit(std::vector<BasePoint> points); // nonempty

    Kind kind() const { return kind_; }
    double alpha() const { return alpha_; }
    const IMat2& matrix() const { return mat_; }
    const std::vector<BasePoint>& orbit_points() const { return points_; }

    // Same system iterated in the opposite direction.
    BaseSystem reversed() const;
    bool is_reversed() const { return reversed_; }

    BasePoint step(const BasePoint& p, Direction dir) const;

    // Deterministic mu-samples: uniform on the circle / torus, the cycle
    // points (repeated round-robin) for periodic orbits.
    std::vector<BasePoint> sample_measure(int count, std::uint64_t seed) const;

    // Periodic points of exact-or-divisor period p. Implemented for torus
    // automorphisms (lattice solve) and periodic orbits; a generic circle
    // rotation has none.
    std::vector<BasePoint> periodic_points(int p) const;

private:
    Kind kind_ = Kind::circle_rotation;
    double alpha_ = 0.0;
    IMat2 mat_{};
    IMat2 mat_inv_{};
    std::vector<BasePoint> points_;
    bool reversed_ = false;
};

// Orbit segment x, Tx, ..., laid out so points[origin] = x and points[j]
// = T^(j - origin) x.
struct OrbitBuffer {
    std::vector<BasePoint> points;
    int origin = 0;

    const BasePoint& at_offset(int j) const { return points[origin + j]; }
};

// Builds the segment T^-n_back x .. T^n_fwd x (inclusive ends).
OrbitBuffer make_orbit(const BaseSystem& base, const BasePoint& x, int n_back, int n_fwd);

// Max distance between buffer points and a fresh application of T.
double orbit_consistency(const BaseSystem& base, const OrbitBuffer& orbit);

// (1/n) sum_{j<n} f(T^j x), compensated.
double birkhoff_average(const BaseSystem& base, const BasePoint& x,
                        const std::function<double(const BasePoint&)>& f, long n);

} // namespace cocycle
