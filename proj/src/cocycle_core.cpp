#include "cocycle/cocycle_core.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "cocycle/errors.hpp"
#include "cocycle/parallel.hpp"
#include "cocycle/summation.hpp"

namespace cocycle {

namespace {
constexpr long kMaxProductLength = 10'000'000;
constexpr int kRenormCadence = 32;
} // namespace

Mat2 CocycleSpec::at(const BasePoint& p, long orbit_index) const {
    const Mat2 m = generator(p);
    if (!m.finite()) throw numeric_error("non-finite generator value", orbit_index);
    const double dt = m.det();
    if (!(std::abs(dt) > det_floor)) throw non_invertible_error(dt, orbit_index);
    if (orientation_preserving && dt <= 0.0)
        throw data_error("orientation-preserving cocycle produced det <= 0");
    return m;
}

CocycleSpec constant_cocycle(const Mat2& m) {
    CocycleSpec c;
    c.generator = [m](const BasePoint&) { return m; };
    c.orientation_preserving = m.det() > 0.0;
    return c;
}

CocycleSpec rotate_family(const CocycleSpec& c, double theta) {
    CocycleSpec r = c;
    const Mat2 rot = rotation(theta);
    auto gen = c.generator;
    r.generator = [gen, rot](const BasePoint& p) { return gen(p) * rot; };
    return r;
}

CocycleSpec inverse_cocycle(const CocycleSpec& c, const BaseSystem& base) {
    CocycleSpec r;
    r.orientation_preserving = c.orientation_preserving;
    r.det_floor = c.det_floor;
    const CocycleSpec orig = c;
    r.generator = [orig, base](const BasePoint& p) {
        const BasePoint q = base.step(p, Direction::backward);
        return orig.at(q).inverse(orig.det_floor);
    };
    return r;
}

Mat2 compose_n(const CocycleSpec& c, const BaseSystem& base, const BasePoint& x, long n) {
    if (std::abs(n) > kMaxProductLength)
        throw std::invalid_argument("product length exceeds configured maximum");
    Mat2 prod = Mat2::identity();
    if (n >= 0) {
        BasePoint p = x;
        for (long j = 0; j < n; ++j) {
            prod = c.at(p, j) * prod;
            p = base.step(p, Direction::forward);
        }
    } else {
        // A^{-n}(x) = A(T^-n x)^-1 ... A(T^-1 x)^-1: deepest factor leftmost
        BasePoint p = x;
        for (long j = 1; j <= -n; ++j) {
            p = base.step(p, Direction::backward);
            prod = c.at(p, -j).inverse(c.det_floor, -j) * prod;
        }
    }
    if (!prod.finite()) throw numeric_error("non-finite cocycle product", n);
    return prod;
}

void ScaledMat2::push_left(const Mat2& a, long orbit_index) {
    m_ = a * m_;
    log_det_ += std::log(std::abs(a.det()));
    renormalize(orbit_index);
}

void ScaledMat2::push_right(const Mat2& a, long orbit_index) {
    m_ = m_ * a;
    log_det_ += std::log(std::abs(a.det()));
    renormalize(orbit_index);
}

void ScaledMat2::renormalize(long orbit_index) {
    if (!m_.finite()) throw numeric_error("non-finite product despite renormalization", orbit_index);
    if (++since_renorm_ >= kRenormCadence || m_.max_abs() > 1e140) {
        const double s = m_.max_abs();
        if (s == 0.0) throw numeric_error("zero product", orbit_index);
        m_ = m_ * (1.0 / s);
        log_scale_ += std::log(s);
        since_renorm_ = 0;
    }
}

double ScaledMat2::log_norm2() const { return std::log(norm2(m_)) + log_scale_; }

double ScaledMat2::log_abs_det() const { return log_det_; }

double ScaledMat2::gap_rate(long n) const {
    // log(s1/s2) = 2 log s1 - log|det|, with the determinant log carried
    // factor by factor so extreme gaps cannot underflow.
    const double g = 2.0 * log_norm2() - log_det_;
    return g / static_cast<double>(n);
}

namespace {

double lyap_plus_one_orbit(const CocycleSpec& c, const BaseSystem& base,
                           const BasePoint& x, long n) {
    ScaledMat2 prod;
    BasePoint p = x;
    for (long j = 0; j < n; ++j) {
        prod.push_left(c.at(p, j), j);
        p = base.step(p, Direction::forward);
    }
    return prod.log_norm2() / static_cast<double>(n);
}

} // namespace

double lyap_plus_direct(const CocycleSpec& c, const BaseSystem& base, const LyapOptions& opt) {
    if (opt.orbit_length < 1 || opt.samples < 1)
        throw std::invalid_argument("orbit length and sample count must be >= 1");
    const auto pts = base.sample_measure(opt.samples, opt.seed);
    std::vector<double> slot(pts.size());
    par::parallel_for(static_cast<int>(pts.size()), [&](int i) {
        slot[static_cast<std::size_t>(i)] =
            lyap_plus_one_orbit(c, base, pts[static_cast<std::size_t>(i)], opt.orbit_length);
    });
    return compensated_mean(slot);
}

double lyap_minus_direct(const CocycleSpec& c, const BaseSystem& base, const LyapOptions& opt) {
    return -lyap_plus_direct(inverse_cocycle(c, base), base.reversed(), opt);
}

double lyap_sum_via_det(const CocycleSpec& c, const BaseSystem& base, const LyapOptions& opt) {
    if (opt.orbit_length < 1 || opt.samples < 1)
        throw std::invalid_argument("orbit length and sample count must be >= 1");
    const auto pts = base.sample_measure(opt.samples, opt.seed);
    std::vector<double> slot(pts.size());
    par::parallel_for(static_cast<int>(pts.size()), [&](int i) {
        slot[static_cast<std::size_t>(i)] = birkhoff_average(
            base, pts[static_cast<std::size_t>(i)],
            [&](const BasePoint& p) { return std::log(std::abs(c.at(p).det())); },
            opt.orbit_length);
    });
    return compensated_mean(slot);
}

} // namespace cocycle
