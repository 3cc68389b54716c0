#include "cocycle/reference.hpp"

#include <cmath>

#include "cocycle/errors.hpp"

namespace cocycle::ref {

double lyap_plus_direct(const CocycleSpec& c, const BaseSystem& base, const LyapOptions& opt) {
    double acc = 0.0;
    for (const BasePoint& x : base.sample_measure(opt.samples, opt.seed)) {
        Mat2 prod = Mat2::identity();
        double log_scale = 0.0;
        BasePoint p = x;
        for (long j = 0; j < opt.orbit_length; ++j) {
            prod = c.at(p, j) * prod;
            p = base.step(p, Direction::forward);
            const double s = prod.max_abs();
            if (s > 1e100 || s < 1e-100) {
                prod = prod * (1.0 / s);
                log_scale += std::log(s);
            }
        }
        acc += (std::log(norm2(prod)) + log_scale) / static_cast<double>(opt.orbit_length);
    }
    return acc / static_cast<double>(opt.samples);
}

double lyap_sum_via_det(const CocycleSpec& c, const BaseSystem& base, const LyapOptions& opt) {
    double acc = 0.0;
    for (const BasePoint& x : base.sample_measure(opt.samples, opt.seed)) {
        double sum = 0.0;
        BasePoint p = x;
        for (long j = 0; j < opt.orbit_length; ++j) {
            sum += std::log(std::abs(c.at(p, j).det()));
            p = base.step(p, Direction::forward);
        }
        acc += sum / static_cast<double>(opt.orbit_length);
    }
    return acc / static_cast<double>(opt.samples);
}

double lyap_plus_theta(const TriangularCocycle& tri, double theta, const LyapThetaOptions& opt) {
    const double ct = std::cos(theta), st = std::sin(theta);
    double acc = 0.0;
    for (const BasePoint& x : tri.base().sample_measure(opt.samples, opt.seed)) {
        const OrbitBuffer orbit = make_orbit(tri.base(), x, opt.u.max_depth,
                                             static_cast<int>(opt.orbit_length));
        const auto ent = tri.along_orbit(orbit);
        // plain pointwise warmup from u = 0 at the deepest point
        double u = 0.0;
        for (int j = opt.u.max_depth; j >= 1; --j) {
            const TriEntries& e = ent[static_cast<std::size_t>(orbit.origin - j)];
            u = (e.lam * ct * u - e.lam * st) /
                ((e.sig * ct + e.eta * st) * u + e.eta * ct - e.sig * st);
        }
        double sum = 0.0;
        for (long j = 0; j < opt.orbit_length; ++j) {
            const TriEntries& e = ent[static_cast<std::size_t>(orbit.origin + j)];
            const double a = e.lam * ct, b = -e.lam * st;
            const double cc = e.sig * ct + e.eta * st, d = e.eta * ct - e.sig * st;
            const double u_next = (a * u + b) / (cc * u + d);
            const double den = a - cc * u_next;
            if (!(den > 0.0)) throw nonpositive_denominator_error(den, j);
            sum += std::log(e.eta) + std::log(e.lam) - std::log(den);
            u = u_next;
        }
        acc += sum / static_cast<double>(opt.orbit_length);
    }
    return acc / static_cast<double>(opt.samples);
}

} // namespace cocycle::ref
