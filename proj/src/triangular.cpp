#include "cocycle/triangular.hpp"

#include <cmath>
#include <stdexcept>

#include "cocycle/errors.hpp"
#include "cocycle/summation.hpp"

namespace cocycle {

Frame frame_of(const Vec2& u) {
    Frame f;
    f.u = u;
    f.B = Mat2{u.y, u.x, -u.x, u.y}; // columns (u2,-u1) and (u1,u2)
    return f;
}

TriangularizePoint triangularize_point(const Mat2& a, const Vec2& u) {
    const double un = u.norm();
    if (!(std::abs(un - 1.0) < 1e-9)) throw data_error("frame direction is not unit length");
    const Frame bu = frame_of(u);
    const Vec2 au = a.apply(u);
    const double eta = au.norm();
    if (!(eta > 0.0)) throw non_invertible_error(a.det(), 0);
    const Vec2 v{au.x / eta, au.y / eta};
    const Frame dv = frame_of(v);
    Mat2 h = dv.B.transpose() * a * bu.B;
    const double scale = std::max(1.0, a.max_abs());
    if (std::abs(h.b) > 1e-9 * scale)
        throw data_error("triangularization residue too large (wrong section?)");
    h.b = 0.0;
    return {h, v};
}

TriangularCocycle TriangularCocycle::from_functions(const BaseSystem& base, EntryFn lam,
                                                    EntryFn sig, EntryFn eta, double tau) {
    TriangularCocycle t;
    t.base_ = base;
    t.lam_ = std::move(lam);
    t.sig_ = std::move(sig);
    t.eta_ = std::move(eta);
    if (tau > 0.0) {
        t.tau_ = tau;
    } else {
        // sampled sup of lambda/eta plus headroom
        double worst = 0.0;
        for (const BasePoint& p : base.sample_measure(4096, 0x7a0b5u)) {
            const TriEntries e = t.at(p);
            if (!(e.eta > std::abs(e.lam)))
                throw data_error("eta <= |lambda| at a sampled point");
            worst = std::max(worst, std::abs(e.lam) / e.eta);
        }
        t.tau_ = std::min(worst + 0.01, 0.999999);
    }
    if (!(t.tau_ > 0.0 && t.tau_ < 1.0)) throw data_error("tau must lie in (0,1)");
    return t;
}

TriangularCocycle TriangularCocycle::constant(const BaseSystem& base, double lam, double sig,
                                              double eta, double tau_headroom) {
    if (!(eta > std::abs(lam))) throw data_error("constant entries need eta > |lambda|");
    return from_functions(
        base, [lam](const BasePoint&) { return lam; }, [sig](const BasePoint&) { return sig; },
        [eta](const BasePoint&) { return eta; },
        std::min(std::abs(lam) / eta + tau_headroom, 0.999999));
}

TriEntries TriangularCocycle::entries_from_section(const BasePoint& x) const {
    const SectionValue s = strong_section(underlying_, base_, x, section_opt_);
    if (!s.converged) throw data_error("strong section did not converge");
    const TriangularizePoint tp = triangularize_point(underlying_.at(x), s.slope.unit_vector());
    return {tp.H.a, tp.H.c, tp.H.d};
}

TriEntries TriangularCocycle::at(const BasePoint& x) const {
    TriEntries e;
    if (sectioned_) {
        e = entries_from_section(x);
    } else {
        e = {lam_(x), sig_(x), eta_(x)};
    }
    if (!(e.eta > 0.0)) throw data_error("eta(x) must be positive");
    if (underlying_.orientation_preserving && sectioned_ && !(e.lam > 0.0))
        throw data_error("lambda(x) <= 0 on an orientation-preserving cocycle");
    return e;
}

std::vector<TriEntries> TriangularCocycle::along_orbit(const OrbitBuffer& orbit) const {
    std::vector<TriEntries> out(orbit.points.size());
    if (!sectioned_) {
        for (std::size_t j = 0; j < orbit.points.size(); ++j) out[j] = at(orbit.points[j]);
        return out;
    }
    // solve once at the start of the segment, transport the section along it
    const SectionValue s0 = strong_section(underlying_, base_, orbit.points.front(), section_opt_);
    if (!s0.converged) throw data_error("strong section did not converge");
    Slope z = s0.slope;
    for (std::size_t j = 0; j < orbit.points.size(); ++j) {
        const Mat2 a = underlying_.at(orbit.points[j]);
        const TriangularizePoint tp = triangularize_point(a, z.unit_vector());
        out[j] = {tp.H.a, tp.H.c, tp.H.d};
        if (!(out[j].eta > 0.0)) throw data_error("eta(x) must be positive");
        if (underlying_.orientation_preserving && !(out[j].lam > 0.0))
            throw data_error("lambda(x) <= 0 on an orientation-preserving cocycle");
        z = mobius_act(a, z);
    }
    return out;
}

CocycleSpec TriangularCocycle::as_cocycle() const {
    CocycleSpec c;
    const TriangularCocycle self = *this;
    c.generator = [self](const BasePoint& p) {
        const TriEntries e = self.at(p);
        return Mat2{e.lam, 0.0, e.sig, e.eta};
    };
    c.orientation_preserving = false; // lambda may be negative for entry-function inputs
    return c;
}

TriangularCocycle build_triangular(const CocycleSpec& c, const BaseSystem& base,
                                   const SectionOptions& sopt, int tau_samples,
                                   std::uint64_t seed, double tau_headroom) {
    TriangularCocycle t;
    t.base_ = base;
    t.sectioned_ = true;
    t.underlying_ = c;
    t.section_opt_ = sopt;

    double worst = 0.0;
    for (const BasePoint& p : base.sample_measure(tau_samples, seed)) {
        const TriEntries e = t.at(p);
        if (!(e.eta > std::abs(e.lam)))
            throw data_error("eta <= |lambda| at a sampled point (wrong section?)");
        worst = std::max(worst, std::abs(e.lam) / e.eta);
    }
    t.tau_ = std::min(worst + tau_headroom, 0.999999);
    return t;
}

double check_norm_equality(const CocycleSpec& c, const TriangularCocycle& tri,
                           const BaseSystem& base, const BasePoint& x, int n_max) {
    if (n_max < 1) throw std::invalid_argument("n_max must be >= 1");
    const OrbitBuffer orbit = make_orbit(base, x, 0, n_max - 1);
    const std::vector<TriEntries> h = tri.along_orbit(orbit);
    ScaledMat2 pa, ph;
    double worst = 0.0;
    for (int n = 1; n <= n_max; ++n) {
        const std::size_t j = static_cast<std::size_t>(n - 1);
        pa.push_left(c.at(orbit.points[j], n - 1), n - 1);
        ph.push_left(Mat2{h[j].lam, 0.0, h[j].sig, h[j].eta}, n - 1);
        const double rel = std::abs(std::expm1(ph.log_norm2() - pa.log_norm2()));
        worst = std::max(worst, rel);
    }
    return worst;
}

} // namespace cocycle
