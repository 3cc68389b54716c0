#include "cocycle/domination.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "cocycle/parallel.hpp"

namespace cocycle {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Dominant direction of M (top left-singular vector) as a slope, plus the
// relative spectral gap of M M^T so degenerate products can be rejected.
struct DominantDir {
    Slope slope;
    double rel_gap = 0.0;
};

DominantDir dominant_direction(const Mat2& m) {
    const double p = m.a * m.a + m.b * m.b;
    const double q = m.a * m.c + m.b * m.d;
    const double r = m.c * m.c + m.d * m.d;
    const double half_tr = 0.5 * (p + r);
    const double disc = std::hypot(0.5 * (p - r), q);
    const double mu = half_tr + disc;
    DominantDir out;
    out.rel_gap = mu > 0.0 ? (2.0 * disc) / mu : 0.0;
    // eigenvector of [[p,q],[q,r]] for mu: (q, mu-p) or (mu-r, q)
    const Vec2 v1{q, mu - p};
    const Vec2 v2{mu - r, q};
    const Vec2 v = v1.norm() >= v2.norm() ? v1 : v2;
    if (v.norm() == 0.0) {
        out.slope = Slope(0.0);
        out.rel_gap = 0.0;
        return out;
    }
    out.slope = Slope::of_direction(v);
    return out;
}

} // namespace

SectionValue strong_section(const CocycleSpec& c, const BaseSystem& base,
                            const BasePoint& x, const SectionOptions& opt) {
    if (opt.max_depth < 1) throw std::invalid_argument("section depth must be >= 1");
    SectionValue out;
    ScaledMat2 acc; // A^j(T^-j x), grown by right-multiplying deeper factors
    BasePoint p = x;
    Slope prev;
    bool have_prev = false;
    for (int j = 1; j <= opt.max_depth; ++j) {
        p = base.step(p, Direction::backward);
        acc.push_right(c.at(p, -j), -j);
        const DominantDir dir = dominant_direction(acc.matrix());
        out.depth_used = j;
        if (dir.rel_gap < 1e-9) {
            // isotropic product: direction not yet defined
            out.residual = 2.0;
            have_prev = false;
            continue;
        }
        if (have_prev) {
            out.residual = chordal(dir.slope, prev);
            if (out.residual <= opt.tol) {
                out.slope = dir.slope;
                out.converged = true;
                return out;
            }
        }
        prev = dir.slope;
        have_prev = true;
        out.slope = dir.slope;
    }
    return out;
}

SectionValue weak_section(const CocycleSpec& c, const BaseSystem& base,
                          const BasePoint& x, const SectionOptions& opt) {
    return strong_section(inverse_cocycle(c, base), base.reversed(), x, opt);
}

std::string to_string(Verdict v) {
    switch (v) {
    case Verdict::dominated: return "dominated";
    case Verdict::not_dominated: return "not_dominated";
    case Verdict::inconclusive: return "inconclusive";
    }
    return "?";
}

std::optional<RefuteWitness> refute(const CocycleSpec& c, const BaseSystem& base,
                                    const RefuteOptions& opt) {
    if (opt.n_probe < 2) throw std::invalid_argument("n_probe must be >= 2");
    const auto pts = base.sample_measure(opt.samples, opt.seed);
    std::vector<RefuteWitness> slot(pts.size());
    par::parallel_for(static_cast<int>(pts.size()), [&](int i) {
        const BasePoint& x = pts[static_cast<std::size_t>(i)];
        ScaledMat2 prod;
        BasePoint p = x;
        RefuteWitness best{x, 0, std::numeric_limits<double>::infinity()};
        for (long n = 1; n <= opt.n_probe; ++n) {
            prod.push_left(c.at(p, n - 1), n - 1);
            p = base.step(p, Direction::forward);
            if (n < 2) continue;
            const double g = prod.gap_rate(n);
            // earliest n within noise of the minimum makes the better witness
            if (g < best.gap_rate - 1e-12) best = {x, n, g};
        }
        slot[static_cast<std::size_t>(i)] = best;
    });
    RefuteWitness weakest = slot.front();
    for (const auto& w : slot)
        if (w.gap_rate < weakest.gap_rate) weakest = w;
    if (weakest.gap_rate < opt.gap_floor) return weakest;
    return std::nullopt;
}

DominationCertificate certify(const CocycleSpec& c, const BaseSystem& base,
                              const CertifyOptions& opt) {
    if (opt.l_max < 1) throw std::invalid_argument("l_max must be >= 1");
    DominationCertificate cert;
    const auto pts = base.sample_measure(opt.samples, opt.seed);
    cert.samples.resize(pts.size());

    par::parallel_for(static_cast<int>(pts.size()), [&](int i) {
        const BasePoint& x = pts[static_cast<std::size_t>(i)];
        const SectionValue f = strong_section(c, base, x, opt.section);
        const SectionValue e = weak_section(c, base, x, opt.section);
        cert.samples[static_cast<std::size_t>(i)] =
            SectionSample{x, f.slope, e.slope, std::max(f.residual, e.residual),
                          f.converged && e.converged};
    });

    const bool all_converged =
        std::all_of(cert.samples.begin(), cert.samples.end(),
                    [](const SectionSample& s) { return s.converged; });

    double min_margin = std::numeric_limits<double>::infinity();
    if (all_converged) {
        // per-sample running state: forward product, inverse product built
        // from generator inverses (stable at any l), transported section
        struct State {
            Mat2 fwd = Mat2::identity();     // A^l(x)
            Mat2 inv = Mat2::identity();     // A^-l(T^l x)
            Slope f_here;                    // F(T^l x)
            BasePoint p;
        };
        std::vector<State> st(pts.size());
        for (std::size_t i = 0; i < pts.size(); ++i) {
            st[i].f_here = cert.samples[i].strong;
            st[i].p = cert.samples[i].x;
        }
        for (int l = 1; l <= opt.l_max; ++l) {
            double worst = 0.0;
            for (std::size_t i = 0; i < pts.size(); ++i) {
                State& s = st[i];
                const Mat2 a = c.at(s.p, l - 1);
                s.fwd = a * s.fwd;
                s.inv = s.inv * a.inverse(c.det_floor, l - 1);
                s.f_here = mobius_act(a, s.f_here);
                s.p = base.step(s.p, Direction::forward);
                const double t1 = s.fwd.apply(cert.samples[i].weak.unit_vector()).norm();
                const double t2 = s.inv.apply(s.f_here.unit_vector()).norm();
                worst = std::max(worst, t1 * t2);
            }
            min_margin = std::min(min_margin, worst);
            if (worst < opt.boundary_lo) {
                cert.verdict = Verdict::dominated;
                cert.l = l;
                cert.margin = worst;
                return cert;
            }
        }
        cert.margin = min_margin;
        if (min_margin <= opt.boundary_hi) {
            cert.verdict = Verdict::inconclusive;
            cert.note = "margin in the boundary band";
            return cert;
        }
    } else {
        cert.note = "sections did not converge";
    }

    cert.witness = refute(c, base, opt.refutation);
    if (cert.witness) {
        cert.verdict = Verdict::not_dominated;
    } else {
        cert.verdict = Verdict::inconclusive;
        if (cert.note.empty()) cert.note = "no product bound and no refutation witness";
    }
    return cert;
}

std::vector<DsetRow> dset_sweep(const CocycleSpec& c, const BaseSystem& base,
                                const std::vector<double>& theta_grid,
                                const CertifyOptions& opt) {
    if (theta_grid.empty()) throw std::invalid_argument("theta grid must be nonempty");
    std::vector<DsetRow> rows(theta_grid.size());
    // certify is parallel inside; grid evaluated serially keeps memory flat
    for (std::size_t i = 0; i < theta_grid.size(); ++i) {
        const double theta = theta_grid[i];
        const DominationCertificate cert = certify(rotate_family(c, theta), base, opt);
        DsetRow row;
        row.theta = theta;
        row.verdict = cert.verdict;
        row.l = cert.l;
        row.margin = cert.margin;
        row.gap_rate = cert.witness ? cert.witness->gap_rate
                                    : std::numeric_limits<double>::quiet_NaN();
        rows[i] = row;
    }
    return rows;
}

double direction_angle(const Slope& s) {
    if (s.is_infinite()) return 0.5 * kPi;
    double a = std::atan(s.value());
    if (a < 0.0) a += kPi;
    return a;
}

double chordal_radius_to_angle(double r) { return std::asin(0.5 * r); }

namespace {
// signed circular difference of direction angles, in (-pi/2, pi/2]
double circ_diff(double a, double b) {
    double d = std::remainder(a - b, kPi);
    if (d <= -0.5 * kPi) d += kPi;
    return d;
}
double mod_pi(double a) {
    double m = std::fmod(a, kPi);
    if (m < 0.0) m += kPi;
    return m;
}
} // namespace

DirectionArc mobius_image_arc(const Mat2& m, const Slope& center, double chordal_radius) {
    const double phi = direction_angle(center);
    const double rho = chordal_radius_to_angle(chordal_radius);
    auto slope_at = [](double ang) {
        const double c = std::cos(ang);
        if (std::abs(c) < 1e-300) return Slope::infinity();
        return Slope(std::tan(ang));
    };
    const double e1 = direction_angle(mobius_act(m, slope_at(phi - rho)));
    const double e2 = direction_angle(mobius_act(m, slope_at(phi + rho)));
    const double cc = direction_angle(mobius_act(m, center));
    const double d21 = circ_diff(e2, e1);
    const double dc1 = circ_diff(cc, e1);
    DirectionArc arc;
    const bool on_short = (d21 >= 0.0) ? (dc1 >= 0.0 && dc1 <= d21) : (dc1 <= 0.0 && dc1 >= d21);
    if (on_short) {
        arc.center_angle = mod_pi(e1 + 0.5 * d21);
        arc.half_width = 0.5 * std::abs(d21);
    } else {
        arc.center_angle = mod_pi(e1 + 0.5 * d21 + 0.5 * kPi);
        arc.half_width = 0.5 * (kPi - std::abs(d21));
    }
    return arc;
}

bool arc_contains(const DirectionArc& outer, const DirectionArc& inner, double slack) {
    const double d = std::abs(circ_diff(outer.center_angle, inner.center_angle));
    return d + inner.half_width <= outer.half_width + slack;
}

} // namespace cocycle
