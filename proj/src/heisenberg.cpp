#include "cocycle/heisenberg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cocycle/errors.hpp"

namespace cocycle {

HeisenbergModel heisenberg_model() {
    HeisenbergModel m;
    const double s5 = std::sqrt(5.0);
    m.lam_u = 0.5 * (3.0 + s5);
    m.lam_s = 0.5 * (3.0 - s5);
    m.v_u = Vec2{1.0, m.lam_u - 2.0}.normalized(); // B v = lam_u v, entries > 0
    m.base = BaseSystem::torus_automorphism(m.b);
    return m;
}

CocycleSpec ecu_cocycle(const HeisenbergModel& model) {
    CocycleSpec c;
    const double lu = model.lam_u;
    const Vec2 q = model.v_u;
    c.generator = [lu, q](const BasePoint& p) {
        const double sig = lu * (wrap01(p.x) * q.x + wrap01(p.y) * q.y);
        return Mat2{lu, 0.0, sig, 1.0};
    };
    c.orientation_preserving = true; // det = lam_u > 0
    return c;
}

CocycleSpec family_theta(const HeisenbergModel& model, double theta) {
    return rotate_family(ecu_cocycle(model), theta);
}

CorollaryReport corollary_main_report(const HeisenbergModel& model,
                                      const std::vector<double>& theta_grid,
                                      const CorollaryOptions& opt) {
    constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
    CorollaryReport rep;
    rep.threshold = opt.threshold;

    const CocycleSpec ecu = ecu_cocycle(model);
    const TriangularCocycle tri = build_triangular(ecu, model.base, opt.certify.section,
                                                   opt.certify.samples, opt.certify.seed);
    const double log_lu = std::log(model.lam_u); // theta-independent log|det|

    const LyapThetaResult at0 = lyap_plus_theta(tri, 0.0, opt.lyap);
    if (!at0.ok) {
        rep.note = "theta = 0 evaluation failed: " + at0.note;
        return rep;
    }
    rep.lambda_plus_0 = at0.lambda_plus;
    rep.lambda_minus_0 = log_lu - at0.lambda_plus;
    rep.ddlambda0 = derivatives_at_zero(tri, opt.lyap).ddlambda;

    std::vector<double> grid = theta_grid;
    std::sort(grid.begin(), grid.end());
    rep.rows.reserve(grid.size());
    for (const double theta : grid) {
        CorollaryRow row;
        row.theta = theta;
        row.lambda_plus = kNaN;
        row.lambda_minus = kNaN;
        const DominationCertificate cert =
            certify(family_theta(model, theta), model.base, opt.certify);
        row.verdict = cert.verdict;
        if (cert.verdict == Verdict::dominated) {
            const LyapThetaResult r = lyap_plus_theta(tri, theta, opt.lyap);
            if (r.ok) {
                row.lambda_plus = r.lambda_plus;
                row.lambda_minus = log_lu - r.lambda_plus;
                row.witness = row.lambda_minus > opt.threshold &&
                              row.lambda_plus < rep.lambda_plus_0 - opt.threshold;
            }
        }
        rep.rows.push_back(row);
    }

    // contiguous run of witnesses whose endpoint is nearest zero
    double best = std::numeric_limits<double>::infinity();
    std::size_t pick = rep.rows.size();
    for (std::size_t i = 0; i < rep.rows.size(); ++i) {
        if (rep.rows[i].witness && std::abs(rep.rows[i].theta) < best) {
            best = std::abs(rep.rows[i].theta);
            pick = i;
        }
    }
    if (pick < rep.rows.size()) {
        std::size_t lo = pick, hi = pick;
        while (lo > 0 && rep.rows[lo - 1].witness) --lo;
        while (hi + 1 < rep.rows.size() && rep.rows[hi + 1].witness) ++hi;
        rep.found = true;
        rep.lo = rep.rows[lo].theta;
        rep.hi = rep.rows[hi].theta;
    } else {
        rep.note = "no witnessing grid points (grid or window too small)";
    }
    return rep;
}

} // namespace cocycle
