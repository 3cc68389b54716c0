#include "cocycle/theta_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "cocycle/errors.hpp"
#include "cocycle/parallel.hpp"
#include "cocycle/summation.hpp"

namespace cocycle {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
}

ThetaEntries entries_theta(const TriEntries& e, double theta) {
    const double c = std::cos(theta), s = std::sin(theta);
    return {e.lam * c, -e.lam * s, e.sig * c + e.eta * s, e.eta * c - e.sig * s};
}

namespace {

// u at the end of an entry segment, iterated from u = 0 at the deepest
// point. Works on the accumulated 2x2 product so intermediate passes
// through the infinity chart are harmless.
UValue u_from_entries(const std::vector<TriEntries>& ent, int origin, double theta,
                      const UThetaOptions& opt) {
    const double ct = std::cos(theta), st = std::sin(theta);
    UValue out;
    Mat2 p = Mat2::identity();
    double prev = 0.0;
    bool have_prev = false;
    const int depth = std::min(opt.max_depth, origin);
    for (int j = 1; j <= depth; ++j) {
        const TriEntries& e = ent[static_cast<std::size_t>(origin - j)];
        p = p * Mat2{e.lam * ct, -e.lam * st, e.sig * ct + e.eta * st, e.eta * ct - e.sig * st};
        const double sc = p.max_abs();
        if (sc == 0.0 || !p.finite()) return out;
        if (j % 32 == 0 || sc > 1e140) p = p * (1.0 / sc);
        out.depth_used = j;
        if (p.d == 0.0) {
            have_prev = false;
            continue;
        }
        const double u = p.b / p.d;
        out.value = u;
        if (!std::isfinite(u) || std::abs(u) > opt.u_max) {
            have_prev = false;
            continue;
        }
        if (have_prev) {
            out.residual = std::abs(u - prev);
            if (out.residual <= opt.tol) {
                out.converged = true;
                return out;
            }
        }
        prev = u;
        have_prev = true;
    }
    return out;
}

} // namespace

UValue u_theta(const TriangularCocycle& tri, const BasePoint& x, double theta,
               const UThetaOptions& opt) {
    if (opt.max_depth < 1) throw std::invalid_argument("u_theta depth must be >= 1");
    const OrbitBuffer orbit = make_orbit(tri.base(), x, opt.max_depth, 0);
    const auto ent = tri.along_orbit(orbit);
    return u_from_entries(ent, orbit.origin, theta, opt);
}

double t_theta(const TriEntries& e, double theta, double u_at_tx) {
    const ThetaEntries te = entries_theta(e, theta);
    const double den = te.a - te.c * u_at_tx;
    if (!(den > 0.0)) throw nonpositive_denominator_error(den, 0);
    return e.eta * e.lam / den;
}

namespace {

struct ThetaSample {
    double lam_theta = kNaN; // formula value on this orbit
    double l0 = kNaN;        // avg log eta
    double lm0 = kNaN;       // avg log lambda
    double residual = 2.0;
    bool ok = false;
    std::string note;
};

ThetaSample lyap_theta_one_orbit(const TriangularCocycle& tri, const BasePoint& x,
                                 double theta, long n, const UThetaOptions& uopt) {
    ThetaSample out;
    std::vector<TriEntries> ent;
    OrbitBuffer orbit;
    try {
        orbit = make_orbit(tri.base(), x, uopt.max_depth, static_cast<int>(n));
        ent = tri.along_orbit(orbit);
    } catch (const data_error& e) {
        out.note = e.what();
        return out;
    }

    const UValue u0 = u_from_entries(ent, orbit.origin, theta, uopt);
    out.residual = u0.residual;
    if (!u0.converged) {
        out.note = "u-section did not converge";
        return out;
    }

    const double ct = std::cos(theta), st = std::sin(theta);
    NeumaierSum s_eta, s_lam, s_den;
    double u = u0.value;
    for (long j = 0; j < n; ++j) {
        const TriEntries& e = ent[static_cast<std::size_t>(orbit.origin + j)];
        if (!(e.lam > 0.0)) {
            out.note = "lambda <= 0 along the orbit";
            return out;
        }
        const double a = e.lam * ct, b = -e.lam * st;
        const double c = e.sig * ct + e.eta * st, d = e.eta * ct - e.sig * st;
        const double q = c * u + d;
        if (q == 0.0) {
            out.note = "u-update denominator vanished";
            return out;
        }
        const double u_next = (a * u + b) / q;
        if (!std::isfinite(u_next) || std::abs(u_next) > uopt.u_max) {
            out.note = "u-section left the affine chart";
            return out;
        }
        const double den = a - c * u_next;
        if (!(den > 0.0)) {
            out.note = "nonpositive stretch denominator (theta outside window)";
            return out;
        }
        s_eta.add(std::log(e.eta));
        s_lam.add(std::log(e.lam));
        s_den.add(std::log(den));
        u = u_next;
    }
    const double inv_n = 1.0 / static_cast<double>(n);
    out.l0 = s_eta.value() * inv_n;
    out.lm0 = s_lam.value() * inv_n;
    out.lam_theta = out.l0 + out.lm0 - s_den.value() * inv_n;
    out.ok = true;
    return out;
}

} // namespace

LyapThetaResult lyap_plus_theta(const TriangularCocycle& tri, double theta,
                                const LyapThetaOptions& opt) {
    if (opt.orbit_length < 1 || opt.samples < 1)
        throw std::invalid_argument("orbit length and sample count must be >= 1");
    const auto pts = tri.base().sample_measure(opt.samples, opt.seed);
    std::vector<ThetaSample> slot(pts.size());
    par::parallel_for(static_cast<int>(pts.size()), [&](int i) {
        slot[static_cast<std::size_t>(i)] = lyap_theta_one_orbit(
            tri, pts[static_cast<std::size_t>(i)], theta, opt.orbit_length, opt.u);
    });
    LyapThetaResult res;
    std::vector<double> v_theta, v0, vm0;
    v_theta.reserve(slot.size());
    res.ok = true;
    for (const ThetaSample& s : slot) {
        res.max_residual = std::max(res.max_residual, s.residual);
        if (!s.ok) {
            res.ok = false;
            if (res.note.empty()) res.note = s.note;
            continue;
        }
        v_theta.push_back(s.lam_theta);
        v0.push_back(s.l0);
        vm0.push_back(s.lm0);
    }
    if (v_theta.empty()) {
        res.ok = false;
        res.lambda_plus = res.lambda_plus_0 = res.lambda_minus_0 = kNaN;
        return res;
    }
    res.lambda_plus = compensated_mean(v_theta);
    res.lambda_plus_0 = compensated_mean(v0);
    res.lambda_minus_0 = compensated_mean(vm0);
    return res;
}

double lyap_plus_direct_tri(const TriangularCocycle& tri, double theta,
                            const LyapThetaOptions& opt) {
    if (opt.orbit_length < 1 || opt.samples < 1)
        throw std::invalid_argument("orbit length and sample count must be >= 1");
    const Mat2 rot = rotation(theta);
    const auto pts = tri.base().sample_measure(opt.samples, opt.seed);
    std::vector<double> slot(pts.size());
    par::parallel_for(static_cast<int>(pts.size()), [&](int i) {
        const OrbitBuffer orbit =
            make_orbit(tri.base(), pts[static_cast<std::size_t>(i)], 0,
                       static_cast<int>(opt.orbit_length) - 1);
        const auto ent = tri.along_orbit(orbit);
        ScaledMat2 prod;
        for (long j = 0; j < opt.orbit_length; ++j) {
            const TriEntries& e = ent[static_cast<std::size_t>(j)];
            prod.push_left(Mat2{e.lam, 0.0, e.sig, e.eta} * rot, j);
        }
        slot[static_cast<std::size_t>(i)] =
            prod.log_norm2() / static_cast<double>(opt.orbit_length);
    });
    return compensated_mean(slot);
}

int series_depth_for(double tau, double eps, int cap) {
    if (!(tau > 0.0 && tau < 1.0)) throw std::invalid_argument("tau must lie in (0,1)");
    double tail = tau * tau / (1.0 - tau); // K = 1
    int k = 1;
    while (k < cap && tail >= eps) {
        tail *= tau;
        ++k;
    }
    return k;
}

double udot0(const TriangularCocycle& tri, const BasePoint& x, int K) {
    if (K < 1) throw std::invalid_argument("series depth K must be >= 1");
    const OrbitBuffer orbit = make_orbit(tri.base(), x, K, 0);
    const auto ent = tri.along_orbit(orbit);
    double ud = 0.0; // value at T^-K x
    for (int j = K; j >= 1; --j) {
        const TriEntries& e = ent[static_cast<std::size_t>(orbit.origin - j)];
        ud = (e.lam / e.eta) * (ud - 1.0);
    }
    return ud;
}

double uddot0(const TriangularCocycle& tri, const BasePoint& x, int K) {
    if (K < 1) throw std::invalid_argument("series depth K must be >= 1");
    // udot needs its own K-deep tail, so work from depth 2K
    const OrbitBuffer orbit = make_orbit(tri.base(), x, 2 * K, 0);
    const auto ent = tri.along_orbit(orbit);
    double ud = 0.0;  // at T^-2K x
    double udd = 0.0; // seeded at T^-K x
    for (int j = 2 * K; j >= 1; --j) {
        const TriEntries& e = ent[static_cast<std::size_t>(orbit.origin - j)];
        if (j <= K) {
            const double alpha = 2.0 * (ud - 1.0) * (ud - 1.0) / e.eta;
            udd = (e.lam / e.eta) * (udd - alpha * e.sig);
        }
        ud = (e.lam / e.eta) * (ud - 1.0);
    }
    return udd;
}

namespace {

struct DerivSample {
    double d = kNaN, dd = kNaN;
    double sup_alpha_sigma = 0.0;
    bool ok = false;
    std::string note;
};

DerivSample derivatives_one_orbit(const TriangularCocycle& tri, const BasePoint& x, long n,
                                  int K) {
    DerivSample out;
    std::vector<TriEntries> ent;
    OrbitBuffer orbit;
    try {
        orbit = make_orbit(tri.base(), x, 2 * K, static_cast<int>(n));
        ent = tri.along_orbit(orbit);
    } catch (const data_error& e) {
        out.note = e.what();
        return out;
    }
    double ud = 0.0;  // running udot, seeded at depth 2K
    double udd = 0.0; // running uddot, seeded at depth K
    NeumaierSum s_d, s_dd;
    for (int i = -2 * K; i < static_cast<int>(n); ++i) {
        const TriEntries& e = ent[static_cast<std::size_t>(orbit.origin + i)];
        if (!(e.lam > 0.0)) {
            out.note = "lambda <= 0 along the orbit";
            return out;
        }
        const double ratio = e.lam / e.eta;
        const double alpha = 2.0 * (ud - 1.0) * (ud - 1.0) / e.eta;
        const double ud_next = ratio * (ud - 1.0);
        const double udd_next = i >= -K ? ratio * (udd - alpha * e.sig) : 0.0;
        if (i >= 0) {
            out.sup_alpha_sigma = std::max(out.sup_alpha_sigma, std::abs(alpha * e.sig));
            const double su = e.sig * ud_next / e.lam;
            s_d.add(su);
            s_dd.add(2.0 * e.eta * ud_next / e.lam + 1.0 + e.sig * udd_next / e.lam + su * su);
        }
        ud = ud_next;
        udd = udd_next;
    }
    out.d = s_d.value() / static_cast<double>(n);
    out.dd = s_dd.value() / static_cast<double>(n);
    out.ok = true;
    return out;
}

} // namespace

DerivativeData derivatives_at_zero(const TriangularCocycle& tri, const LyapThetaOptions& opt,
                                   int K) {
    DerivativeData data;
    data.K = K > 0 ? K : series_depth_for(tri.tau(), 1e-8, 200);
    const auto pts = tri.base().sample_measure(opt.samples, opt.seed);
    std::vector<DerivSample> slot(pts.size());
    par::parallel_for(static_cast<int>(pts.size()), [&](int i) {
        slot[static_cast<std::size_t>(i)] = derivatives_one_orbit(
            tri, pts[static_cast<std::size_t>(i)], opt.orbit_length, data.K);
    });
    std::vector<double> vd, vdd;
    for (const DerivSample& s : slot) {
        if (!s.ok) throw data_error(std::string("derivative sample failed: ") + s.note);
        vd.push_back(s.d);
        vdd.push_back(s.dd);
        data.sup_alpha_sigma = std::max(data.sup_alpha_sigma, s.sup_alpha_sigma);
    }
    data.dlambda = compensated_mean(vd);
    data.ddlambda = compensated_mean(vdd);
    const double tau = tri.tau();
    data.udot_tail_bound = std::pow(tau, data.K + 1) / (1.0 - tau);
    data.uddot_tail_bound = data.udot_tail_bound * data.sup_alpha_sigma;
    data.concave = data.ddlambda < 0.0;
    return data;
}

HyperbolicityReport hyperbolicity_interval(const TriangularCocycle& tri,
                                           const std::vector<double>& theta_grid,
                                           const LyapThetaOptions& opt, double drop_tol) {
    std::vector<double> grid = theta_grid;
    std::sort(grid.begin(), grid.end());
    if (grid.empty() || grid.front() >= 0.0 || grid.back() <= 0.0)
        throw std::invalid_argument("theta grid must span both signs of zero");

    HyperbolicityReport rep;
    const DerivativeData deriv = derivatives_at_zero(tri, opt);
    rep.dlambda = deriv.dlambda;

    const LyapThetaResult at0 = lyap_plus_theta(tri, 0.0, opt);
    if (!at0.ok) {
        rep.note = "theta = 0 evaluation failed: " + at0.note;
        return rep;
    }
    rep.lambda_plus_0 = at0.lambda_plus;
    rep.lambda_minus_0 = at0.lambda_minus_0;
    const double lam_sum = at0.lambda_plus_0 + at0.lambda_minus_0;

    const double side_tol = 1e-6;
    const bool pos_side = rep.dlambda < side_tol;  // decreasing for theta > 0
    const bool neg_side = rep.dlambda > -side_tol; // decreasing for theta < 0

    auto witness_at = [&](double theta, HyperbolicityWitness& w) {
        const LyapThetaResult r = lyap_plus_theta(tri, theta, opt);
        if (!r.ok) return false;
        w = {theta, r.lambda_plus, lam_sum - r.lambda_plus};
        return w.lambda_plus < rep.lambda_plus_0 - drop_tol &&
               w.lambda_minus > rep.lambda_minus_0 + drop_tol;
    };

    // contiguous runs adjacent to zero on each allowed side; grid points
    // within rounding noise of zero are treated as zero itself
    const double zero_eps = 1e-9;
    if (pos_side) {
        for (auto it = std::upper_bound(grid.begin(), grid.end(), 0.0); it != grid.end(); ++it) {
            if (*it <= zero_eps) continue;
            HyperbolicityWitness w;
            if (!witness_at(*it, w)) break;
            rep.witnesses.push_back(w);
            rep.hi = *it;
            rep.found = true;
        }
    }
    if (neg_side) {
        auto it = std::lower_bound(grid.begin(), grid.end(), 0.0);
        while (it != grid.begin()) {
            --it;
            if (*it >= -zero_eps) continue;
            HyperbolicityWitness w;
            if (!witness_at(*it, w)) break;
            rep.witnesses.push_back(w);
            rep.lo = *it;
            rep.found = true;
        }
    }
    if (!rep.found) rep.note = "no witnessing grid points adjacent to zero (grid too coarse?)";
    std::sort(rep.witnesses.begin(), rep.witnesses.end(),
              [](const HyperbolicityWitness& a, const HyperbolicityWitness& b) {
                  return a.theta < b.theta;
              });
    return rep;
}

std::vector<SweepRow> sweep(const TriangularCocycle& tri, const std::vector<double>& theta_grid,
                            const SweepOptions& opt) {
    if (theta_grid.empty()) throw std::invalid_argument("theta grid must be nonempty");
    std::vector<double> grid = theta_grid;
    std::sort(grid.begin(), grid.end());

    // series second derivative at 0; a non-negative value is an anomaly
    bool dd0_ok = true;
    std::string dd0_note;
    try {
        const DerivativeData deriv = derivatives_at_zero(tri, opt.lyap);
        if (!deriv.concave) {
            dd0_ok = false;
            dd0_note = "second derivative at zero is non-negative";
        }
    } catch (const std::exception& e) {
        dd0_ok = false;
        dd0_note = std::string("derivatives at zero failed: ") + e.what();
    }

    std::vector<SweepRow> rows(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        SweepRow row;
        row.theta = grid[i];
        row.lambda_plus_formula = kNaN;
        row.lambda_plus_direct = kNaN;
        row.lambda_minus = kNaN;
        row.residual = kNaN;
        row.dd_estimate = kNaN;

        const CocycleSpec target = tri.is_sectioned()
                                       ? rotate_family(*tri.underlying_cocycle(), row.theta)
                                       : rotate_family(tri.as_cocycle(), row.theta);
        const DominationCertificate cert = certify(target, tri.base(), opt.certify);
        row.verdict = cert.verdict;
        if (cert.verdict == Verdict::dominated) {
            const LyapThetaResult r = lyap_plus_theta(tri, row.theta, opt.lyap);
            row.residual = r.max_residual;
            if (!r.ok) {
                row.anomaly = true;
                row.note = "formula failed inside certified window: " + r.note;
            } else {
                const double direct = lyap_plus_direct_tri(tri, row.theta, opt.lyap);
                if (std::abs(r.lambda_plus - direct) > opt.formula_vs_direct_tol) {
                    row.anomaly = true;
                    row.note = "formula/direct mismatch beyond tolerance";
                    row.lambda_plus_direct = direct;
                } else {
                    row.lambda_plus_formula = r.lambda_plus;
                    row.lambda_plus_direct = direct;
                    row.lambda_minus = r.lambda_plus_0 + r.lambda_minus_0 - r.lambda_plus;
                }
            }
            if (!dd0_ok && std::abs(row.theta) < 1e-12) {
                row.anomaly = true;
                row.note = dd0_note;
                row.lambda_plus_formula = kNaN;
                row.lambda_minus = kNaN;
            }
        }
        rows[i] = row;
    }

    // centered second differences where three consecutive uniform rows exist
    for (std::size_t i = 1; i + 1 < rows.size(); ++i) {
        const double h1 = rows[i].theta - rows[i - 1].theta;
        const double h2 = rows[i + 1].theta - rows[i].theta;
        if (std::abs(h1 - h2) > 1e-9) continue;
        const double f0 = rows[i - 1].lambda_plus_formula;
        const double f1 = rows[i].lambda_plus_formula;
        const double f2 = rows[i + 1].lambda_plus_formula;
        if (std::isfinite(f0) && std::isfinite(f1) && std::isfinite(f2))
            rows[i].dd_estimate = (f0 - 2.0 * f1 + f2) / (h1 * h1);
    }
    return rows;
}

} // namespace cocycle
