#pragma once

#include <string>
#include <vector>

#include "cocycle/triangular.hpp"

namespace cocycle {

// Entries of (H R_theta)(x): a = lam cos t, b = -lam sin t,
// c = sig cos t + eta sin t, d = eta cos t - sig sin t.
struct ThetaEntries {
    double a = 0.0, b = 0.0, c = 0.0, d = 0.0;
};

ThetaEntries entries_theta(const TriEntries& e, double theta);

struct UThetaOptions {
    int max_depth = 400;  // backward iteration depth M
    double tol = 1e-13;   // increment threshold
    double u_max = 1e6;   // beyond this the section left the affine chart
};

struct UValue {
    double value = 0.0;
    double residual = 2.0;
    bool converged = false;
    int depth_used = 0;
};

// Slope coordinate of F_theta(x) = span((u_theta(x), 1)): the graph-transform
// update iterated from u = 0 at T^-M x forward to x.
UValue u_theta(const TriangularCocycle& tri, const BasePoint& x, double theta,
               const UThetaOptions& opt = {});

// Stretch factor along F_theta: eta(x) lam(x) / (a_theta(x) - c_theta(x) u(Tx)).
// Throws nonpositive_denominator_error when the denominator is not positive.
double t_theta(const TriEntries& e, double theta, double u_at_tx);

struct LyapThetaOptions {
    long orbit_length = 10000;
    int samples = 64;
    std::uint64_t seed = 1;
    UThetaOptions u{};
};

struct LyapThetaResult {
    double lambda_plus = 0.0;    // formula value at theta
    double lambda_plus_0 = 0.0;  // integral of log eta
    double lambda_minus_0 = 0.0; // integral of log lambda
    double max_residual = 0.0;   // worst u-section residual across samples
    bool ok = false;
    std::string note;
};

// Implicit formula: lambda^+(theta) = lambda^+(0) + lambda^-(0)
//                   - avg log(a_theta - c_theta * u_theta o T).
LyapThetaResult lyap_plus_theta(const TriangularCocycle& tri, double theta,
                                const LyapThetaOptions& opt = {});

// Direct Birkhoff estimator of lambda^+(H R_theta) on the same orbits
// (renormalized products of the entry matrices).
double lyap_plus_direct_tri(const TriangularCocycle& tri, double theta,
                            const LyapThetaOptions& opt = {});

// Smallest K with tau^(K+1) / (1 - tau) < eps, capped.
int series_depth_for(double tau, double eps, int cap = 200);

// K-term partial sums of the derivative series at theta = 0, evaluated by
// the backward recurrences from the deepest term.
double udot0(const TriangularCocycle& tri, const BasePoint& x, int K);
double uddot0(const TriangularCocycle& tri, const BasePoint& x, int K);

struct DerivativeData {
    double dlambda = 0.0;          // d lambda^+ / d theta at 0
    double ddlambda = 0.0;         // second derivative at 0
    int K = 0;                     // series truncation used
    double udot_tail_bound = 0.0;  // tau^(K+1)/(1-tau)
    double uddot_tail_bound = 0.0; // scaled by sup |alpha sigma|
    double sup_alpha_sigma = 0.0;
    bool concave = false; // ddlambda < 0
};

// Sample averages of the first/second derivative integrands; K < 0 picks
// the depth adaptively from tau (tail below 1e-8, capped at 200).
DerivativeData derivatives_at_zero(const TriangularCocycle& tri,
                                   const LyapThetaOptions& opt = {}, int K = -1);

struct HyperbolicityWitness {
    double theta = 0.0;
    double lambda_plus = 0.0;
    double lambda_minus = 0.0;
};

struct HyperbolicityReport {
    bool found = false;
    double lo = 0.0, hi = 0.0; // interval with 0 on its boundary or interior
    double dlambda = 0.0;
    double lambda_plus_0 = 0.0;
    double lambda_minus_0 = 0.0;
    std::vector<HyperbolicityWitness> witnesses;
    std::string note;
};

// Grid search for the interval of Corollary-C type drops: lambda^+(theta) <
// lambda^+(0) and lambda^-(theta) > lambda^-(0), on the side(s) selected by
// the sign of dlambda0.
HyperbolicityReport hyperbolicity_interval(const TriangularCocycle& tri,
                                           const std::vector<double>& theta_grid,
                                           const LyapThetaOptions& opt = {},
                                           double drop_tol = 1e-6);

struct SweepRow {
    double theta = 0.0;
    double lambda_plus_formula = 0.0;
    double lambda_plus_direct = 0.0;
    double lambda_minus = 0.0;
    Verdict verdict = Verdict::inconclusive;
    double residual = 0.0;
    double dd_estimate = 0.0; // centered second difference, NaN at the edges
    bool anomaly = false;
    std::string note;
};

struct SweepOptions {
    LyapThetaOptions lyap{};
    CertifyOptions certify{};
    double formula_vs_direct_tol = 1e-3;
};

// Per-theta formula + direct estimators with domination verdicts. Rows
// outside the certified window carry no formula value; disagreements and a
// non-negative second derivative are flagged as anomalies, never emitted
// as plain values.
std::vector<SweepRow> sweep(const TriangularCocycle& tri, const std::vector<double>& theta_grid,
                            const SweepOptions& opt = {});

} // namespace cocycle
