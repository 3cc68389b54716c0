#pragma once

#include "cocycle/theta_analysis.hpp"

namespace cocycle {

// The torus factor of the Heisenberg nilmanifold automorphism: the integer
// matrix [[2,1],[1,1]], its leading eigendata, and the induced base system.
struct HeisenbergModel {
    IMat2 b{2, 1, 1, 1};
    double lam_u = 0.0; // (3 + sqrt 5) / 2
    double lam_s = 0.0; // (3 - sqrt 5) / 2, lam_u * lam_s = 1
    Vec2 v_u{};         // unit leading eigenvector, both entries positive
    BaseSystem base{BaseSystem::circle_rotation(0.0)};
};

HeisenbergModel heisenberg_model();

// Derivative cocycle on the center-unstable plane in the frame
// {unit unstable vector, center vector}: x -> [[lam_u, 0], [lam_u (x . v_u), 1]]
// with x the canonical representative in [0,1)^2.
CocycleSpec ecu_cocycle(const HeisenbergModel& model);

// The rotated family: ecu composed with R_theta on the right.
CocycleSpec family_theta(const HeisenbergModel& model, double theta);

struct CorollaryRow {
    double theta = 0.0;
    Verdict verdict = Verdict::inconclusive;
    double lambda_plus = 0.0;  // NaN outside the window
    double lambda_minus = 0.0; // log(lam_u) - lambda_plus
    bool witness = false;      // drop below lambda_plus(0), lift above 0
};

struct CorollaryReport {
    std::vector<CorollaryRow> rows;
    double lambda_plus_0 = 0.0;
    double lambda_minus_0 = 0.0;
    double ddlambda0 = 0.0;
    double threshold = 1e-4;
    bool found = false;
    double lo = 0.0, hi = 0.0; // contiguous witness run nearest zero
    std::string note;
};

struct CorollaryOptions {
    LyapThetaOptions lyap{};
    CertifyOptions certify{};
    double threshold = 1e-4;
};

// Sweep of the rotated family: where the center exponent lifts off zero
// while the unstable exponent drops (the nonuniform-hyperbolicity window).
CorollaryReport corollary_main_report(const HeisenbergModel& model,
                                      const std::vector<double>& theta_grid,
                                      const CorollaryOptions& opt = {});

} // namespace cocycle
