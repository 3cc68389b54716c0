#pragma once

#include "cocycle/theta_analysis.hpp"

// Serial reference implementations: straight loops, no parallel machinery,
// naive accumulation. Kept as the cross-check for the OpenMP kernels (see
// tests/) and as the baseline of the benchmark target.
namespace cocycle::ref {

double lyap_plus_direct(const CocycleSpec& c, const BaseSystem& base, const LyapOptions& opt);

double lyap_sum_via_det(const CocycleSpec& c, const BaseSystem& base, const LyapOptions& opt);

// Implicit-formula estimator with the pointwise u-update iterated directly
// (no accumulated-matrix shortcut).
double lyap_plus_theta(const TriangularCocycle& tri, double theta, const LyapThetaOptions& opt);

} // namespace cocycle::ref
