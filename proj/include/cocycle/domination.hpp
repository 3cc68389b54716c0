#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cocycle/cocycle_core.hpp"

namespace cocycle {

struct SectionOptions {
    int max_depth = 400;   // graph-transform depth N
    double tol = 1e-12;    // chordal increment threshold
};

struct SectionValue {
    Slope slope;
    double residual = 2.0; // last transform increment (chordal)
    bool converged = false;
    int depth_used = 0;
};

// Strong direction F(x): limit of the dominant direction of A^n(T^{-n}x)
// as n grows (the shrinking Moebius disk images collapse onto it).
SectionValue strong_section(const CocycleSpec& c, const BaseSystem& base,
                            const BasePoint& x, const SectionOptions& opt = {});

// Weak direction E(x): the strong direction of the inverse cocycle over T^{-1}.
SectionValue weak_section(const CocycleSpec& c, const BaseSystem& base,
                          const BasePoint& x, const SectionOptions& opt = {});

struct SectionSample {
    BasePoint x;
    Slope strong;
    Slope weak;
    double residual = 2.0;
    bool converged = false;
};

enum class Verdict { dominated, not_dominated, inconclusive };

std::string to_string(Verdict v);

struct RefuteOptions {
    int n_probe = 200;       // products probed up to this length
    double gap_floor = 0.02; // per-step singular gap threshold
    int samples = 16;
    std::uint64_t seed = 1;
};

struct RefuteWitness {
    BasePoint x;
    long n = 0;
    double gap_rate = 0.0;
};

// Numerical converse of the disk criterion: domination fails when the
// singular-value gap of A^n(x) does not grow uniformly exponentially.
// Scans n in [2, n_probe] and reports the weakest gap found.
std::optional<RefuteWitness> refute(const CocycleSpec& c, const BaseSystem& base,
                                    const RefuteOptions& opt = {});

struct DominationCertificate {
    int l = 0;           // least power certifying the product bound
    double margin = 2.0; // max over samples of ||A^l|E|| * ||A^-l|F o T^l||
    std::vector<SectionSample> samples;
    Verdict verdict = Verdict::inconclusive;
    std::optional<RefuteWitness> witness;
    std::string note;
};

struct CertifyOptions {
    int samples = 64;
    int l_max = 40;
    std::uint64_t seed = 1;
    SectionOptions section{};
    RefuteOptions refutation{};
    // margins inside this band are reported as boundary (inconclusive)
    double boundary_lo = 0.45;
    double boundary_hi = 0.55;
};

DominationCertificate certify(const CocycleSpec& c, const BaseSystem& base,
                              const CertifyOptions& opt = {});

struct DsetRow {
    double theta = 0.0;
    Verdict verdict = Verdict::inconclusive;
    int l = 0;
    double margin = 0.0;
    double gap_rate = 0.0; // NaN when no refutation ran
};

// certify/refute across a rotation-parameter grid.
std::vector<DsetRow> dset_sweep(const CocycleSpec& c, const BaseSystem& base,
                                const std::vector<double>& theta_grid,
                                const CertifyOptions& opt = {});

// Arcs on the direction circle (angles mod pi), used for the disk
// contraction check of the dominated-splitting criterion.
struct DirectionArc {
    double center_angle = 0.0; // in [0, pi)
    double half_width = 0.0;
};

double direction_angle(const Slope& s);            // atan chart, [0, pi)
double chordal_radius_to_angle(double r);          // asin(r/2)
DirectionArc mobius_image_arc(const Mat2& m, const Slope& center, double chordal_radius);
bool arc_contains(const DirectionArc& outer, const DirectionArc& inner, double slack = 1e-12);

} // namespace cocycle
