#pragma once

#include <functional>
#include <memory>

#include "cocycle/cocycle_core.hpp"
#include "cocycle/domination.hpp"

namespace cocycle {

// Rotation frame [u_perp | u] attached to a unit direction u.
struct Frame {
    Vec2 u;
    Mat2 B; // in SO(2), det = 1
};

Frame frame_of(const Vec2& u);

struct TriangularizePoint {
    Mat2 H;  // lower triangular, H[1][1] = eta > 0
    Vec2 v;  // image direction Au/||Au||
};

// H_u = D_u^{-1} A B_u with v = Au/||Au||, D_u = [v_perp | v]. Norm and
// determinant of A are preserved.
TriangularizePoint triangularize_point(const Mat2& a, const Vec2& u);

struct TriEntries {
    double lam = 0.0; // lambda(x)
    double sig = 0.0; // sigma(x)
    double eta = 0.0; // eta(x) > 0
};

// Lower-triangular cocycle H(x) = [[lambda, 0], [sigma, eta]] over a base,
// either given by entry functions or derived pointwise from a dominated
// cocycle's strong section. Orbit evaluation fills an immutable buffer
// (the per-orbit cache), so concurrent use is safe.
class TriangularCocycle {
public:
    using EntryFn = std::function<double(const BasePoint&)>;

    static TriangularCocycle from_functions(const BaseSystem& base, EntryFn lam,
                                            EntryFn sig, EntryFn eta, double tau = -1.0);
    static TriangularCocycle constant(const BaseSystem& base, double lam, double sig,
                                      double eta, double tau_headroom = 0.01);

    TriEntries at(const BasePoint& x) const;

    // Entries at every point of the orbit buffer, in buffer order.
    std::vector<TriEntries> along_orbit(const OrbitBuffer& orbit) const;

    double tau() const { return tau_; }
    const BaseSystem& base() const { return base_; }

    bool is_sectioned() const { return sectioned_; }
    // The quasi-conjugated cocycle A when section-derived, else nullptr.
    const CocycleSpec* underlying_cocycle() const {
        return sectioned_ ? &underlying_ : nullptr;
    }

    // H as a plain cocycle generator (orientation-preserving when lambda>0).
    CocycleSpec as_cocycle() const;

private:
    friend TriangularCocycle build_triangular(const CocycleSpec&, const BaseSystem&,
                                              const SectionOptions&, int, std::uint64_t,
                                              double);

    BaseSystem base_;
    EntryFn lam_, sig_, eta_;
    bool sectioned_ = false;
    CocycleSpec underlying_{};
    SectionOptions section_opt_{};
    double tau_ = 0.0;

    TriEntries entries_from_section(const BasePoint& x) const;
};

// Construct H from A and its strong section with the sign convention u2>0
// (u1>0 on the horizontal); tau is the max sampled lambda/eta plus headroom.
// Throws data_error when the section does not converge or the entries
// violate eta > |lambda| (a wrong section).
TriangularCocycle build_triangular(const CocycleSpec& c, const BaseSystem& base,
                                   const SectionOptions& sopt = {}, int tau_samples = 64,
                                   std::uint64_t seed = 1, double tau_headroom = 0.01);

// max over 1 <= n <= n_max of | ||A^n(x)|| - ||H^n(x)|| | / ||A^n(x)||.
double check_norm_equality(const CocycleSpec& c, const TriangularCocycle& tri,
                           const BaseSystem& base, const BasePoint& x, int n_max);

} // namespace cocycle
