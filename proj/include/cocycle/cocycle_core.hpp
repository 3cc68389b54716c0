#pragma once

#include <cstdint>
#include <functional>

#include "cocycle/base_systems.hpp"
#include "cocycle/mat2.hpp"
#include "cocycle/slope.hpp"

namespace cocycle {

// Generator A: X -> GL(2,R) of a linear cocycle over a base system.
struct CocycleSpec {
    std::function<Mat2(const BasePoint&)> generator;
    bool orientation_preserving = false;
    double det_floor = 1e-12;

    // Evaluate with the invertibility (and, if flagged, orientation) check.
    Mat2 at(const BasePoint& p, long orbit_index = 0) const;
};

CocycleSpec constant_cocycle(const Mat2& m);

// x -> A(x) R_theta.
CocycleSpec rotate_family(const CocycleSpec& c, double theta);

// The cocycle x -> A(T^{-1}x)^{-1} over the reversed base; its forward
// products are the A^{-n}.
CocycleSpec inverse_cocycle(const CocycleSpec& c, const BaseSystem& base);

// A^n(x); n >= 0 is the forward product, n < 0 the inverse-product form,
// A^0 = Id.
Mat2 compose_n(const CocycleSpec& c, const BaseSystem& base, const BasePoint& x, long n);

// Matrix product kept as m * exp(log_scale) with periodic renormalization
// by the max-abs entry (every 32 pushes), good for products of length 1e7.
class ScaledMat2 {
public:
    void push_left(const Mat2& a, long orbit_index = 0);
    void push_right(const Mat2& a, long orbit_index = 0);
    const Mat2& matrix() const { return m_; }
    double log_scale() const { return log_scale_; }
    double log_norm2() const; // log of the true product's 2-norm
    double log_abs_det() const;
    // Per-step singular value gap log(s1/s2)/n of the true product.
    double gap_rate(long n) const;

private:
    void renormalize(long orbit_index);

    Mat2 m_ = Mat2::identity();
    double log_scale_ = 0.0;
    double log_det_ = 0.0;
    int since_renorm_ = 0;
};

struct LyapOptions {
    long orbit_length = 10000;
    int samples = 64;
    std::uint64_t seed = 1;
};

// Sample average of (1/n) log ||A^n(x)|| (Furstenberg-Kesten estimator of
// the upper exponent). Parallel over samples, deterministic merge.
double lyap_plus_direct(const CocycleSpec& c, const BaseSystem& base, const LyapOptions& opt);

// Lower exponent as -lambda^+ of the inverse cocycle over T^{-1}.
double lyap_minus_direct(const CocycleSpec& c, const BaseSystem& base, const LyapOptions& opt);

// Birkhoff average of log|det A|, an estimator of lambda^+ + lambda^-.
double lyap_sum_via_det(const CocycleSpec& c, const BaseSystem& base, const LyapOptions& opt);

} // namespace cocycle
