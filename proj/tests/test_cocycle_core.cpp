#include <doctest.h>

#include <cmath>
#include <random>

#include "cocycle/cocycle_core.hpp"
#include "cocycle/errors.hpp"
#include "oracles.hpp"

using namespace cocycle;

namespace {
const double kPi = 3.14159265358979323846;

CocycleSpec torus_shear_cocycle() {
    // nonconstant invertible generator over the torus
    CocycleSpec c;
    c.generator = [](const BasePoint& p) {
        return Mat2{1.5 + 0.2 * std::cos(2 * kPi * p.x), 0.1, 0.3 * std::sin(2 * kPi * p.y), 0.9};
    };
    c.orientation_preserving = true;
    return c;
}

CocycleSpec mild_cocycle() {
    // small Lyapunov gap: 20-step products stay well conditioned
    CocycleSpec c;
    c.generator = [](const BasePoint& p) {
        return rotation(0.4 + 0.2 * std::sin(2 * kPi * p.x)) * Mat2::diag(1.06, 0.95);
    };
    c.orientation_preserving = true;
    return c;
}
} // namespace

TEST_CASE("compose_n basics") {
    const BaseSystem base = BaseSystem::circle_rotation(0.3);
    const BasePoint x{0.2, 0, -1};

    CHECK(max_abs_diff(compose_n(constant_cocycle(Mat2::diag(2, 0.5)), base, x, 0),
                       Mat2::identity()) == 0.0);
    CHECK(max_abs_diff(compose_n(constant_cocycle(Mat2::diag(2, 0.5)), base, x, 3),
                       Mat2::diag(8, 0.125)) < 1e-14);
    CHECK(max_abs_diff(compose_n(constant_cocycle(rotation(kPi / 4)), base, x, 4),
                       -Mat2::identity()) < 1e-14);

    CHECK_THROWS_AS(compose_n(constant_cocycle(Mat2::diag(1e-14, 1.0)), base, x, 2),
                    non_invertible_error);
}

TEST_CASE("cocycle identity and inverses") {
    // isometric base: no shadowing amplification, so the algebraic
    // identities hold at full float precision
    const BaseSystem base = BaseSystem::circle_rotation(std::sqrt(2.0) - 1.0);
    const CocycleSpec c = mild_cocycle();
    const auto pts = base.sample_measure(12, 21);
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<int> pick(-20, 20);
    for (const BasePoint& x : pts) {
        const int m = pick(rng), n = pick(rng);
        // A^{m+n}(x) = A^m(T^n x) A^n(x)
        const Mat2 lhs = compose_n(c, base, x, m + n);
        BasePoint tn = x;
        for (int j = 0; j < std::abs(n); ++j)
            tn = base.step(tn, n > 0 ? Direction::forward : Direction::backward);
        const Mat2 rhs = compose_n(c, base, tn, m) * compose_n(c, base, x, n);
        CHECK(max_abs_diff(lhs, rhs) <= 1e-10 * std::max(1.0, rhs.max_abs()));

        // A^{-n}(x) A^n(T^{-n} x) = Id
        const int k = std::abs(n);
        BasePoint back = x;
        for (int j = 0; j < k; ++j) back = base.step(back, Direction::backward);
        const Mat2 prod = compose_n(c, base, x, -k) * compose_n(c, base, back, k);
        CHECK(max_abs_diff(prod, Mat2::identity()) < 1e-9);
    }
}

TEST_CASE("inverse identity over the chaotic torus base") {
    // here the limit is shadowing of the base orbit (deviation grows like
    // exp(0.96 n)); the bound only guards against order-of-factor mistakes,
    // which show up as O(1) errors
    const BaseSystem base = BaseSystem::torus_automorphism({2, 1, 1, 1});
    const CocycleSpec c = torus_shear_cocycle();
    for (const BasePoint& x : base.sample_measure(6, 77)) {
        for (int n : {5, 12, 20}) {
            BasePoint back = x;
            for (int j = 0; j < n; ++j) back = base.step(back, Direction::backward);
            const Mat2 prod = compose_n(c, base, x, -n) * compose_n(c, base, back, n);
            CHECK(max_abs_diff(prod, Mat2::identity()) <
                  1e-11 * std::exp(0.97 * n) * n + 1e-10);
        }
    }
}

TEST_CASE("rotate_family") {
    const BaseSystem base = BaseSystem::circle_rotation(0.1);
    const CocycleSpec c = constant_cocycle(Mat2::diag(2, 0.5));
    const BasePoint x{0.4, 0, -1};

    CHECK(max_abs_diff(rotate_family(c, 0.0).at(x), c.at(x)) == 0.0);
    CHECK(max_abs_diff(rotate_family(c, 2 * kPi).at(x), c.at(x)) < 1e-15);
    CHECK(max_abs_diff(rotate_family(c, kPi / 2).at(x), Mat2{0, -2, 0.5, 0}) < 1e-15);
}

TEST_CASE("inverse cocycle products realize A^{-n}") {
    const BaseSystem base = BaseSystem::torus_automorphism({2, 1, 1, 1});
    const CocycleSpec c = torus_shear_cocycle();
    const auto [inv, rbase] = std::pair{inverse_cocycle(c, base), base.reversed()};
    const BasePoint x{0.3, 0.8, -1};
    for (int n : {1, 3, 7}) {
        CHECK(max_abs_diff(compose_n(inv, rbase, x, n), compose_n(c, base, x, -n)) < 1e-12);
    }
}

TEST_CASE("lyap_plus_direct on closed forms") {
    const BaseSystem base = BaseSystem::circle_rotation(std::sqrt(2.0) - 1.0);
    LyapOptions opt;
    opt.orbit_length = 10000;
    opt.samples = 4;

    CHECK(std::abs(lyap_plus_direct(constant_cocycle(Mat2::diag(2, 0.5)), base, opt) -
                   std::log(2.0)) < 1e-9);
    CHECK(std::abs(lyap_plus_direct(constant_cocycle(rotation(0.8)), base, opt)) < 1e-12);

    // generic dominated constants against the repeated-squaring oracle
    std::mt19937_64 rng(17);
    for (int i = 0; i < 20; ++i) {
        const Mat2 a = oracle::random_dominated_matrix(rng);
        const double expected = oracle::lyap_power(a, 1 << 20);
        CHECK(std::abs(lyap_plus_direct(constant_cocycle(a), base, opt) - expected) < 1e-3);
        CHECK(expected == doctest::Approx(oracle::lyap_eigen(a)).epsilon(1e-4));
    }
}

TEST_CASE("lyap sum via det and the minus exponent") {
    const BaseSystem base = BaseSystem::circle_rotation(std::sqrt(2.0) - 1.0);
    LyapOptions opt;
    opt.orbit_length = 10000;
    opt.samples = 8;

    CHECK(std::abs(lyap_sum_via_det(constant_cocycle(Mat2::diag(2, 0.5)), base, opt)) < 1e-12);
    CHECK(std::abs(lyap_sum_via_det(constant_cocycle(Mat2{0.5, 0, 1, 2}), base, opt)) < 1e-12);

    // lambda^+ + lambda^- = birkhoff(log|det|)
    std::mt19937_64 rng(23);
    for (int i = 0; i < 5; ++i) {
        const Mat2 a = oracle::random_dominated_matrix(rng);
        const CocycleSpec c = constant_cocycle(a);
        const double sum = lyap_plus_direct(c, base, opt) + lyap_minus_direct(c, base, opt);
        CHECK(std::abs(sum - lyap_sum_via_det(c, base, opt)) < 2e-3);
    }
}

TEST_CASE("scaled products survive long orbits") {
    ScaledMat2 p;
    for (int i = 0; i < 200000; ++i) p.push_left(Mat2::diag(2.0, 0.5), i);
    CHECK(p.log_norm2() == doctest::Approx(200000 * std::log(2.0)).epsilon(1e-12));
    CHECK(p.log_abs_det() == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(p.gap_rate(200000) == doctest::Approx(2.0 * std::log(2.0)).epsilon(1e-12));
}
