#include <doctest.h>

#include <random>

#include "cocycle/mat2.hpp"
#include "cocycle/slope.hpp"

using namespace cocycle;

TEST_CASE("closed-form singular values") {
    const Sv2 sv = singular_values(Mat2::diag(2.0, 0.5));
    CHECK(sv.s1 == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(sv.s2 == doctest::Approx(0.5).epsilon(1e-14));

    // rotations are isometries
    const Sv2 rv = singular_values(rotation(0.7));
    CHECK(rv.s1 == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(rv.s2 == doctest::Approx(1.0).epsilon(1e-14));

    // s1 s2 = |det| on random matrices
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int i = 0; i < 200; ++i) {
        const Mat2 m{u(rng), u(rng), u(rng), u(rng)};
        const Sv2 s = singular_values(m);
        CHECK(s.s1 * s.s2 == doctest::Approx(std::abs(m.det())).epsilon(1e-10));
        // operator norm dominates the image of any unit vector
        const double phi = u(rng);
        const Vec2 v{std::cos(phi), std::sin(phi)};
        CHECK(m.apply(v).norm() <= s.s1 * (1.0 + 1e-12));
    }
}

TEST_CASE("inverse and determinant floor") {
    const Mat2 m{1.0, 2.0, 3.0, 4.0};
    const Mat2 id = m * m.inverse();
    CHECK(max_abs_diff(id, Mat2::identity()) < 1e-14);
    CHECK_THROWS_AS(Mat2::diag(1e-13, 1.0).inverse(), non_invertible_error);
}

TEST_CASE("rotation matrix basics") {
    CHECK(max_abs_diff(rotation(0.0), Mat2::identity()) == 0.0);
    CHECK(rotation(0.3).det() == doctest::Approx(1.0).epsilon(1e-15));
    // R_pi = -Id
    CHECK(max_abs_diff(rotation(3.14159265358979323846), -Mat2::identity()) < 1e-15);
}

TEST_CASE("mobius action conventions") {
    CHECK(mobius_act(Mat2::identity(), Slope(0.7)).value() == doctest::Approx(0.7));
    // the exact quarter rotation sends 0 to infinity; the floating-point
    // rotation matrix lands within one ulp of it on the sphere
    CHECK(mobius_act(Mat2{0, -1, 1, 0}, Slope(0.0)).is_infinite());
    CHECK(chordal(mobius_act(rotation(1.5707963267948966), Slope(0.0)), Slope::infinity()) < 1e-9);
    CHECK(mobius_act(Mat2{2, 0, 0, 0.5}, Slope(1.0)).value() == doctest::Approx(4.0));
    // z = inf maps to a/c
    CHECK(mobius_act(Mat2{1, 1, 2, 1}, Slope::infinity()).value() == doctest::Approx(0.5));
}

TEST_CASE("mobius respects the matrix product") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    int checked = 0;
    for (int i = 0; i < 1000; ++i) {
        Mat2 m1{u(rng), u(rng), u(rng), u(rng)};
        Mat2 m2{u(rng), u(rng), u(rng), u(rng)};
        if (std::abs(m1.det()) < 1e-3 || std::abs(m2.det()) < 1e-3) continue;
        const double zv = u(rng);
        const Slope z = (i % 7 == 0) ? Slope::infinity() : Slope(zv);
        const Slope lhs = mobius_act(m1 * m2, z);
        const Slope rhs = mobius_act(m1, mobius_act(m2, z));
        CHECK(chordal(lhs, rhs) < 1e-9);
        ++checked;
    }
    CHECK(checked > 800);
}

TEST_CASE("chordal metric") {
    CHECK(chordal(Slope(0.0), Slope::infinity()) == doctest::Approx(2.0)); // orthogonal
    CHECK(chordal(Slope(1.0), Slope(-1.0)) == doctest::Approx(2.0));       // orthogonal
    CHECK(chordal(Slope(0.3), Slope(0.3)) == 0.0);
    // symmetric and bounded by 2
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-50.0, 50.0);
    for (int i = 0; i < 100; ++i) {
        const Slope a(u(rng)), b(u(rng));
        CHECK(chordal(a, b) == doctest::Approx(chordal(b, a)));
        CHECK(chordal(a, b) <= 2.0);
    }
}

TEST_CASE("slope unit vector sign convention") {
    CHECK(Slope(0.0).unit_vector().y == 1.0);
    CHECK(Slope::infinity().unit_vector().x == 1.0);
    const Vec2 v = Slope(-3.0).unit_vector();
    CHECK(v.y > 0.0);
    CHECK(v.x / v.y == doctest::Approx(-3.0));
}
