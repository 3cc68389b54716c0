#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "cocycle/domination.hpp"
#include "oracles.hpp"

using namespace cocycle;

namespace {
const double kPi = 3.14159265358979323846;
const BaseSystem kCircle = BaseSystem::circle_rotation(std::sqrt(2.0) - 1.0);
const BasePoint kX{0.37, 0.0, -1};
} // namespace

TEST_CASE("strong and weak sections of constant cocycles") {
    // lower-triangular H with lambda = 1/2, eta = 2: F = span(e2)
    const SectionValue f1 = strong_section(constant_cocycle(Mat2{0.5, 0, 1, 2}), kCircle, kX);
    CHECK(f1.converged);
    CHECK(chordal(f1.slope, Slope(0.0)) < 1e-9);

    // dominant eigendirection of diag(2, 1/2) is e1
    const SectionValue f2 = strong_section(constant_cocycle(Mat2::diag(2, 0.5)), kCircle, kX);
    CHECK(f2.converged);
    CHECK(chordal(f2.slope, Slope::infinity()) < 1e-9);

    const SectionValue e2 = weak_section(constant_cocycle(Mat2::diag(2, 0.5)), kCircle, kX);
    CHECK(e2.converged);
    CHECK(chordal(e2.slope, Slope(0.0)) < 1e-9);

    // [[1/2,0],[1,2]]: weak direction is the 1/2-eigenvector of slope -3/2
    const SectionValue e3 = weak_section(constant_cocycle(Mat2{0.5, 0, 1, 2}), kCircle, kX);
    CHECK(e3.converged);
    CHECK(e3.slope.value() == doctest::Approx(-1.5).epsilon(1e-9));

    // isometries have no attracting direction
    const SectionValue r = weak_section(constant_cocycle(rotation(kPi / 3)), kCircle, kX);
    CHECK_FALSE(r.converged);
}

TEST_CASE("sections against random eigenvector oracles") {
    std::mt19937_64 rng(31);
    for (int i = 0; i < 50; ++i) {
        const Mat2 a = oracle::random_dominated_matrix(rng);
        // leading eigenvector from the characteristic polynomial
        const double t = a.trace(), d = a.det();
        const double mu = 0.5 * (t + std::sqrt(t * t - 4.0 * d));
        const Vec2 v1{a.b, mu - a.a};
        const Vec2 v2{mu - a.d, a.c};
        const Vec2 v = (v1.norm() > v2.norm() ? v1 : v2).normalized();
        const SectionValue f = strong_section(constant_cocycle(a), kCircle, kX);
        REQUIRE(f.converged);
        CHECK(chordal(f.slope, Slope::of_direction(v)) < 1e-7);
    }
}

TEST_CASE("section invariance and monotone refinement") {
    std::mt19937_64 rng(8);
    const CocycleSpec c = constant_cocycle(oracle::random_dominated_matrix(rng));
    SectionOptions shallow;
    shallow.max_depth = 12;
    shallow.tol = 0.0; // force full depth
    SectionOptions deep = shallow;
    deep.max_depth = 24;

    for (const BasePoint& x : kCircle.sample_measure(16, 4)) {
        const SectionValue s = strong_section(c, kCircle, x);
        REQUIRE(s.converged);
        const BasePoint tx = kCircle.step(x, Direction::forward);
        const SectionValue st = strong_section(c, kCircle, tx);
        REQUIRE(st.converged);
        CHECK(chordal(mobius_act(c.at(x), s.slope), st.slope) < 1e-8);

        const double r_shallow = strong_section(c, kCircle, x, shallow).residual;
        const double r_deep = strong_section(c, kCircle, x, deep).residual;
        CHECK(r_deep <= r_shallow + 1e-12);
    }
}

TEST_CASE("certify closed forms") {
    CertifyOptions opt;
    opt.samples = 8;
    opt.refutation.samples = 8;

    const DominationCertificate c1 = certify(constant_cocycle(Mat2::diag(2, 0.5)), kCircle, opt);
    CHECK(c1.verdict == Verdict::dominated);
    CHECK(c1.l == 1);
    CHECK(c1.margin == doctest::Approx(0.25).epsilon(1e-9));

    const DominationCertificate c2 = certify(constant_cocycle(rotation(0.9)), kCircle, opt);
    CHECK(c2.verdict == Verdict::not_dominated);
    REQUIRE(c2.witness.has_value());
    CHECK(c2.witness->gap_rate == doctest::Approx(0.0).epsilon(1e-12));

    // diag(1/2,2) R_{pi/2} squares to -Id: bounded products, elliptic
    const DominationCertificate c3 =
        certify(rotate_family(constant_cocycle(Mat2::diag(0.5, 2.0)), kPi / 2), kCircle, opt);
    CHECK(c3.verdict == Verdict::not_dominated);
    REQUIRE(c3.witness.has_value());
    CHECK(std::abs(c3.witness->gap_rate) < 1e-10);
}

TEST_CASE("refute on closed forms") {
    RefuteOptions opt;
    opt.samples = 8;
    CHECK(refute(constant_cocycle(rotation(1.0)), kCircle, opt).has_value());
    CHECK_FALSE(refute(constant_cocycle(Mat2::diag(2, 0.5)), kCircle, opt).has_value());
    // the period-2 elliptic witness appears at n = 2
    const auto w = refute(rotate_family(constant_cocycle(Mat2::diag(2, 0.5)), kPi / 2), kCircle, opt);
    REQUIRE(w.has_value());
    CHECK(w->n == 2);
    CHECK(std::abs(w->gap_rate) < 1e-10);
}

TEST_CASE("certify and refute never both fire") {
    std::mt19937_64 rng(12);
    CertifyOptions opt;
    opt.samples = 6;
    opt.refutation.samples = 6;
    for (int i = 0; i < 25; ++i) {
        const CocycleSpec c = constant_cocycle(oracle::random_dominated_matrix(rng));
        const DominationCertificate cert = certify(c, kCircle, opt);
        const auto w = refute(c, kCircle, opt.refutation);
        CHECK_FALSE((cert.verdict == Verdict::dominated && w.has_value()));
    }
    // and on a clearly elliptic input
    const CocycleSpec ell = rotate_family(constant_cocycle(Mat2::diag(1.2, 1.0 / 1.2)), kPi / 2);
    CHECK(certify(ell, kCircle, opt).verdict != Verdict::dominated);
    CHECK(refute(ell, kCircle, opt.refutation).has_value());
}

TEST_CASE("dset_sweep localizes the constant-family boundary") {
    // |trace| of diag(2,1/2) R_theta crosses 2 at arccos(4/5)
    const double boundary = std::acos(0.8);
    std::vector<double> grid;
    for (double t = 0.58; t <= 0.71; t += 0.005) grid.push_back(t);
    grid.push_back(kPi / 2);

    CertifyOptions opt;
    opt.samples = 4;
    opt.refutation.samples = 4;
    const auto rows = dset_sweep(constant_cocycle(Mat2::diag(2, 0.5)), kCircle, grid, opt);

    double last_dominated = -1.0, first_refuted = 10.0;
    for (const DsetRow& r : rows) {
        if (r.verdict == Verdict::dominated) last_dominated = std::max(last_dominated, r.theta);
        if (r.verdict == Verdict::not_dominated && r.theta < first_refuted) first_refuted = r.theta;
    }
    CHECK(last_dominated > boundary - 0.01);
    CHECK(last_dominated < boundary);
    CHECK(first_refuted > boundary);
    CHECK(first_refuted < boundary + 0.015);
    CHECK(rows.back().verdict == Verdict::not_dominated);
}

TEST_CASE("disk contraction along dominated samples") {
    std::mt19937_64 rng(3);
    CertifyOptions opt;
    opt.samples = 6;
    for (int i = 0; i < 10; ++i) {
        const CocycleSpec c = constant_cocycle(oracle::random_dominated_matrix(rng));
        const DominationCertificate cert = certify(c, kCircle, opt);
        REQUIRE(cert.verdict == Verdict::dominated);
        const double r0 = std::clamp(0.5 * (0.5 - cert.margin), 0.01, 0.2);
        for (const SectionSample& s : cert.samples) {
            const Mat2 al = compose_n(c, kCircle, s.x, cert.l);
            BasePoint tl = s.x;
            for (int j = 0; j < cert.l; ++j) tl = kCircle.step(tl, Direction::forward);
            const SectionValue target = strong_section(c, kCircle, tl);
            REQUIRE(target.converged);
            const DirectionArc image = mobius_image_arc(al, s.strong, r0);
            const DirectionArc goal{direction_angle(target.slope), chordal_radius_to_angle(r0)};
            CHECK(arc_contains(goal, image, 1e-9));
        }
    }
}
