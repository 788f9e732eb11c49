#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "horo/halfplane.hpp"
#include "horo/rng.hpp"
#include "oracles.hpp"

using namespace horo;

namespace {
const H2Point oI(0.0, 1.0);
const H2Point o2I(0.0, 2.0);
}  // namespace

TEST_CASE("distance on the imaginary axis and identity case") {
    CHECK(dist(oI, o2I) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
    CHECK(dist(oI, oI) == 0.0);
}

TEST_CASE("distance (i, 1+i) against quadrature oracle") {
    const H2Point z(1.0, 1.0);
    const double expected = oracle::dist_quadrature(oI, z);
    CHECK(expected == doctest::Approx(0.9624236501).epsilon(1e-8));
    CHECK(dist(oI, z) == doctest::Approx(expected).epsilon(1e-9));
}

TEST_CASE("distance is symmetric, positive, and satisfies the triangle inequality") {
    Rng rng(11);
    for (int trial = 0; trial < 500; ++trial) {
        const H2Point x = sample_point(rng);
        const H2Point y = sample_point(rng);
        const H2Point z = sample_point(rng);
        CHECK(dist(x, y) == doctest::Approx(dist(y, x)).epsilon(1e-14));
        CHECK(dist(x, y) >= 0.0);
        CHECK(dist(x, z) <= dist(x, y) + dist(y, z) + 1e-12);
    }
}

TEST_CASE("geodesic between 0 and infinity is the imaginary axis") {
    const GeodesicH2 g(BoundaryPointH2(0.0), BoundaryPointH2::infinity());
    const H2Point origin = g.point_at(0.0);
    CHECK(origin.re == doctest::Approx(0.0));
    CHECK(origin.im == doctest::Approx(1.0));
    const H2Point up = g.point_at(2.0);
    CHECK(up.re == doctest::Approx(0.0));
    CHECK(up.im == doctest::Approx(std::exp(2.0)));
}

TEST_CASE("geodesic between -1 and 1 is the unit semicircle and is minimizing") {
    const GeodesicH2 g(BoundaryPointH2(-1.0), BoundaryPointH2(1.0));
    for (int k = 0; k < 20; ++k) {
        const double t = -3.0 + 6.0 * k / 19.0;
        const H2Point z = g.point_at(t);
        CHECK(std::hypot(z.re, z.im) == doctest::Approx(1.0).epsilon(1e-12));
    }
    // Unit speed and minimizing: parameter gaps equal distances.
    const H2Point a = g.point_at(-1.3), b = g.point_at(0.9);
    CHECK(dist(a, b) == doctest::Approx(2.2).epsilon(1e-12));
}

TEST_CASE("coincident boundary endpoints are rejected") {
    CHECK_THROWS_AS(GeodesicH2(BoundaryPointH2(2.0), BoundaryPointH2(2.0)), Error);
    CHECK_THROWS_AS(GeodesicH2(BoundaryPointH2::infinity(), BoundaryPointH2::infinity()), Error);
}

TEST_CASE("projection onto the imaginary axis") {
    const GeodesicH2 axis(BoundaryPointH2(0.0), BoundaryPointH2::infinity());
    const Projection p = project_to_geodesic(axis, H2Point(-1.0, 1.0));
    CHECK(p.foot.re == doctest::Approx(0.0));
    CHECK(p.foot.im == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
    CHECK(p.param == doctest::Approx(std::log(std::sqrt(2.0))).epsilon(1e-12));

    // Cross-check against the golden-section minimization oracle.
    const double t_star = oracle::golden_section_param(axis, H2Point(-1.0, 1.0));
    CHECK(p.param == doctest::Approx(t_star).epsilon(1e-8));

    const Projection on = project_to_geodesic(axis, o2I);
    CHECK(on.foot.im == doctest::Approx(2.0));
    CHECK(dist(on.foot, o2I) < 1e-12);
}

TEST_CASE("projection onto the unit semicircle by symmetry") {
    const GeodesicH2 g(BoundaryPointH2(-1.0), BoundaryPointH2(1.0));
    const Projection p = project_to_geodesic(g, H2Point(0.0, 3.0));
    CHECK(p.foot.re == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(p.foot.im == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("projection is 1-Lipschitz") {
    Rng rng(12);
    for (int trial = 0; trial < 500; ++trial) {
        const GeodesicH2 g = sample_geodesic(rng);
        const H2Point x = sample_point(rng);
        const H2Point y = sample_point(rng);
        const Projection px = project_to_geodesic(g, x);
        const Projection py = project_to_geodesic(g, y);
        CHECK(dist(px.foot, py.foot) <= dist(x, y) + 1e-10);
    }
}

TEST_CASE("segment projection clamps to the nearer endpoint") {
    const SegmentH2 seg(oI, H2Point(0.0, 4.0));
    const Projection below = project_to_segment(seg, H2Point(0.3, 0.2));
    CHECK(dist(below.foot, oI) < 1e-9);
    const Projection inside = project_to_segment(seg, H2Point(-1.0, 2.0));
    CHECK(inside.foot.re == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(inside.foot.im == doctest::Approx(std::sqrt(5.0)).epsilon(1e-12));
}

TEST_CASE("busemann closed forms") {
    CHECK(busemann(BoundaryPointH2::infinity(), oI, o2I) ==
          doctest::Approx(std::log(2.0)).epsilon(1e-14));
    const BoundaryPointH2 zero(0.0);
    CHECK(busemann(zero, oI, o2I) == doctest::Approx(-std::log(2.0)).epsilon(1e-14));
    Rng rng(13);
    const BoundaryPointH2 xi = sample_boundary(rng);
    const H2Point x = sample_point(rng);
    CHECK(busemann(xi, x, x) == 0.0);
}

TEST_CASE("busemann limit-definition oracle agrees with the closed form") {
    Rng rng(14);
    const BoundaryPointH2 zero(0.0);
    CHECK(oracle::busemann_limit(zero, oI, o2I) ==
          doctest::Approx(-std::log(2.0)).epsilon(1e-8));
    for (int trial = 0; trial < 200; ++trial) {
        const BoundaryPointH2 xi = sample_boundary(rng);
        const H2Point x = sample_point(rng);
        const H2Point y = sample_point(rng);
        CHECK(std::abs(busemann(xi, x, y) - oracle::busemann_limit(xi, x, y)) < 1e-6);
    }
}

TEST_CASE("busemann cocycle identity and bound over seeded samples") {
    Rng rng(7);
    for (int trial = 0; trial < 1000; ++trial) {
        const BoundaryPointH2 xi = sample_boundary(rng);
        const H2Point x = sample_point(rng);
        const H2Point y = sample_point(rng);
        const H2Point z = sample_point(rng);
        const double defect =
            busemann(xi, x, z) - busemann(xi, x, y) - busemann(xi, y, z);
        CHECK(std::abs(defect) < 1e-9);
        CHECK(std::abs(busemann(xi, x, y)) <= dist(x, y) + 1e-12);
    }
}

TEST_CASE("isometry equivariance of distance and busemann") {
    Rng rng(15);
    for (int trial = 0; trial < 300; ++trial) {
        const IsometryH2 g = sample_isometry_near_identity(rng, 2.0);
        const H2Point x = sample_point(rng);
        const H2Point y = sample_point(rng);
        const BoundaryPointH2 xi = sample_boundary(rng);
        CHECK(dist(g.apply(x), g.apply(y)) == doctest::Approx(dist(x, y)).epsilon(1e-10));
        CHECK(std::abs(busemann(g.apply(xi), g.apply(x), g.apply(y)) - busemann(xi, x, y)) <
              1e-9);
    }
}

TEST_CASE("isometry classification") {
    CHECK(classify_isometry(IsometryH2(1, 1, 0, 1)) == IsometryType::Parabolic);
    CHECK(classify_isometry(axis_translation(1.0)) == IsometryType::Loxodromic);
    CHECK(classify_isometry(rotation_about_i(3.14159265358979 / 3.0)) == IsometryType::Elliptic);
    CHECK(classify_isometry(IsometryH2::identity()) == IsometryType::Identity);
    CHECK(classify_isometry(IsometryH2(-1, 0, 0, -1)) == IsometryType::Identity);
}

TEST_CASE("matrix equality is up to sign") {
    const IsometryH2 g = axis_translation(0.7);
    const IsometryH2 neg = IsometryH2::unchecked(-g.a, -g.b, -g.c, -g.d);
    CHECK(same_isometry(g, neg));
    CHECK(!same_isometry(g, axis_translation(0.8)));
}

TEST_CASE("translation length and axis of the diagonal loxodromic") {
    const IsometryH2 g = axis_translation(1.0);
    const AxisData ax = translation_length_axis(g);
    CHECK(ax.translation_length == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(ax.attracting.is_infinity());
    CHECK(!ax.repelling.is_infinity());
    CHECK(ax.repelling.value() == doctest::Approx(0.0));

    // tau(g^k) = |k| tau(g)
    const AxisData ax2 = translation_length_axis(power(g, 2));
    CHECK(ax2.translation_length == doctest::Approx(2.0).epsilon(1e-12));
    const AxisData axm3 = translation_length_axis(power(g, -3));
    CHECK(axm3.translation_length == doctest::Approx(3.0).epsilon(1e-12));

    CHECK_THROWS_AS(translation_length_axis(rotation_about_i(1.0)), Error);
}

TEST_CASE("axis is translated forward by tau toward the attracting point") {
    Rng rng(16);
    for (int trial = 0; trial < 100; ++trial) {
        const IsometryH2 g = sample_loxodromic(rng, 1.0);
        const AxisData ax = translation_length_axis(g);
        const H2Point moved = g.apply(ax.axis.point_at(0.0));
        const Projection p = project_to_geodesic(ax.axis, moved);
        CHECK(dist(p.foot, moved) < 1e-8);
        CHECK(p.param == doctest::Approx(ax.translation_length).epsilon(1e-8));
    }
}

TEST_CASE("conjugation preserves translation length") {
    Rng rng(17);
    const IsometryH2 g = sample_loxodromic(rng, 0.5);
    const IsometryH2 h = sample_isometry_near_identity(rng, 3.0);
    const IsometryH2 conj = h * g * h.inverse();
    CHECK(translation_length_axis(conj).translation_length ==
          doctest::Approx(translation_length_axis(g).translation_length).epsilon(1e-9));
}

TEST_CASE("translation length as an orbit growth limit") {
    Rng rng(18);
    for (int trial = 0; trial < 60; ++trial) {
        const IsometryH2 g = sample_loxodromic(rng);
        const double tau = translation_length_axis(g).translation_length;
        const int n = 200;
        const double rate = dist(oI, power(g, n).apply(oI)) / n;
        CHECK(std::abs(rate - tau) <= 1e-3);
    }
}

TEST_CASE("shadow membership basics") {
    CHECK(shadow_contains(oI, o2I, 0.1, BoundaryPointH2::infinity()));
    CHECK(!shadow_contains(oI, o2I, 0.1, BoundaryPointH2(0.0)));
    CHECK_THROWS_AS(shadow_contains(oI, o2I, -1.0, BoundaryPointH2(0.0)), Error);
}

TEST_CASE("shadow membership gives the busemann sandwich") {
    Rng rng(19);
    int members = 0;
    for (int trial = 0; trial < 4000; ++trial) {
        const H2Point x = sample_point(rng);
        const H2Point y = sample_point(rng);
        const double R = rng.uniform(0.3, 3.0);
        const BoundaryPointH2 xi = sample_boundary(rng);
        if (!shadow_contains(x, y, R, xi)) continue;
        ++members;
        const double b = busemann(xi, x, y);
        const double d = dist(x, y);
        CHECK(b >= d - 2.0 * R - 1e-9);
        CHECK(b <= d + 1e-9);
    }
    CHECK(members > 100);  // the sampler must actually hit shadows
}

TEST_CASE("segment projection minimizes the distance over the segment") {
    Rng rng(20);
    for (int trial = 0; trial < 200; ++trial) {
        const H2Point a = sample_point(rng);
        const H2Point b = sample_point(rng);
        if (dist(a, b) < 0.2) continue;
        const H2Point x = sample_point(rng);
        const SegmentH2 seg(a, b);
        const Projection p = project_to_segment(seg, x);
        const double reached = dist(x, p.foot);
        const SegmentChart chart = segment_chart(seg);
        for (int k = 0; k <= 64; ++k) {
            const double t = chart.t_start + (chart.t_end - chart.t_start) * k / 64.0;
            CHECK(reached <= dist(x, chart.carrier.point_at(t)) + 1e-9);
        }
    }
}

TEST_CASE("deep points on a geodesic approach its forward endpoint") {
    Rng rng(27);
    for (int trial = 0; trial < 200; ++trial) {
        const GeodesicH2 g = sample_geodesic(rng);
        const H2Point near = g.point_at(-1.0);
        const H2Point far = g.point_at(25.0);
        const BoundaryPointH2 fwd = forward_endpoint(near, far);
        CHECK(chordal(fwd, g.endpoint(1)) < 1e-8);
    }
}

TEST_CASE("rays and forward endpoints") {
    const BoundaryPointH2 fwd = forward_endpoint(oI, o2I);
    CHECK(fwd.is_infinity());
    const BoundaryPointH2 down = forward_endpoint(o2I, oI);
    CHECK(down.value() == doctest::Approx(0.0));

    // Ray [i, 0) passes through points below i on the axis.
    const RayH2 r = ray_from(oI, BoundaryPointH2(0.0));
    CHECK(dist_to_ray(r, H2Point(0.0, 0.5)) < 1e-9);
    CHECK(dist_to_ray(r, H2Point(0.0, 4.0)) == doctest::Approx(std::log(4.0)).epsilon(1e-9));
}
