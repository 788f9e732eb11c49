#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "horo/alignment.hpp"
#include "horo/rng.hpp"
#include "horo/verify.hpp"
#include "oracles.hpp"

using namespace horo;

namespace {

const H2Point oI(0.0, 1.0);
const GeodesicH2 kAxis(BoundaryPointH2(0.0), BoundaryPointH2::infinity());

H2Point fiber(const GeodesicH2& gamma, double s, double h, double side) {
    const double phi = std::atan(std::sinh(h));
    H2Point p;
    p.re = std::exp(s) * std::sin(phi) * side;
    p.im = std::exp(s) * std::cos(phi);
    return gamma.chart().apply(p);
}

}  // namespace

TEST_CASE("alignment defect on the imaginary axis matches the projection oracle") {
    const SegmentH2 seg(oI, H2Point(0.0, std::exp(4.0)));
    const AlignmentReport rep = is_aligned(H2Point(-1.0, 1.0), seg, 1.0);
    CHECK(rep.aligned);
    CHECK(rep.left_defect == doctest::Approx(std::log(std::sqrt(2.0))).epsilon(1e-10));

    // Golden-section oracle for the same foot.
    const double t_star = oracle::golden_section_param(kAxis, H2Point(-1.0, 1.0));
    CHECK(rep.left_defect == doctest::Approx(std::abs(t_star)).epsilon(1e-7));

    // The segment start itself is aligned at any positive threshold.
    CHECK(is_aligned(oI, seg, 0.01).aligned);
    CHECK(is_aligned(oI, seg, 0.01).left_defect == doctest::Approx(0.0));
}

TEST_CASE("alignment rejects degenerate segments and negative constants") {
    CHECK_THROWS_AS(is_aligned(oI, SegmentH2(oI, oI), 1.0), Error);
    CHECK_THROWS_AS(is_aligned(oI, SegmentH2(oI, H2Point(0.0, 2.0)), -1.0), Error);
}

TEST_CASE("alignment dichotomy: the two one-sided defects sum to the length") {
    Rng rng(31);
    for (int trial = 0; trial < 2000; ++trial) {
        const GeodesicH2 gamma = sample_geodesic(rng);
        const double length = rng.uniform(0.5, 8.0);
        const double t0 = rng.uniform(-2.0, 2.0);
        const SegmentH2 seg(gamma.point_at(t0), gamma.point_at(t0 + length));
        const H2Point x = sample_point(rng);
        const double D = rng.uniform(0.0, length);
        const bool tail = is_aligned(x, seg.reversed(), D).aligned;
        const bool head = is_aligned(x, seg, length - D).aligned;
        CHECK(!(tail && head));
    }
}

TEST_CASE("far point along the axis fails exactly one side of the dichotomy") {
    const SegmentH2 seg(oI, H2Point(0.0, std::exp(4.0)));
    const H2Point far(0.0, std::exp(8.0));
    CHECK(!is_aligned(far, seg, 1.0).aligned);            // lands at the far end
    CHECK(is_aligned(far, seg.reversed(), 1.0).aligned);  // aligned from the other side
}

TEST_CASE("triple alignment is the two-sided conjunction and is reversal-symmetric") {
    Rng rng(32);
    for (int trial = 0; trial < 200; ++trial) {
        const GeodesicH2 gamma = sample_geodesic(rng);
        const double t0 = rng.uniform(-2.0, 0.0);
        const SegmentH2 seg(gamma.point_at(t0), gamma.point_at(t0 + rng.uniform(1.0, 6.0)));
        const H2Point w = sample_point(rng);
        const H2Point z = sample_point(rng);
        const double K = rng.uniform(0.2, 4.0);
        const bool triple = is_aligned_triple(w, seg, z, K);
        CHECK(triple == (is_aligned(w, seg, K).aligned && is_aligned(z, seg.reversed(), K).aligned));
        CHECK(triple == is_aligned_triple(z, seg.reversed(), w, K));
    }
}

TEST_CASE("boundary witness in the segment-start direction has zero defect") {
    const SegmentH2 seg(oI, H2Point(0.0, std::exp(2.0)));
    const AlignmentReport rep = is_aligned(BoundaryPointH2(0.0), seg, 0.5);
    CHECK(rep.aligned);
    CHECK(rep.left_defect < 1e-8);
}

TEST_CASE("boundary projection onto a vertical segment") {
    const SegmentH2 seg(oI, H2Point(0.0, 4.0));
    const H2Point top = boundary_projection(seg, BoundaryPointH2::infinity());
    CHECK(top.re == doctest::Approx(0.0));
    CHECK(top.im == doctest::Approx(4.0).epsilon(1e-9));
    const H2Point bottom = boundary_projection(seg, BoundaryPointH2(0.0));
    CHECK(bottom.im == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("boundary projection on the unit semicircle matches the marching oracle") {
    const SegmentH2 seg(H2Point(-std::sqrt(3.0) / 2.0, 0.5), H2Point(std::sqrt(3.0) / 2.0, 0.5));
    const BoundaryPointH2 xi(3.0);
    const H2Point foot = boundary_projection(seg, xi);

    // Oracle: march along the ray to xi and project densely.
    const RayH2 ray = ray_from(seg.start, xi);
    H2Point oracle_foot = seg.start;
    for (double t = 1.0; t <= 48.0; t += 1.0) {
        oracle_foot = project_to_segment(seg, ray.carrier.point_at(ray.start_param + t)).foot;
    }
    CHECK(dist(foot, oracle_foot) < 1e-6);
    CHECK(dist(foot, seg.end) < dist(foot, seg.start));  // lands toward the endpoint nearest 3
}

TEST_CASE("contracting decomposition of the inversion-symmetric configuration") {
    // x and y = 1/conj(x) are swapped by the inversion fixing the unit
    // circle, which reverses the imaginary axis; p and q must be swapped too.
    const double theta = 3.14159265358979323846 / 3.0;
    const H2Point x(3.0 * std::cos(theta), 3.0 * std::sin(theta));
    const H2Point y(std::cos(theta) / 3.0, std::sin(theta) / 3.0);
    const auto [p, q] = contracting_decomposition(kAxis, x, y);
    const double norm2 = p.re * p.re + p.im * p.im;
    CHECK(q.re == doctest::Approx(p.re / norm2).epsilon(1e-8));
    CHECK(q.im == doctest::Approx(p.im / norm2).epsilon(1e-8));
}

TEST_CASE("contracting decomposition with x on the geodesic keeps p = x") {
    const H2Point x(0.0, 1.0);
    const H2Point y(40.0, 1.0);
    const auto [p, q] = contracting_decomposition(kAxis, x, y);
    CHECK(dist(p, x) < 1e-9);
    (void)q;
}

TEST_CASE("contracting decomposition requires a projection gap above 2") {
    CHECK_THROWS_AS(contracting_decomposition(kAxis, H2Point(1.0, 1.0), H2Point(1.1, 1.0)), Error);
}

TEST_CASE("contracting decomposition postconditions on seeded instances") {
    Rng rng(33);
    for (int trial = 0; trial < 300; ++trial) {
        const GeodesicH2 gamma = sample_geodesic(rng);
        const double tx = rng.uniform(-4.0, 4.0);
        const double ty = tx + (rng.coin() ? 1.0 : -1.0) * rng.uniform(2.05, 8.0);
        const H2Point x = fiber(gamma, tx, rng.uniform(0.0, 4.0), rng.coin() ? 1.0 : -1.0);
        const H2Point y = fiber(gamma, ty, rng.uniform(0.0, 4.0), rng.coin() ? 1.0 : -1.0);
        const Projection px = project_to_geodesic(gamma, x);
        const Projection py = project_to_geodesic(gamma, y);
        if (std::abs(px.param - py.param) <= 2.0) continue;

        const auto [p, q] = contracting_decomposition(gamma, x, y);
        CHECK(dist_to_segment(SegmentH2(x, y), p) < 1e-6);
        CHECK(dist_to_segment(SegmentH2(x, y), q) < 1e-6);
        CHECK(dist(x, p) <= dist(x, q) + 1e-9);
        CHECK(dist(px.foot, p) < 2.0 + 1e-6);
        CHECK(dist(py.foot, q) < 2.0 + 1e-6);
    }
}

TEST_CASE("squeeze estimate at epsilon = 1 stays below L = 2") {
    const SqueezeEstimate est = squeeze_estimate(1.0, 10000, 17);
    CHECK(!est.cap_reached);
    CHECK(est.L <= 2.0);
    CHECK(est.worst_midpoint_distance <= 1.0);
}

TEST_CASE("squeeze estimate is monotone in epsilon") {
    const SqueezeEstimate tight = squeeze_estimate(0.25, 2000, 17);
    const SqueezeEstimate loose = squeeze_estimate(1.0, 2000, 17);
    CHECK(tight.L >= loose.L);
    CHECK_THROWS_AS(squeeze_estimate(0.0, 10, 1), Error);
    CHECK_THROWS_AS(squeeze_estimate(1.5, 10, 1), Error);
}

TEST_CASE("projection defect vanishes on the geodesic and at the foot") {
    CHECK(projection_defect_check(kAxis, H2Point(0.0, 2.0), 3.0) == doctest::Approx(0.0));
    const H2Point x(4.0, 2.0);
    const double t = project_to_geodesic(kAxis, x).param;
    CHECK(projection_defect_check(kAxis, x, t) == doctest::Approx(0.0));
}

TEST_CASE("projection defect stays below 1.3 on seeded instances") {
    Rng rng(34);
    double worst = 0.0;
    for (int trial = 0; trial < 5000; ++trial) {
        const GeodesicH2 gamma = sample_geodesic(rng);
        const H2Point x = sample_point(rng);
        const double t = project_to_geodesic(gamma, x).param;
        worst = std::max(worst, projection_defect_check(gamma, x, t + rng.uniform(-20.0, 20.0)));
    }
    CHECK(worst <= 1.3);
    CHECK(worst <= std::log(4.0) + 1e-9);  // the model-exact supremum is 2 ln 2
}

TEST_CASE("shadow/alignment conversion on collinear points in order") {
    const H2Point x(0.0, 1.0), y(0.0, std::exp(4.0)), z(0.0, std::exp(8.0)),
        w(0.0, std::exp(12.0));
    const double R = 1.2;
    CHECK(shadow_contains(x, y, R, w));
    CHECK(shadow_contains(y, z, R, w));
    CHECK(is_aligned_triple(x, SegmentH2(y, z), w, 6.0 * R));
    const ShadowAlignmentCheck check = verify_shadow_alignment(x, y, z, w, R);
    CHECK(check.forward_ok);
    CHECK(check.backward_ok);
}

TEST_CASE("shadow/alignment conversion is vacuous when w avoids both shadows") {
    const H2Point x(0.0, 1.0), y(0.0, std::exp(4.0)), z(0.0, std::exp(8.0));
    const H2Point w(0.05, 0.05);  // behind x, far from both shadows
    CHECK(!shadow_contains(x, y, 1.2, w));
    const ShadowAlignmentCheck check = verify_shadow_alignment(x, y, z, w, 1.2);
    CHECK(check.forward_ok);
    CHECK_THROWS_AS(verify_shadow_alignment(x, y, z, w, 0.9), Error);
}

TEST_CASE("axis constant for a basepoint on the axis is the margin alone") {
    const IsometryH2 g = axis_translation(1.5);
    const AxisConstant ac = axis_constant(g, H2Point(0.0, 2.0), 10);
    CHECK(ac.C == doctest::Approx(0.1).epsilon(1e-9));
}

TEST_CASE("axis constant of a power never exceeds the base constant") {
    Rng rng(35);
    for (int trial = 0; trial < 20; ++trial) {
        const IsometryH2 g = sample_loxodromic(rng, 0.8);
        const H2Point basepoint = sample_point(rng);
        const AxisConstant base = axis_constant(g, basepoint, 12);
        for (int k = 2; k <= 3; ++k) {
            // The g^k orbit is a subset of the g orbit; 1e-6 absorbs the
            // parametrization drift of the re-derived axis chart.
            const AxisConstant pow = axis_constant(power(g, k), basepoint, 12 / k);
            CHECK(pow.C <= base.C + 1e-6);
        }
    }
}

TEST_CASE("axis constant tracks the basepoint distance from the axis") {
    const IsometryH2 g = axis_translation(2.0);
    const double h = 1.0;
    const double phi = std::atan(std::sinh(h));
    const H2Point basepoint(std::sin(phi) * 2.0, std::cos(phi) * 2.0);  // dist 1 from axis
    const AxisConstant ac = axis_constant(g, basepoint, 10);
    const double direct = dist(basepoint, project_to_geodesic(ac.axis, basepoint).foot);
    CHECK(direct == doctest::Approx(1.0).epsilon(1e-9));
    // A translation carries the basepoint along its own distance-h fiber,
    // so the orbit bound is h exactly; slack for one widening step.
    CHECK(ac.C <= h + 0.1 + 0.25 + 1e-9);
    CHECK(ac.C >= h);
}

TEST_CASE("extension select on the axis picks the identity candidate") {
    const IsometryH2 phi1 = axis_translation(2.0);
    const ProductIsometry phi(std::vector<IsometryH2>{phi1});
    const std::vector<ProductIsometry> candidates{ProductIsometry::identity(1)};
    const ProductPoint basepoint(std::vector<H2Point>{H2Point(0.0, 1.0)});

    const AxisData ax = translation_length_axis(phi1);
    ProductBoundaryPoint rep(std::vector<BoundaryPointH2>{ax.repelling});
    ProductBoundaryPoint att(std::vector<BoundaryPointH2>{ax.attracting});

    // Repelling behind the segment, attracting ahead: the identity aligns.
    CHECK(extension_select(phi, candidates, ProductTarget(rep), ProductTarget(att), 4, 1.0,
                           basepoint) == 0);
    // Attracting on the left lands the projection at the far end.
    CHECK_THROWS_AS(extension_select(phi, candidates, ProductTarget(att), ProductTarget(rep), 4,
                                     0.5, basepoint),
                    Error);
}

TEST_CASE("extension select finds a candidate from an independent loxodromic") {
    const GroupSpec fixture = bundled_single_factor();
    const IsometryH2 phi1 = fixture.generators[0].components[0];
    const IsometryH2 h = fixture.generators[1].components[0];
    const ProductIsometry phi(std::vector<IsometryH2>{phi1});
    const std::vector<ProductIsometry> candidates{
        ProductIsometry::identity(1), ProductIsometry(std::vector<IsometryH2>{h}),
        ProductIsometry(std::vector<IsometryH2>{h * h})};
    const ProductPoint basepoint(std::vector<H2Point>{fixture.basepoint.components[0]});

    Rng rng(36);
    // Empirical alignment constant for this candidate set (exhaustive
    // evaluation over the sampled targets); the hostile boundary pair is
    // checked on the range where doubles still resolve the separations.
    const double alpha = 13.0;
    for (int n = 1; n <= 20; ++n) {
        if (n <= 8) {
            const AxisData ax = translation_length_axis(phi1);
            const ProductTarget x{
                ProductBoundaryPoint(std::vector<BoundaryPointH2>{ax.attracting})};
            const ProductTarget y{
                ProductBoundaryPoint(std::vector<BoundaryPointH2>{ax.repelling})};
            CHECK_NOTHROW(extension_select(phi, candidates, x, y, n, alpha, basepoint));
        }
        const ProductTarget xr{ProductPoint(std::vector<H2Point>{sample_point(rng)})};
        const ProductTarget yr{ProductPoint(std::vector<H2Point>{sample_point(rng)})};
        CHECK_NOTHROW(extension_select(phi, candidates, xr, yr, n, alpha, basepoint));
    }
}

TEST_CASE("ideal right-angle triangle distance: the honest value, two routes") {
    // Vertex i, ideal vertices 1 and infinity; opposite side (1, infinity).
    const GeodesicH2 opposite(BoundaryPointH2(1.0), BoundaryPointH2::infinity());
    const double measured = dist_to_geodesic(opposite, H2Point(0.0, 1.0));
    const double oracle_param = oracle::golden_section_param(opposite, H2Point(0.0, 1.0));
    const double via_minimization = dist(H2Point(0.0, 1.0), opposite.point_at(oracle_param));
    CHECK(measured == doctest::Approx(std::log(1.0 + std::sqrt(2.0))).epsilon(1e-12));
    CHECK(via_minimization == doctest::Approx(measured).epsilon(1e-9));
}
