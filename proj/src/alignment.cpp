#include "horo/alignment.hpp"

#include <algorithm>
#include <cmath>

#include "horo/rng.hpp"

namespace horo {

namespace {

// log of hypot(e^la, e^lb) computed in the log domain.
double log_hypot_exp(double la, double lb) {
    const double m = std::max(la, lb);
    if (std::isinf(m) && m < 0.0) return m;
    const double n = std::min(la, lb);
    return m + 0.5 * std::log1p(std::exp(2.0 * (n - m)));
}

// Carrier parameter of the projection of the ray point at parameter u,
// stable for arbitrarily large u. N maps the ray chart to the carrier chart.
double projected_param(const IsometryH2& N, double u) {
    // N(i e^u) has |.| = hypot(a e^u, b) / hypot(c e^u, d).
    const double la = std::log(std::abs(N.a)), lb = std::log(std::abs(N.b));
    const double lc = std::log(std::abs(N.c)), ld = std::log(std::abs(N.d));
    return log_hypot_exp(la + u, lb) - log_hypot_exp(lc + u, ld);
}

H2Point target_point(const SegmentH2& seg, const PointOrBoundary& w) {
    if (std::holds_alternative<H2Point>(w)) {
        return project_to_segment(seg, std::get<H2Point>(w)).foot;
    }
    return boundary_projection(seg, std::get<BoundaryPointH2>(w));
}

// Sample a point whose projection onto gamma is gamma(s), at hyperbolic
// height h on side sign.
H2Point fiber_point(const GeodesicH2& gamma, double s, double h, double sign) {
    const double phi = std::atan(std::sinh(h));
    H2Point axis_chart_point;
    axis_chart_point.re = std::exp(s) * std::sin(phi) * sign;
    axis_chart_point.im = std::exp(s) * std::cos(phi);
    return gamma.chart().apply(axis_chart_point);
}

}  // namespace

AlignmentReport is_aligned(const PointOrBoundary& w, const SegmentH2& seg, double K) {
    if (seg.degenerate()) {
        raise(ErrorCode::DegenerateSegment, "alignment requires a nondegenerate segment");
    }
    if (K < 0.0) raise(ErrorCode::InvalidArgument, "alignment constant must be nonnegative");
    AlignmentReport report;
    report.K = K;
    report.left_defect = dist(target_point(seg, w), seg.start);
    report.right_defect = 0.0;
    report.aligned = std::max(report.left_defect, report.right_defect) < K;
    return report;
}

bool is_aligned_triple(const PointOrBoundary& w, const SegmentH2& seg, const PointOrBoundary& z,
                       double K) {
    return is_aligned(w, seg, K).aligned && is_aligned(z, seg.reversed(), K).aligned;
}

H2Point boundary_projection(const SegmentH2& seg, const BoundaryPointH2& xi) {
    const SegmentChart chart = segment_chart(seg);
    const double lo = std::min(chart.t_start, chart.t_end);
    const double hi = std::max(chart.t_start, chart.t_end);
    const RayH2 ray = ray_from(seg.start, xi);
    const IsometryH2 N = chart.carrier.inverse_chart() * ray.carrier.chart();

    double prev = std::clamp(projected_param(N, ray.start_param + 1.0), lo, hi);
    for (double t = 2.0; t <= 65536.0; t *= 2.0) {
        const double cur = std::clamp(projected_param(N, ray.start_param + t), lo, hi);
        if (std::abs(cur - prev) < Tol::foot_limit) {
            return chart.carrier.point_at(cur);
        }
        prev = cur;
    }
    raise(ErrorCode::NoConvergence, "boundary projection feet not Cauchy by t = 2^16");
}

std::pair<H2Point, H2Point> contracting_decomposition(const GeodesicH2& gamma, const H2Point& x,
                                                      const H2Point& y) {
    const Projection px = project_to_geodesic(gamma, x);
    const Projection py = project_to_geodesic(gamma, y);
    if (std::abs(px.param - py.param) <= 2.0) {
        raise(ErrorCode::ProjectionsTooClose,
              "contracting decomposition requires projections more than 2 apart");
    }
    const SegmentH2 seg(x, y);
    // In this model the foot parameter is monotone along any geodesic, so
    // the nearest points of [x, y] to the two feet bound the projected
    // prefixes: everything before p projects between proj(x) and proj(p).
    const H2Point p = project_to_segment(seg, px.foot).foot;
    const H2Point q = project_to_segment(seg, py.foot).foot;
    return {p, q};
}

SqueezeEstimate squeeze_estimate(double epsilon, long long trials, std::uint64_t seed) {
    if (!(epsilon > 0.0) || epsilon > 1.0) {
        raise(ErrorCode::InvalidArgument, "squeeze_estimate expects epsilon in (0, 1]");
    }
    if (trials < 1) raise(ErrorCode::InvalidArgument, "squeeze_estimate expects trials >= 1");

    SqueezeEstimate estimate;
    estimate.epsilon = epsilon;

    constexpr double kStep = 0.25;
    constexpr double kCap = 64.0;

    for (double L = kStep;; L += kStep) {
        if (L > kCap) {
            estimate.L = kCap;
            estimate.cap_reached = true;
            return estimate;
        }
        const std::uint64_t grid_index = static_cast<std::uint64_t>(L / kStep);

        double worst = 0.0;
        bool ok = true;
        for (long long trial = 0; trial < trials && ok; ++trial) {
            Rng rng(seed ^ (grid_index * 0x100000000ULL),
                    static_cast<std::uint64_t>(trial));
            const GeodesicH2 gamma = sample_geodesic(rng);
            const double t = rng.uniform(-2.0, 2.0);
            const double a = L + 2.0 * std::abs(rng.normal());
            const double b = L + 2.0 * std::abs(rng.normal());
            const H2Point x =
                fiber_point(gamma, t - a, rng.uniform(0.0, 12.0), rng.coin() ? 1.0 : -1.0);
            const H2Point y =
                fiber_point(gamma, t + b, rng.uniform(0.0, 12.0), rng.coin() ? 1.0 : -1.0);
            const double d = dist_to_segment(SegmentH2(x, y), gamma.point_at(t));
            worst = std::max(worst, d);
            if (d > epsilon) ok = false;
        }
        if (!ok) continue;

        // Four-point difference bound at this L on a fresh stream.
        bool four_point_ok = true;
        for (long long trial = 0; trial < trials && four_point_ok; ++trial) {
            Rng rng(seed ^ 0x5eedf00dULL ^ (grid_index * 0x100000000ULL),
                    static_cast<std::uint64_t>(trial));
            const GeodesicH2 gamma = sample_geodesic(rng);
            const double t = rng.uniform(-2.0, 2.0);
            H2Point xs[2], ys[2];
            for (int i = 0; i < 2; ++i) {
                xs[i] = fiber_point(gamma, t - L - 2.0 * std::abs(rng.normal()),
                                    rng.uniform(0.0, 12.0), rng.coin() ? 1.0 : -1.0);
                ys[i] = fiber_point(gamma, t + L + 2.0 * std::abs(rng.normal()),
                                    rng.uniform(0.0, 12.0), rng.coin() ? 1.0 : -1.0);
            }
            const double lhs = dist(xs[0], ys[0]) - dist(xs[0], ys[1]);
            const double rhs = dist(xs[1], ys[0]) - dist(xs[1], ys[1]);
            if (std::abs(lhs - rhs) > 8.0 * epsilon) four_point_ok = false;
        }
        if (!four_point_ok) continue;

        estimate.L = L;
        estimate.samples = 2 * trials;
        estimate.worst_midpoint_distance = worst;
        return estimate;
    }
}

double projection_defect_check(const GeodesicH2& gamma, const H2Point& x, double s) {
    const Projection p = project_to_geodesic(gamma, x);
    return std::abs(dist(x, gamma.point_at(s)) - dist(x, p.foot) - std::abs(p.param - s));
}

ShadowAlignmentCheck verify_shadow_alignment(const H2Point& x, const H2Point& y, const H2Point& z,
                                             const H2Point& w, double R) {
    if (!(R > 1.0)) {
        raise(ErrorCode::RadiusTooSmall, "shadow/alignment conversion requires R > 1");
    }
    ShadowAlignmentCheck out;

    const bool in_both = shadow_contains(x, y, R, w) && shadow_contains(y, z, R, w);
    out.forward_ok = !in_both || is_aligned_triple(x, SegmentH2(y, z), w, 6.0 * R);

    const bool aligned = is_aligned_triple(x, SegmentH2(y, z), w, R) && dist(y, z) > 3.0 * R;
    out.backward_ok =
        !aligned || (shadow_contains(x, y, 3.0 * R, w) && shadow_contains(y, z, 3.0 * R, w));
    return out;
}

AxisConstant axis_constant(const IsometryH2& g, const H2Point& basepoint, int kmax) {
    const AxisData ax = translation_length_axis(g);
    const double tau = ax.translation_length;
    const double s0 = project_to_geodesic(ax.axis, basepoint).param;

    double orbit_bound = 0.0;
    IsometryH2 fwd = IsometryH2::identity();
    IsometryH2 bwd = IsometryH2::identity();
    for (int k = 0; k <= kmax; ++k) {
        orbit_bound = std::max(orbit_bound,
                               dist(fwd.apply(basepoint), ax.axis.point_at(s0 + tau * k)));
        orbit_bound = std::max(orbit_bound,
                               dist(bwd.apply(basepoint), ax.axis.point_at(s0 - tau * k)));
        fwd = fwd * g;
        bwd = bwd * g.inverse();
    }

    double C = orbit_bound + 0.1;
    // Alignment windows: if (x, [x0, g^k x0]) fails to be K-aligned the foot
    // lies past K - C along the axis, and K-alignment with K <= tau k - C
    // pins it below K + C.
    for (;; C += 0.25) {
        bool ok = true;
        Rng rng(0xa115c0ULL);
        for (int trial = 0; trial < 64 && ok; ++trial) {
            const int k = 1 + static_cast<int>(rng.below(std::max(1, kmax)));
            const SegmentH2 seg(basepoint, power(g, k).apply(basepoint));
            if (seg.degenerate()) continue;
            const H2Point x = sample_point(rng);
            const double foot = project_to_geodesic(ax.axis, x).param - s0;

            const double K2 = C + rng.uniform(0.0, 5.0);
            if (!is_aligned(x, seg, K2).aligned && foot < K2 - C) ok = false;

            const double upper = tau * k - C;
            if (upper > 0.0) {
                const double K3 = rng.uniform(0.0, upper);
                if (is_aligned(x, seg, K3).aligned && foot > K3 + C) ok = false;
            }
        }
        if (ok) break;
    }
    return AxisConstant{C, g, ax.axis, basepoint};
}

std::size_t extension_select(const ProductIsometry& phi,
                             const std::vector<ProductIsometry>& candidates,
                             const ProductTarget& x, const ProductTarget& y, int n, double alpha,
                             const ProductPoint& basepoint) {
    if (candidates.empty()) {
        raise(ErrorCode::InvalidArgument, "extension_select needs at least one candidate");
    }
    if (phi.rank() == 0 || phi.rank() != basepoint.rank()) {
        raise(ErrorCode::DimensionMismatch, "extension_select rank mismatch");
    }
    for (std::size_t i = 0; i < phi.rank(); ++i) {
        if (classify_isometry(phi.components[i]) != IsometryType::Loxodromic) {
            raise(ErrorCode::NotLoxodromic,
                  "extension_select requires phi loxodromic in every factor");
        }
    }

    const IsometryH2& phi1 = phi.components[0];
    const H2Point x0 = basepoint.components[0];
    const IsometryH2 phi1n = power(phi1, n);

    auto first_factor = [](const ProductTarget& t) -> PointOrBoundary {
        if (std::holds_alternative<ProductPoint>(t)) {
            return std::get<ProductPoint>(t).components[0];
        }
        return std::get<ProductBoundaryPoint>(t).components[0];
    };
    const PointOrBoundary left = first_factor(x);
    const PointOrBoundary right_seed = first_factor(y);

    for (std::size_t idx = 0; idx < candidates.size(); ++idx) {
        const IsometryH2& a1 = candidates[idx].components[0];
        const SegmentH2 seg(a1.apply(x0), (a1 * phi1n).apply(x0));
        if (seg.degenerate()) continue;
        const IsometryH2 m = a1 * phi1n * a1;
        PointOrBoundary right;
        if (std::holds_alternative<H2Point>(right_seed)) {
            right = m.apply(std::get<H2Point>(right_seed));
        } else {
            right = m.apply(std::get<BoundaryPointH2>(right_seed));
        }
        if (is_aligned_triple(left, seg, right, alpha)) return idx;
    }
    raise(ErrorCode::NoCandidateAligns,
          "no candidate aligns the extension triple in the first factor");
}

}  // namespace horo
