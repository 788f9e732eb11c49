#include "horo/halfplane.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace horo {

namespace {

bool finite(double v) { return std::isfinite(v); }

}  // namespace

H2Point::H2Point(double re_, double im_) : re(re_), im(im_) {
    if (!finite(re) || !finite(im) || im <= 0.0) {
        raise(ErrorCode::InvalidArgument,
              "H2Point requires finite coordinates with im > 0");
    }
}

BoundaryPointH2::BoundaryPointH2(double finite_value) : infinite_(false), value_(finite_value) {
    if (!finite(finite_value)) {
        raise(ErrorCode::InvalidArgument, "finite boundary point must have a finite value");
    }
}

BoundaryPointH2 BoundaryPointH2::from_homogeneous(double p, double q) {
    double scale = std::hypot(p, q);
    if (scale == 0.0 || !finite(scale)) {
        raise(ErrorCode::InvalidArgument, "invalid homogeneous boundary coordinates");
    }
    if (std::abs(q) <= Tol::homogeneous_inf * scale) {
        return infinity();
    }
    return BoundaryPointH2(p / q);
}

double BoundaryPointH2::value() const {
    if (infinite_) {
        raise(ErrorCode::InvalidArgument, "point at infinity has no finite value");
    }
    return value_;
}

double chordal(const BoundaryPointH2& u, const BoundaryPointH2& v) {
    if (u.is_infinity() && v.is_infinity()) return 0.0;
    if (u.is_infinity()) return 2.0 / std::hypot(1.0, v.value());
    if (v.is_infinity()) return 2.0 / std::hypot(1.0, u.value());
    return 2.0 * std::abs(u.value() - v.value()) /
           (std::hypot(1.0, u.value()) * std::hypot(1.0, v.value()));
}

bool boundary_equal(const BoundaryPointH2& u, const BoundaryPointH2& v, double tol) {
    return chordal(u, v) <= tol;
}

double boundary_angle(const BoundaryPointH2& u) {
    if (u.is_infinity()) return 0.0;
    // Cayley transform C(u) = (u - i) / (u + i) sends R u {inf} to the circle.
    const double x = u.value();
    const double den = x * x + 1.0;
    const double cre = (x * x - 1.0) / den;
    const double cim = -2.0 * x / den;
    return std::atan2(cim, cre);
}

BoundaryPointH2 boundary_from_angle(double theta) {
    // Inverse Cayley: i (1 + e^{i theta}) / (1 - e^{i theta}).
    const double ce = std::cos(theta), se = std::sin(theta);
    const double p = -se;         // numerator of the real value after simplification
    const double q = 1.0 - ce;    // u = sin(theta) / (cos(theta) - 1), poles at theta = 0
    if (std::abs(q) <= 1e-15 * std::max(1.0, std::abs(p))) return BoundaryPointH2::infinity();
    return BoundaryPointH2(p / q);
}

IsometryH2::IsometryH2(double a_, double b_, double c_, double d_) : a(a_), b(b_), c(c_), d(d_) {
    const double scale = std::max({1.0, a * a, b * b, c * c, d * d});
    const double det = a * d - b * c;
    if (!finite(det) || std::abs(det - 1.0) > Tol::det * scale) {
        raise(ErrorCode::InvalidArgument, "isometry matrix must have determinant 1");
    }
}

IsometryH2 IsometryH2::unchecked(double a_, double b_, double c_, double d_) {
    IsometryH2 g;
    g.a = a_;
    g.b = b_;
    g.c = c_;
    g.d = d_;
    return g;
}

H2Point IsometryH2::apply(const H2Point& z) const {
    // Im(gz) = Im(z) / |cz + d|^2 keeps the image exactly in the half-plane.
    const double x = z.re, y = z.im;
    const double den = (c * x + d) * (c * x + d) + (c * y) * (c * y);
    const double xr = (a * c * (x * x + y * y) + (a * d + b * c) * x + b * d) / den;
    const double yr = y / den;
    H2Point out;
    out.re = xr;
    out.im = yr;
    return out;
}

BoundaryPointH2 IsometryH2::apply(const BoundaryPointH2& u) const {
    double p, q;
    if (u.is_infinity()) {
        p = 1.0;
        q = 0.0;
    } else {
        const double s = std::hypot(1.0, u.value());
        p = u.value() / s;
        q = 1.0 / s;
    }
    return BoundaryPointH2::from_homogeneous(a * p + b * q, c * p + d * q);
}

IsometryH2 operator*(const IsometryH2& g, const IsometryH2& h) {
    return IsometryH2::unchecked(g.a * h.a + g.b * h.c, g.a * h.b + g.b * h.d,
                                 g.c * h.a + g.d * h.c, g.c * h.b + g.d * h.d);
}

bool same_isometry(const IsometryH2& g, const IsometryH2& h, double tol) {
    auto normalized = [](const IsometryH2& m) {
        double e[4] = {m.a, m.b, m.c, m.d};
        double sign = 1.0;
        for (double v : e) {
            if (std::abs(v) > 1e-12) {
                sign = v > 0.0 ? 1.0 : -1.0;
                break;
            }
        }
        for (double& v : e) v *= sign;
        return std::array<double, 4>{e[0], e[1], e[2], e[3]};
    };
    const auto ge = normalized(g), he = normalized(h);
    double worst = 0.0;
    for (int i = 0; i < 4; ++i) worst = std::max(worst, std::abs(ge[i] - he[i]));
    return worst <= tol;
}

IsometryH2 power(const IsometryH2& g, long long k) {
    IsometryH2 base = k >= 0 ? g : g.inverse();
    unsigned long long n = k >= 0 ? static_cast<unsigned long long>(k)
                                  : static_cast<unsigned long long>(-k);
    IsometryH2 out = IsometryH2::identity();
    while (n > 0) {
        if (n & 1ULL) out = out * base;
        base = base * base;
        n >>= 1ULL;
    }
    return out;
}

const char* to_string(IsometryType t) {
    switch (t) {
        case IsometryType::Identity: return "identity";
        case IsometryType::Elliptic: return "elliptic";
        case IsometryType::Parabolic: return "parabolic";
        case IsometryType::Loxodromic: return "loxodromic";
    }
    return "unknown";
}

double dist(const H2Point& x, const H2Point& y) {
    // sinh(d/2) = |x - y| / (2 sqrt(im x * im y)), exact in this model and
    // stable for both tiny and orbit-scale separations.
    const double chord = std::hypot(x.re - y.re, x.im - y.im);
    return 2.0 * std::asinh(chord / (2.0 * std::sqrt(x.im) * std::sqrt(y.im)));
}

GeodesicH2::GeodesicH2(const BoundaryPointH2& from, const BoundaryPointH2& to)
    : from_(from), to_(to) {
    if (boundary_equal(from, to)) {
        raise(ErrorCode::CoincidentEndpoints, "geodesic endpoints coincide");
    }
    // Build the chart M with gamma(t) = M . (i e^t): M(0) = from, M(inf) = to,
    // M(i) = apex (or height-one point of a vertical line).
    if (from.is_infinity()) {
        const double v = to.value();
        chart_ = IsometryH2::unchecked(v, -1.0, 1.0, 0.0);
    } else if (to.is_infinity()) {
        const double v = from.value();
        chart_ = IsometryH2::unchecked(1.0, v, 0.0, 1.0);
    } else {
        const double p = from.value(), q = to.value();
        if (q > p) {
            const double s = std::sqrt(q - p);
            chart_ = IsometryH2::unchecked(q / s, p / s, 1.0 / s, 1.0 / s);
        } else {
            const double s = std::sqrt(p - q);
            chart_ = IsometryH2::unchecked(q / s, -p / s, 1.0 / s, -1.0 / s);
        }
    }
    inv_ = chart_.inverse();
}

H2Point GeodesicH2::point_at(double t) const {
    H2Point axis_point;
    axis_point.re = 0.0;
    axis_point.im = std::exp(t);
    return chart_.apply(axis_point);
}

bool SegmentH2::degenerate(double tol) const {
    return dist(start, end) <= tol;
}

GeodesicH2 geodesic_between(const BoundaryPointH2& x, const BoundaryPointH2& y) {
    return GeodesicH2(x, y);
}

SegmentH2 segment_between(const H2Point& x, const H2Point& y) {
    return SegmentH2(x, y);
}

BoundaryPointH2 forward_endpoint(const H2Point& x, const H2Point& y) {
    const double dx = y.re - x.re;
    const double scale = std::max({1.0, std::abs(x.re), std::abs(y.re), x.im, y.im});
    if (std::abs(dx) <= 1e-14 * scale) {
        return y.im > x.im ? BoundaryPointH2::infinity() : BoundaryPointH2(x.re);
    }
    const double nx = x.re * x.re + x.im * x.im;
    const double ny = y.re * y.re + y.im * y.im;
    const double c = (nx - ny) / (2.0 * (x.re - y.re));
    const double rho = std::hypot(x.re - c, x.im);
    // Forward along the arc means the angle atan2(im, re - c) decreasing
    // toward 0 (endpoint c + rho) or increasing toward pi (endpoint c - rho).
    const double ax = std::atan2(x.im, x.re - c);
    const double ay = std::atan2(y.im, y.re - c);
    return ay < ax ? BoundaryPointH2(c + rho) : BoundaryPointH2(c - rho);
}

RayH2 ray_from(const H2Point& x, const BoundaryPointH2& xi) {
    BoundaryPointH2 back;
    if (xi.is_infinity()) {
        back = BoundaryPointH2(x.re);
    } else {
        const double u = xi.value();
        if (std::abs(x.re - u) <= 1e-14 * std::max({1.0, std::abs(u), x.im})) {
            back = BoundaryPointH2::infinity();
        } else {
            const double nx = x.re * x.re + x.im * x.im;
            const double c = (nx - u * u) / (2.0 * (x.re - u));
            back = BoundaryPointH2(2.0 * c - u);
        }
    }
    GeodesicH2 carrier(back, xi);
    const H2Point w = carrier.inverse_chart().apply(x);
    RayH2 ray{carrier, 0.5 * std::log(w.re * w.re + w.im * w.im)};
    return ray;
}

Projection project_to_geodesic(const GeodesicH2& g, const H2Point& x) {
    const H2Point w = g.inverse_chart().apply(x);
    const double t = 0.5 * std::log(w.re * w.re + w.im * w.im);
    return Projection{g.point_at(t), t};
}

SegmentChart segment_chart(const SegmentH2& seg) {
    if (seg.degenerate()) {
        raise(ErrorCode::DegenerateSegment, "segment endpoints coincide");
    }
    GeodesicH2 carrier(forward_endpoint(seg.end, seg.start), forward_endpoint(seg.start, seg.end));
    const double ts = project_to_geodesic(carrier, seg.start).param;
    const double te = project_to_geodesic(carrier, seg.end).param;
    return SegmentChart{carrier, ts, te};
}

Projection project_to_segment(const SegmentH2& seg, const H2Point& x) {
    const SegmentChart chart = segment_chart(seg);
    Projection p = project_to_geodesic(chart.carrier, x);
    const double lo = std::min(chart.t_start, chart.t_end);
    const double hi = std::max(chart.t_start, chart.t_end);
    if (p.param < lo) {
        p.param = lo;
        p.foot = chart.carrier.point_at(lo);
    } else if (p.param > hi) {
        p.param = hi;
        p.foot = chart.carrier.point_at(hi);
    }
    return p;
}

double dist_to_geodesic(const GeodesicH2& g, const H2Point& x) {
    // sinh(d) = |re w| / im w for w in the chart of the imaginary axis.
    const H2Point w = g.inverse_chart().apply(x);
    return std::asinh(std::abs(w.re) / w.im);
}

double dist_to_segment(const SegmentH2& seg, const H2Point& x) {
    if (seg.degenerate()) {
        return dist(seg.start, x);
    }
    const SegmentChart chart = segment_chart(seg);
    const H2Point w = chart.carrier.inverse_chart().apply(x);
    const double t = 0.5 * std::log(w.re * w.re + w.im * w.im);
    const double lo = std::min(chart.t_start, chart.t_end);
    const double hi = std::max(chart.t_start, chart.t_end);
    if (t < lo) return dist(x, chart.carrier.point_at(lo));
    if (t > hi) return dist(x, chart.carrier.point_at(hi));
    return std::asinh(std::abs(w.re) / w.im);
}

double dist_to_ray(const RayH2& ray, const H2Point& x) {
    const H2Point w = ray.carrier.inverse_chart().apply(x);
    const double t = 0.5 * std::log(w.re * w.re + w.im * w.im);
    if (t < ray.start_param) return dist(x, ray.carrier.point_at(ray.start_param));
    return std::asinh(std::abs(w.re) / w.im);
}

double busemann(const BoundaryPointH2& xi, const H2Point& x, const H2Point& y) {
    // beta_xi(x, y) = b(x) - b(y) with the horofunction b, so the cocycle
    // identity holds exactly.
    auto horofunction = [&xi](const H2Point& z) {
        if (xi.is_infinity()) return -std::log(z.im);
        const double u = xi.value();
        return 2.0 * std::log(std::hypot(z.re - u, z.im)) - std::log(z.im);
    };
    return horofunction(x) - horofunction(y);
}

IsometryType classify_isometry(const IsometryH2& g) {
    const double t = std::abs(g.trace());
    if (t > 2.0 + Tol::trace_classify) return IsometryType::Loxodromic;
    if (t < 2.0 - Tol::trace_classify) return IsometryType::Elliptic;
    if (same_isometry(g, IsometryH2::identity())) return IsometryType::Identity;
    return IsometryType::Parabolic;
}

AxisData translation_length_axis(const IsometryH2& g) {
    if (classify_isometry(g) != IsometryType::Loxodromic) {
        raise(ErrorCode::NotLoxodromic, "translation_length_axis requires a loxodromic isometry");
    }
    const double tr = g.trace();
    const double tau = 2.0 * std::acosh(std::abs(tr) / 2.0);
    const double disc = std::sqrt(tr * tr - 4.0);
    const double lam_big = (tr + (tr >= 0.0 ? disc : -disc)) / 2.0;   // |lambda| > 1
    const double lam_small = 1.0 / lam_big;

    auto fixed_point = [&g](double lambda) {
        // Eigenvector candidates (b, lambda - a) and (lambda - d, c);
        // take the better-conditioned one.
        const double n1 = std::hypot(g.b, lambda - g.a);
        const double n2 = std::hypot(lambda - g.d, g.c);
        if (n1 >= n2) return BoundaryPointH2::from_homogeneous(g.b, lambda - g.a);
        return BoundaryPointH2::from_homogeneous(lambda - g.d, g.c);
    };

    const BoundaryPointH2 attracting = fixed_point(lam_big);
    const BoundaryPointH2 repelling = fixed_point(lam_small);
    return AxisData{tau, GeodesicH2(repelling, attracting), attracting, repelling};
}

bool shadow_contains(const H2Point& x, const H2Point& y, double R, const H2Point& w) {
    if (!(R > 0.0)) raise(ErrorCode::InvalidArgument, "shadow radius must be positive");
    return dist_to_segment(SegmentH2(x, w), y) < R;
}

bool shadow_contains(const H2Point& x, const H2Point& y, double R, const BoundaryPointH2& w) {
    if (!(R > 0.0)) raise(ErrorCode::InvalidArgument, "shadow radius must be positive");
    return dist_to_ray(ray_from(x, w), y) < R;
}

}  // namespace horo
