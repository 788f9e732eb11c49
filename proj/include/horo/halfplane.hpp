#pragma once

#include <optional>
#include <string>
#include <utility>

#include "horo/errors.hpp"

// Upper half-plane model of the hyperbolic plane: points z = x + iy with
// y > 0 and metric ds = |dz| / y. Boundary points live on R u {inf}.
// All operations are pure; geodesics carry a canonical unit-speed
// parametrization gamma(t) = M . (i e^t) where M is an isometry fixed at
// construction, so gamma(0) is the apex of the semicircle (or the
// height-one point of a vertical line).

namespace horo {

// Named numeric tolerances, one configuration record for the kernel.
struct Tol {
    static constexpr double det = 1e-12;            // |ad - bc - 1| on construction
    static constexpr double matrix_eq = 1e-9;       // up-to-sign matrix equality
    static constexpr double trace_classify = 1e-9;  // |tr| - 2 band for parabolics
    static constexpr double boundary_eq = 1e-12;    // chordal coincidence of boundary points
    static constexpr double homogeneous_inf = 1e-14;  // |q| / |(p,q)| cutoff for infinity
    static constexpr double degenerate_seg = 1e-12; // segment endpoints coincide
    static constexpr double foot_limit = 1e-9;      // Cauchy cutoff for boundary projection
};

struct H2Point {
    double re = 0.0;
    double im = 1.0;

    H2Point() = default;
    H2Point(double re_, double im_);
};

// Tagged boundary point: a finite real or the point at infinity.
class BoundaryPointH2 {
public:
    BoundaryPointH2() : infinite_(true), value_(0.0) {}
    explicit BoundaryPointH2(double finite_value);
    static BoundaryPointH2 infinity() { return BoundaryPointH2(); }
    // From homogeneous coordinates [p : q]; q ~ 0 maps to infinity.
    static BoundaryPointH2 from_homogeneous(double p, double q);

    bool is_infinity() const { return infinite_; }
    double value() const;  // finite value; raises if infinite

private:
    bool infinite_;
    double value_;
};

// Chordal metric on R u {inf} via the Cayley circle; bounded by 2.
double chordal(const BoundaryPointH2& u, const BoundaryPointH2& v);
bool boundary_equal(const BoundaryPointH2& u, const BoundaryPointH2& v,
                    double tol = Tol::boundary_eq);
// Angle coordinate of the boundary point on the Cayley circle, in (-pi, pi].
double boundary_angle(const BoundaryPointH2& u);
BoundaryPointH2 boundary_from_angle(double theta);

struct IsometryH2 {
    double a = 1.0, b = 0.0, c = 0.0, d = 1.0;

    IsometryH2() = default;
    // Validates ad - bc = 1 within Tol::det (relative to entry scale).
    IsometryH2(double a_, double b_, double c_, double d_);

    static IsometryH2 identity() { return IsometryH2(); }
    // No determinant validation; for internal compositions.
    static IsometryH2 unchecked(double a_, double b_, double c_, double d_);

    IsometryH2 inverse() const { return unchecked(d, -b, -c, a); }
    double trace() const { return a + d; }

    H2Point apply(const H2Point& z) const;
    BoundaryPointH2 apply(const BoundaryPointH2& u) const;
};

IsometryH2 operator*(const IsometryH2& g, const IsometryH2& h);
// PSL(2, R) equality: entries compared after normalizing the sign of the
// first entry exceeding 1e-12 in magnitude.
bool same_isometry(const IsometryH2& g, const IsometryH2& h, double tol = Tol::matrix_eq);
IsometryH2 power(const IsometryH2& g, long long k);

enum class IsometryType { Identity, Elliptic, Parabolic, Loxodromic };

const char* to_string(IsometryType t);

// Oriented bi-infinite geodesic; endpoint(0) is the t -> -inf end.
class GeodesicH2 {
public:
    // Raises CoincidentEndpoints if the ideal endpoints coincide.
    GeodesicH2(const BoundaryPointH2& from, const BoundaryPointH2& to);

    const BoundaryPointH2& endpoint(int i) const { return i == 0 ? from_ : to_; }
    const IsometryH2& chart() const { return chart_; }       // maps imaginary axis onto this geodesic
    const IsometryH2& inverse_chart() const { return inv_; } // maps this geodesic onto the axis

    H2Point point_at(double t) const;   // gamma(t); gamma(0) is the canonical origin
    GeodesicH2 reversed() const { return GeodesicH2(to_, from_); }

private:
    BoundaryPointH2 from_, to_;
    IsometryH2 chart_, inv_;
};

struct SegmentH2 {
    H2Point start;
    H2Point end;

    SegmentH2() = default;
    SegmentH2(const H2Point& s, const H2Point& e) : start(s), end(e) {}
    SegmentH2 reversed() const { return SegmentH2(end, start); }
    bool degenerate(double tol = Tol::degenerate_seg) const;
};

// Geodesic ray [origin, target): carrier oriented toward the ideal target,
// restricted to parameters >= start_param.
struct RayH2 {
    GeodesicH2 carrier;
    double start_param;
};

struct Projection {
    H2Point foot;
    double param;  // arclength coordinate of the foot in the carrier's parametrization
};

double dist(const H2Point& x, const H2Point& y);

GeodesicH2 geodesic_between(const BoundaryPointH2& x, const BoundaryPointH2& y);
SegmentH2 segment_between(const H2Point& x, const H2Point& y);
RayH2 ray_from(const H2Point& x, const BoundaryPointH2& xi);
// Ideal endpoint of the ray from x through y (x != y).
BoundaryPointH2 forward_endpoint(const H2Point& x, const H2Point& y);

Projection project_to_geodesic(const GeodesicH2& g, const H2Point& x);
// Nearest point of the compact segment; the param is in the carrier
// geodesic's coordinates (canonical origin), clamped to the segment.
Projection project_to_segment(const SegmentH2& seg, const H2Point& x);

double dist_to_geodesic(const GeodesicH2& g, const H2Point& x);
double dist_to_segment(const SegmentH2& seg, const H2Point& x);
double dist_to_ray(const RayH2& ray, const H2Point& x);

// Carrier of a nondegenerate segment, oriented start -> end, with the
// parameter range [t_start, t_end] of the segment on it.
struct SegmentChart {
    GeodesicH2 carrier;
    double t_start;
    double t_end;
};
SegmentChart segment_chart(const SegmentH2& seg);

double busemann(const BoundaryPointH2& xi, const H2Point& x, const H2Point& y);

IsometryType classify_isometry(const IsometryH2& g);

struct AxisData {
    double translation_length;
    GeodesicH2 axis;  // oriented repelling -> attracting
    BoundaryPointH2 attracting;
    BoundaryPointH2 repelling;
};
// Raises NotLoxodromic unless classify_isometry(g) == Loxodromic.
AxisData translation_length_axis(const IsometryH2& g);

// Shadow membership: d([x, w], y) < R with [x, w] the segment (interior w)
// or the ray toward w (boundary w).
bool shadow_contains(const H2Point& x, const H2Point& y, double R, const H2Point& w);
bool shadow_contains(const H2Point& x, const H2Point& y, double R, const BoundaryPointH2& w);

}  // namespace horo
