#pragma once

#include <cstdint>
#include <utility>
#include <variant>
#include <vector>

#include "horo/product.hpp"

// Alignment predicates, the contracting/squeezing machinery, the
// shadow <-> alignment conversion checks, axis-projection bounds, and the
// extension-lemma candidate search.

namespace horo {

using PointOrBoundary = std::variant<H2Point, BoundaryPointH2>;
using ProductTarget = std::variant<ProductPoint, ProductBoundaryPoint>;

struct AlignmentReport {
    bool aligned = false;
    double left_defect = 0.0;   // d(projection of the left witness, segment start)
    double right_defect = 0.0;  // d(projection of the right witness, segment end)
    double K = 0.0;
};

struct SqueezeEstimate {
    double epsilon = 0.0;
    double L = 0.0;
    long long samples = 0;
    double worst_midpoint_distance = 0.0;
    bool cap_reached = false;  // the grid cap L = 64 bound the search
};

struct AxisConstant {
    double C = 0.0;
    IsometryH2 generator;
    GeodesicH2 axis;
    H2Point basepoint;
};

// (w, [x, y]) is K-aligned when the projection of w lands within K of the
// segment start; boundary witnesses project via boundary_projection.
AlignmentReport is_aligned(const PointOrBoundary& w, const SegmentH2& seg, double K);
// (w, seg, z) is K-aligned on both sides.
bool is_aligned_triple(const PointOrBoundary& w, const SegmentH2& seg,
                       const PointOrBoundary& z, double K);

// Continuous extension of the nearest-point projection to the boundary:
// the limit of segment projections of points marching to xi along the ray
// from the segment start, with the parameter doubling until the feet are
// Cauchy within Tol::foot_limit. Raises NoConvergence past t = 2^16.
H2Point boundary_projection(const SegmentH2& seg, const BoundaryPointH2& xi);

// Contracting decomposition of [x, y] against gamma: p and q on [x, y],
// ordered from x, such that the projected prefixes have diameter <= 2 and
// [p, q] is 2-equivalent to [proj(x), proj(y)]. Requires the projections of
// x and y to be more than 2 apart.
std::pair<H2Point, H2Point> contracting_decomposition(const GeodesicH2& gamma,
                                                      const H2Point& x, const H2Point& y);

// Smallest L on a 0.25-step grid (capped at 64) so that all seeded trials
// with projection offsets a, b >= L satisfy d([x, y], gamma(t)) <= epsilon,
// re-verified against the four-point 8-epsilon difference bound.
SqueezeEstimate squeeze_estimate(double epsilon, long long trials, std::uint64_t seed);

// | d(x, gamma(s)) - d(x, gamma(t)) - |t - s| | with t the foot parameter.
double projection_defect_check(const GeodesicH2& gamma, const H2Point& x, double s);

struct ShadowAlignmentCheck {
    bool forward_ok = false;   // shadows at radius R imply 6R-alignment
    bool backward_ok = false;  // R-alignment with d(y,z) > 3R implies 3R-shadows
};
// Both implications with vacuous antecedents counting as ok; R must exceed 1.
ShadowAlignmentCheck verify_shadow_alignment(const H2Point& x, const H2Point& y,
                                             const H2Point& z, const H2Point& w, double R);

// Orbit fellow-traveling constant C with d(g^k x0, gamma(tau k + s0)) < C for
// |k| <= kmax, where s0 is the axis parameter of the basepoint projection.
// The alignment-window consequences are re-verified on seeded points for the
// returned C, enlarging it by 0.25 steps in the rare case the 0.1 margin is
// too tight for the sampled configurations.
AxisConstant axis_constant(const IsometryH2& g, const H2Point& basepoint, int kmax);

// First candidate a making (x, a [x0, phi^n x0], a phi^n a y) alpha-aligned
// in the first factor. Raises NoCandidateAligns when none qualifies.
std::size_t extension_select(const ProductIsometry& phi,
                             const std::vector<ProductIsometry>& candidates,
                             const ProductTarget& x, const ProductTarget& y, int n,
                             double alpha,
                             const ProductPoint& basepoint);

}  // namespace horo
