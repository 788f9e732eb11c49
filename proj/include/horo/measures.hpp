#pragma once

#include <optional>
#include <string>
#include <vector>

#include "horo/group.hpp"

// Poincare series, critical exponents, atomic conformal-density
// approximations, Burger-Roblin box measures on the horospherical
// foliation, translations, and essential-subgroup witnesses.

namespace horo {

struct LinearForm {
    VectorR coefficients;

    LinearForm() = default;
    explicit LinearForm(VectorR c);
    double operator()(const VectorR& v) const { return dot(coefficients, v); }
    std::size_t rank() const { return coefficients.size(); }
};

struct Atom {
    ProductBoundaryPoint xi;
    double weight = 0.0;
};

struct AtomicMeasure {
    std::vector<Atom> atoms;
    double dimension = 0.0;  // the exponent s the weights were built at
    LinearForm form;
    int ball_length = 0;

    double total_mass() const;
    std::string to_json_text() const;
};

struct HoroPoint {
    ProductBoundaryPoint xi;
    VectorR u;
};

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    double length() const { return hi - lo; }
};

// One product cell of the boundary: a Cayley-angle interval per factor.
struct BoundaryCell {
    std::vector<Interval> angle_intervals;
    bool contains(const ProductBoundaryPoint& xi) const;
};

struct BoxRegion {
    std::vector<BoundaryCell> boundary_cells;
    std::vector<Interval> box;  // r intervals in R^r
};

// Partial Poincare sum over the L-ball at inverse-temperature s.
double poincare_partial(const GroupSpec& spec, const LinearForm& psi, double s, int L,
                        std::size_t cap = kDefaultBallCap);

struct CriticalExponentEstimate {
    double delta = 0.0;
    bool divergence_type_evidence = false;
    int buckets_used = 0;
    double fit_tmin = 0.0;
    double fit_tmax = 0.0;
};
// Least-squares slope of log orbital counting against the psi-length, over
// the stable window of buckets (lowest 20% and highest 10% dropped).
CriticalExponentEstimate critical_exponent(const GroupSpec& spec, const LinearForm& psi, int Lmax,
                                           std::size_t cap = kDefaultBallCap);

// Orbit-sum approximation of the conformal density: atoms at the visual
// tuples of g z0 seen from z0, weights proportional to e^{-s psi(kappa(g))}.
AtomicMeasure ps_density(const GroupSpec& spec, const LinearForm& psi, double s, int L,
                         std::size_t cap = kDefaultBallCap);

struct CellResidual {
    std::string cell_id;
    double mass = 0.0;
    double image_mass = 0.0;
    double residual = 0.0;
};

struct ResidualReport {
    double max_residual = 0.0;
    std::vector<CellResidual> cells;  // cells clearing the 1e-3 mass floor
    std::string to_csv() const;       // columns cell_id, mass, image_mass, residual
};

// Conformality defect of the atomic density against the group element g on
// the canonical angle-grid cell layout (cells_per_factor per factor).
ResidualReport conformality_residual(const GroupSpec& spec, const LinearForm& psi, double s, int L,
                                     const GroupElement& g, int cells_per_factor,
                                     std::size_t cap = kDefaultBallCap);

// Burger-Roblin box mass: sum over atoms in the boundary cells of the
// closed-form integral of e^{delta psi(u)} over the box.
double br_box_measure(const AtomicMeasure& nu, double delta, const LinearForm& psi,
                      const BoxRegion& region);

// Translation (xi, u) -> (xi, u + a): boundary cells unchanged, box shifted.
BoxRegion translate_box(const BoxRegion& region, const VectorR& a);

// First ball element g whose conjugated loxodromic g phi g^-1 returns some
// positive-mass atom of E to E with Busemann displacement eps-close to a.
std::optional<GroupElement> essential_witness(const GroupSpec& spec, const AtomicMeasure& nu,
                                              const std::vector<BoundaryCell>& E,
                                              const GroupElement& phi, const VectorR& a,
                                              double eps, int L,
                                              std::size_t cap = kDefaultBallCap);

// Canonical uniform angle grid: cell k of n covers
// [-pi + 2 pi k / n, -pi + 2 pi (k+1) / n) in every factor combination.
std::vector<BoundaryCell> canonical_cells(std::size_t r, int cells_per_factor);
ProductBoundaryPoint cell_center(const BoundaryCell& cell);

}  // namespace horo
