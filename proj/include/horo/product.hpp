#pragma once

#include <cstddef>
#include <vector>

#include "horo/halfplane.hpp"

// The product Z = H^2 x ... x H^2 with vector-valued distance and Busemann
// cocycle, componentwise shadows, and convergence to the product boundary.

namespace horo {

using VectorR = std::vector<double>;

struct ProductPoint {
    std::vector<H2Point> components;

    ProductPoint() = default;
    explicit ProductPoint(std::vector<H2Point> c) : components(std::move(c)) {}
    std::size_t rank() const { return components.size(); }
};

struct ProductBoundaryPoint {
    std::vector<BoundaryPointH2> components;

    ProductBoundaryPoint() = default;
    explicit ProductBoundaryPoint(std::vector<BoundaryPointH2> c) : components(std::move(c)) {}
    std::size_t rank() const { return components.size(); }
};

struct ProductIsometry {
    std::vector<IsometryH2> components;

    ProductIsometry() = default;
    explicit ProductIsometry(std::vector<IsometryH2> c) : components(std::move(c)) {}
    std::size_t rank() const { return components.size(); }

    static ProductIsometry identity(std::size_t r);
    ProductIsometry inverse() const;
    ProductPoint apply(const ProductPoint& z) const;
    ProductBoundaryPoint apply(const ProductBoundaryPoint& xi) const;
};

ProductIsometry operator*(const ProductIsometry& g, const ProductIsometry& h);
bool same_product_isometry(const ProductIsometry& g, const ProductIsometry& h,
                           double tol = Tol::matrix_eq);

struct SegmentTuple {
    std::vector<SegmentH2> components;
};

SegmentTuple segment_tuple(const ProductPoint& z, const ProductPoint& w);

// Vector helpers; the artifact's vector norm is the sup norm throughout.
double sup_norm(const VectorR& v);
double l2_norm(const VectorR& v);
double dot(const VectorR& a, const VectorR& b);
VectorR add(const VectorR& a, const VectorR& b);
VectorR sub(const VectorR& a, const VectorR& b);
VectorR scale(const VectorR& a, double s);

// Vector-valued distance kappa(z, z') with entries d(x_i, x_i').
VectorR kappa(const ProductPoint& z, const ProductPoint& w);
// Vector-valued Busemann cocycle, entrywise beta_{xi_i}(x_i, x_i').
VectorR busemann_vec(const ProductBoundaryPoint& xi, const ProductPoint& z,
                     const ProductPoint& w);

// Product shadow O_R(z, z') = prod O_R(x_i, x_i'); every component must pass.
bool product_shadow_contains(const ProductPoint& z, const ProductPoint& w, double R,
                             const ProductPoint& target);
bool product_shadow_contains(const ProductPoint& z, const ProductPoint& w, double R,
                             const ProductBoundaryPoint& target);

// Half-plane discretization of componentwise convergence: a finite xi_i is
// approached when |x_n - xi_i| < tol in Euclidean half-plane coordinates,
// infinity when im(x_n) > 1/tol; the sequence must enter the neighborhood
// and stay in it for every component.
bool converges_to(const std::vector<ProductPoint>& seq, const ProductBoundaryPoint& xi,
                  double tol);

}  // namespace horo
