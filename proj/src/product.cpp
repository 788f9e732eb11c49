#include "horo/product.hpp"

#include <algorithm>
#include <cmath>

namespace horo {

namespace {

void check_rank(std::size_t a, std::size_t b, const char* what) {
    if (a != b || a == 0) {
        raise(ErrorCode::DimensionMismatch, what);
    }
}

}  // namespace

ProductIsometry ProductIsometry::identity(std::size_t r) {
    ProductIsometry g;
    g.components.assign(r, IsometryH2::identity());
    return g;
}

ProductIsometry ProductIsometry::inverse() const {
    ProductIsometry g;
    g.components.reserve(components.size());
    for (const auto& c : components) g.components.push_back(c.inverse());
    return g;
}

ProductPoint ProductIsometry::apply(const ProductPoint& z) const {
    check_rank(components.size(), z.rank(), "isometry/point rank mismatch");
    ProductPoint out;
    out.components.reserve(z.rank());
    for (std::size_t i = 0; i < z.rank(); ++i) {
        out.components.push_back(components[i].apply(z.components[i]));
    }
    return out;
}

ProductBoundaryPoint ProductIsometry::apply(const ProductBoundaryPoint& xi) const {
    check_rank(components.size(), xi.rank(), "isometry/boundary rank mismatch");
    ProductBoundaryPoint out;
    out.components.reserve(xi.rank());
    for (std::size_t i = 0; i < xi.rank(); ++i) {
        out.components.push_back(components[i].apply(xi.components[i]));
    }
    return out;
}

ProductIsometry operator*(const ProductIsometry& g, const ProductIsometry& h) {
    check_rank(g.rank(), h.rank(), "isometry rank mismatch in composition");
    ProductIsometry out;
    out.components.reserve(g.rank());
    for (std::size_t i = 0; i < g.rank(); ++i) {
        out.components.push_back(g.components[i] * h.components[i]);
    }
    return out;
}

bool same_product_isometry(const ProductIsometry& g, const ProductIsometry& h, double tol) {
    if (g.rank() != h.rank()) return false;
    for (std::size_t i = 0; i < g.rank(); ++i) {
        if (!same_isometry(g.components[i], h.components[i], tol)) return false;
    }
    return true;
}

SegmentTuple segment_tuple(const ProductPoint& z, const ProductPoint& w) {
    check_rank(z.rank(), w.rank(), "segment tuple rank mismatch");
    SegmentTuple out;
    out.components.reserve(z.rank());
    for (std::size_t i = 0; i < z.rank(); ++i) {
        out.components.emplace_back(z.components[i], w.components[i]);
    }
    return out;
}

double sup_norm(const VectorR& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

double l2_norm(const VectorR& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

double dot(const VectorR& a, const VectorR& b) {
    check_rank(a.size(), b.size(), "dot product rank mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

VectorR add(const VectorR& a, const VectorR& b) {
    check_rank(a.size(), b.size(), "vector add rank mismatch");
    VectorR out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
    return out;
}

VectorR sub(const VectorR& a, const VectorR& b) {
    check_rank(a.size(), b.size(), "vector sub rank mismatch");
    VectorR out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
    return out;
}

VectorR scale(const VectorR& a, double s) {
    VectorR out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * s;
    return out;
}

VectorR kappa(const ProductPoint& z, const ProductPoint& w) {
    check_rank(z.rank(), w.rank(), "kappa rank mismatch");
    VectorR out(z.rank());
    for (std::size_t i = 0; i < z.rank(); ++i) {
        out[i] = dist(z.components[i], w.components[i]);
    }
    return out;
}

VectorR busemann_vec(const ProductBoundaryPoint& xi, const ProductPoint& z,
                     const ProductPoint& w) {
    check_rank(xi.rank(), z.rank(), "busemann_vec rank mismatch");
    check_rank(z.rank(), w.rank(), "busemann_vec rank mismatch");
    VectorR out(z.rank());
    for (std::size_t i = 0; i < z.rank(); ++i) {
        out[i] = busemann(xi.components[i], z.components[i], w.components[i]);
    }
    return out;
}

bool product_shadow_contains(const ProductPoint& z, const ProductPoint& w, double R,
                             const ProductPoint& target) {
    check_rank(z.rank(), w.rank(), "product shadow rank mismatch");
    check_rank(z.rank(), target.rank(), "product shadow rank mismatch");
    for (std::size_t i = 0; i < z.rank(); ++i) {
        if (!shadow_contains(z.components[i], w.components[i], R, target.components[i])) {
            return false;
        }
    }
    return true;
}

bool product_shadow_contains(const ProductPoint& z, const ProductPoint& w, double R,
                             const ProductBoundaryPoint& target) {
    check_rank(z.rank(), w.rank(), "product shadow rank mismatch");
    check_rank(z.rank(), target.rank(), "product shadow rank mismatch");
    for (std::size_t i = 0; i < z.rank(); ++i) {
        if (!shadow_contains(z.components[i], w.components[i], R, target.components[i])) {
            return false;
        }
    }
    return true;
}

namespace {

bool in_neighborhood(const H2Point& z, const BoundaryPointH2& xi, double tol) {
    if (xi.is_infinity()) return z.im > 1.0 / tol;
    return std::hypot(z.re - xi.value(), z.im) < tol;
}

}  // namespace

bool converges_to(const std::vector<ProductPoint>& seq, const ProductBoundaryPoint& xi,
                  double tol) {
    if (seq.empty() || !(tol > 0.0)) return false;
    const std::size_t r = xi.rank();
    for (const auto& z : seq) check_rank(z.rank(), r, "convergence rank mismatch");
    // Entered-and-stayed: some index from which every later term lies in the
    // neighborhood in every component.
    std::size_t enter = seq.size();
    for (std::size_t n = seq.size(); n-- > 0;) {
        bool inside = true;
        for (std::size_t i = 0; i < r && inside; ++i) {
            inside = in_neighborhood(seq[n].components[i], xi.components[i], tol);
        }
        if (!inside) break;
        enter = n;
    }
    return enter < seq.size();
}

}  // namespace horo
