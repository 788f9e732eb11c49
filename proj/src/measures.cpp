#include "horo/measures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include <json.hpp>

namespace horo {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Index of the grid cell containing theta, for an n-cell split of (-pi, pi].
int angle_cell(double theta, int n) {
    const double shifted = (theta + kPi) / (2.0 * kPi);
    int k = static_cast<int>(std::floor(shifted * n));
    if (k < 0) k = 0;
    if (k >= n) k = n - 1;
    return k;
}

std::vector<int> cell_index(const ProductBoundaryPoint& xi, int n) {
    std::vector<int> out(xi.rank());
    for (std::size_t i = 0; i < xi.rank(); ++i) {
        out[i] = angle_cell(boundary_angle(xi.components[i]), n);
    }
    return out;
}

std::string cell_name(const std::vector<int>& idx) {
    std::string out;
    for (std::size_t i = 0; i < idx.size(); ++i) {
        if (i > 0) out += 'x';
        out += std::to_string(idx[i]);
    }
    return out;
}

}  // namespace

LinearForm::LinearForm(VectorR c) : coefficients(std::move(c)) {
    if (coefficients.empty()) {
        raise(ErrorCode::InvalidArgument, "linear form needs at least one coefficient");
    }
    bool nonzero = false;
    for (double v : coefficients) {
        if (!std::isfinite(v)) raise(ErrorCode::InvalidArgument, "linear form must be finite");
        if (v != 0.0) nonzero = true;
    }
    if (!nonzero) raise(ErrorCode::InvalidArgument, "linear form must not vanish identically");
}

double AtomicMeasure::total_mass() const {
    double m = 0.0;
    for (const auto& atom : atoms) m += atom.weight;
    return m;
}

std::string AtomicMeasure::to_json_text() const {
    nlohmann::json atoms_json = nlohmann::json::array();
    for (const auto& atom : atoms) {
        nlohmann::json xi = nlohmann::json::array();
        for (const auto& b : atom.xi.components) {
            if (b.is_infinity()) {
                xi.push_back("inf");
            } else {
                xi.push_back(b.value());
            }
        }
        atoms_json.push_back({{"xi", xi}, {"w", atom.weight}});
    }
    nlohmann::json root{{"dimension", dimension},
                        {"form", form.coefficients},
                        {"ball_length", ball_length},
                        {"atoms", atoms_json}};
    return root.dump(2);
}

bool BoundaryCell::contains(const ProductBoundaryPoint& xi) const {
    if (angle_intervals.size() != xi.rank()) return false;
    for (std::size_t i = 0; i < xi.rank(); ++i) {
        const double theta = boundary_angle(xi.components[i]);
        if (theta < angle_intervals[i].lo || theta >= angle_intervals[i].hi) return false;
    }
    return true;
}

double poincare_partial(const GroupSpec& spec, const LinearForm& psi, double s, int L,
                        std::size_t cap) {
    if (psi.rank() != spec.r) raise(ErrorCode::DimensionMismatch, "psi rank mismatch");
    double sum = 0.0;
    for (const auto& e : enumerate_ball(spec, L, cap)) {
        sum += std::exp(-s * psi(e.cartan));
    }
    return sum;
}

CriticalExponentEstimate critical_exponent(const GroupSpec& spec, const LinearForm& psi, int Lmax,
                                           std::size_t cap) {
    if (psi.rank() != spec.r) raise(ErrorCode::DimensionMismatch, "psi rank mismatch");
    if (Lmax < 6) {
        raise(ErrorCode::InsufficientGrowthData, "critical exponent fit needs Lmax >= 6");
    }
    const std::vector<GroupElement> ball = enumerate_ball(spec, Lmax, cap);

    std::vector<double> values;
    values.reserve(ball.size());
    for (const auto& e : ball) values.push_back(psi(e.cartan));
    std::sort(values.begin(), values.end());
    const double tmax = values.back();
    if (!(tmax > 0.0)) {
        raise(ErrorCode::InsufficientGrowthData, "orbit has no psi-growth to fit");
    }

    constexpr int kBuckets = 40;
    // Window: drop the lowest 20% and highest 10% of T-buckets.
    const int lo = kBuckets / 5;
    const int hi = (kBuckets * 9) / 10;
    if (hi - lo < 8) {
        raise(ErrorCode::InsufficientGrowthData, "fit window has fewer than 8 buckets");
    }

    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    int used = 0;
    double first_count = 0.0, last_count = 0.0;
    for (int k = lo; k < hi; ++k) {
        const double T = tmax * (k + 1) / kBuckets;
        const double count = static_cast<double>(
            std::upper_bound(values.begin(), values.end(), T) - values.begin());
        if (count < 1.0) continue;
        if (used == 0) first_count = count;
        last_count = count;
        const double y = std::log(count);
        sx += T;
        sy += y;
        sxx += T * T;
        sxy += T * y;
        ++used;
    }
    if (used < 8 || last_count <= first_count) {
        raise(ErrorCode::InsufficientGrowthData, "no orbit growth across the fit window");
    }

    CriticalExponentEstimate est;
    est.buckets_used = used;
    est.fit_tmin = tmax * (lo + 1) / kBuckets;
    est.fit_tmax = tmax * hi / kBuckets;
    est.delta = (used * sxy - sx * sy) / (used * sxx - sx * sx);

    // Divergence-type evidence: the partial sum at s = delta still grows
    // by at least 5% from the (L-2)-ball to the L-ball.
    const double tail = poincare_partial(spec, psi, est.delta, Lmax, cap);
    const double head = poincare_partial(spec, psi, est.delta, Lmax - 2, cap);
    est.divergence_type_evidence = tail >= 1.05 * head;
    return est;
}

AtomicMeasure ps_density(const GroupSpec& spec, const LinearForm& psi, double s, int L,
                         std::size_t cap) {
    if (psi.rank() != spec.r) raise(ErrorCode::DimensionMismatch, "psi rank mismatch");
    if (!(s > 0.0)) raise(ErrorCode::InvalidArgument, "ps_density needs s > 0");
    if (L < 2) raise(ErrorCode::InvalidArgument, "ps_density needs L >= 2");

    AtomicMeasure nu;
    nu.dimension = s;
    nu.form = psi;
    nu.ball_length = L;

    // Merge atoms that coincide within 1e-9 on every factor angle.
    std::map<std::vector<long long>, std::size_t> merge;
    for (const auto& e : enumerate_ball(spec, L, cap)) {
        if (e.letters.empty()) continue;
        bool movable = true;
        for (double d : e.cartan) {
            if (d < 1e-9) movable = false;  // no visual direction in that factor
        }
        if (!movable) continue;

        ProductBoundaryPoint xi;
        xi.components.reserve(spec.r);
        const ProductPoint image = e.matrix.apply(spec.basepoint);
        for (std::size_t i = 0; i < spec.r; ++i) {
            xi.components.push_back(
                forward_endpoint(spec.basepoint.components[i], image.components[i]));
        }
        const double weight = std::exp(-s * psi(e.cartan));

        std::vector<long long> key(spec.r);
        for (std::size_t i = 0; i < spec.r; ++i) {
            key[i] = std::llround(boundary_angle(xi.components[i]) * 1e9);
        }
        auto it = merge.find(key);
        if (it != merge.end()) {
            nu.atoms[it->second].weight += weight;
        } else {
            merge[key] = nu.atoms.size();
            nu.atoms.push_back(Atom{std::move(xi), weight});
        }
    }

    const double mass = nu.total_mass();
    if (!(mass > 0.0)) {
        raise(ErrorCode::InvalidArgument, "density has no atoms: ball too small");
    }
    for (auto& atom : nu.atoms) atom.weight /= mass;
    return nu;
}

std::vector<BoundaryCell> canonical_cells(std::size_t r, int cells_per_factor) {
    if (cells_per_factor < 1 || r < 1) {
        raise(ErrorCode::InvalidArgument, "canonical cell grid needs r >= 1 and cells >= 1");
    }
    const double width = 2.0 * kPi / cells_per_factor;
    std::vector<BoundaryCell> cells;
    std::vector<int> idx(r, 0);
    for (;;) {
        BoundaryCell cell;
        cell.angle_intervals.reserve(r);
        for (std::size_t i = 0; i < r; ++i) {
            cell.angle_intervals.push_back(
                Interval{-kPi + idx[i] * width, -kPi + (idx[i] + 1) * width});
        }
        cells.push_back(std::move(cell));
        std::size_t pos = 0;
        while (pos < r && ++idx[pos] == cells_per_factor) {
            idx[pos] = 0;
            ++pos;
        }
        if (pos == r) break;
    }
    return cells;
}

ProductBoundaryPoint cell_center(const BoundaryCell& cell) {
    ProductBoundaryPoint xi;
    xi.components.reserve(cell.angle_intervals.size());
    for (const auto& iv : cell.angle_intervals) {
        xi.components.push_back(boundary_from_angle(0.5 * (iv.lo + iv.hi)));
    }
    return xi;
}

ResidualReport conformality_residual(const GroupSpec& spec, const LinearForm& psi, double s, int L,
                                     const GroupElement& g, int cells_per_factor,
                                     std::size_t cap) {
    if (cells_per_factor < 4) {
        raise(ErrorCode::InvalidArgument, "conformality residual needs at least 4 cells");
    }
    const AtomicMeasure nu = ps_density(spec, psi, s, L, cap);
    const ProductIsometry g_inv = g.matrix.inverse();

    // mass[cell] = nu(cell); image_mass[cell] = nu(g . cell), binned by the
    // g^-1-images of the atoms.
    std::map<std::vector<int>, double> mass, image_mass;
    for (const auto& atom : nu.atoms) {
        mass[cell_index(atom.xi, cells_per_factor)] += atom.weight;
        image_mass[cell_index(g_inv.apply(atom.xi), cells_per_factor)] += atom.weight;
    }

    const ProductPoint pulled = g_inv.apply(spec.basepoint);
    const double width = 2.0 * kPi / cells_per_factor;

    ResidualReport report;
    for (const auto& [idx, m] : mass) {
        if (m < 1e-3) continue;
        ProductBoundaryPoint center;
        center.components.reserve(idx.size());
        for (std::size_t i = 0; i < idx.size(); ++i) {
            center.components.push_back(boundary_from_angle(-kPi + (idx[i] + 0.5) * width));
        }
        const auto img_it = image_mass.find(idx);
        const double img = img_it == image_mass.end() ? 0.0 : img_it->second;

        CellResidual cell;
        cell.cell_id = cell_name(idx);
        cell.mass = m;
        cell.image_mass = img;
        if (img > 0.0) {
            const double shift = s * psi(busemann_vec(center, pulled, spec.basepoint));
            cell.residual = std::abs(std::log(img / m) + shift);
        } else {
            cell.residual = std::numeric_limits<double>::infinity();
        }
        report.max_residual = std::max(report.max_residual, cell.residual);
        report.cells.push_back(std::move(cell));
    }
    if (report.cells.empty()) {
        raise(ErrorCode::EmptyCells, "no cell clears the 1e-3 mass floor");
    }
    return report;
}

std::string ResidualReport::to_csv() const {
    std::ostringstream out;
    out << "cell_id,mass,image_mass,residual\n";
    out.precision(17);
    for (const auto& c : cells) {
        out << c.cell_id << ',' << c.mass << ',' << c.image_mass << ',' << c.residual << '\n';
    }
    return out.str();
}

double br_box_measure(const AtomicMeasure& nu, double delta, const LinearForm& psi,
                      const BoxRegion& region) {
    if (region.box.size() != psi.rank()) {
        raise(ErrorCode::DimensionMismatch, "box rank must match the linear form");
    }
    for (const auto& iv : region.box) {
        if (!(iv.hi >= iv.lo) || !std::isfinite(iv.lo) || !std::isfinite(iv.hi)) {
            raise(ErrorCode::InvalidArgument, "box intervals must be finite with hi >= lo");
        }
    }

    double boundary_mass = 0.0;
    for (const auto& atom : nu.atoms) {
        for (const auto& cell : region.boundary_cells) {
            if (cell.contains(atom.xi)) {
                boundary_mass += atom.weight;
                break;
            }
        }
    }

    // Closed form per axis: int_a^b e^{delta c u} du.
    double box_integral = 1.0;
    for (std::size_t i = 0; i < region.box.size(); ++i) {
        const double c = delta * psi.coefficients[i];
        const Interval& iv = region.box[i];
        if (c == 0.0) {
            box_integral *= iv.length();
        } else {
            box_integral *= (std::exp(c * iv.hi) - std::exp(c * iv.lo)) / c;
        }
    }
    return boundary_mass * box_integral;
}

BoxRegion translate_box(const BoxRegion& region, const VectorR& a) {
    if (region.box.size() != a.size()) {
        raise(ErrorCode::DimensionMismatch, "translation vector rank mismatch");
    }
    BoxRegion out = region;
    for (std::size_t i = 0; i < a.size(); ++i) {
        out.box[i].lo += a[i];
        out.box[i].hi += a[i];
    }
    return out;
}

std::optional<GroupElement> essential_witness(const GroupSpec& spec, const AtomicMeasure& nu,
                                              const std::vector<BoundaryCell>& E,
                                              const GroupElement& phi, const VectorR& a,
                                              double eps, int L, std::size_t cap) {
    if (!(eps > 0.0)) raise(ErrorCode::InvalidArgument, "essential witness needs eps > 0");
    if (!jointly_loxodromic(phi.matrix)) {
        raise(ErrorCode::NotJointlyLoxodromic, "essential witness needs phi loxodromic everywhere");
    }
    if (a.size() != spec.r) raise(ErrorCode::DimensionMismatch, "target vector rank mismatch");

    auto in_E = [&E](const ProductBoundaryPoint& xi) {
        for (const auto& cell : E) {
            if (cell.contains(xi)) return true;
        }
        return false;
    };

    // The atoms inside E do not depend on g; filter them once.
    std::vector<const Atom*> support;
    for (const auto& atom : nu.atoms) {
        if (atom.weight > 0.0 && in_E(atom.xi)) support.push_back(&atom);
    }

    for (const auto& g : enumerate_ball(spec, L, cap)) {
        const ProductIsometry conj = g.matrix * phi.matrix * g.matrix.inverse();
        const ProductPoint conj_z0 = conj.apply(spec.basepoint);
        for (const Atom* atom : support) {
            if (!in_E(conj.apply(atom->xi))) continue;
            const VectorR b = busemann_vec(atom->xi, spec.basepoint, conj_z0);
            if (sup_norm(sub(b, a)) < eps) return g;
        }
    }
    return std::nullopt;
}

}  // namespace horo
