#include "horo/group.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "horo/alignment.hpp"

namespace horo {

namespace {

using nlohmann::json;

// Quantized up-to-sign key for one product isometry. Entries are hashed on
// a 1e-6 grid; cells within 2e-3 of a grid boundary are probed on both
// sides so that duplicates landing across a cell edge are still found.
struct DedupKey {
    std::vector<long long> cells;

    bool operator==(const DedupKey& other) const { return cells == other.cells; }
};

struct DedupKeyHash {
    std::size_t operator()(const DedupKey& k) const {
        std::size_t h = 0xcbf29ce484222325ULL;
        for (long long c : k.cells) {
            h ^= static_cast<std::size_t>(c) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        }
        return h;
    }
};

constexpr double kGrid = 1e6;  // cells of width 1e-6

std::vector<double> normalized_entries(const ProductIsometry& g) {
    std::vector<double> out;
    out.reserve(4 * g.rank());
    for (const auto& m : g.components) {
        const double e[4] = {m.a, m.b, m.c, m.d};
        double sign = 1.0;
        for (double v : e) {
            if (std::abs(v) > 1e-12) {
                sign = v > 0.0 ? 1.0 : -1.0;
                break;
            }
        }
        for (double v : e) out.push_back(v * sign);
    }
    return out;
}

class MatrixDedup {
public:
    // Returns true when g is new and records it.
    bool insert(const ProductIsometry& g, double tol) {
        const std::vector<double> entries = normalized_entries(g);
        DedupKey key;
        key.cells.reserve(entries.size());
        std::vector<std::size_t> wobbly;  // dimensions near a cell boundary
        for (std::size_t i = 0; i < entries.size(); ++i) {
            // Entries beyond the absolute grid are keyed on a log scale;
            // duplicates at that magnitude agree relatively, not absolutely.
            double scaled;
            long long base = 0;
            if (std::abs(entries[i]) < 1e12) {
                scaled = entries[i] * kGrid;
            } else {
                scaled = std::log(std::abs(entries[i])) * 1e7;
                base = entries[i] > 0.0 ? 2'000'000'000'000'000'000LL
                                        : -2'000'000'000'000'000'000LL;
            }
            const double rounded = std::nearbyint(scaled);
            key.cells.push_back(base + static_cast<long long>(rounded));
            if (std::abs(scaled - rounded - 0.5) < 2e-3 || std::abs(scaled - rounded + 0.5) < 2e-3) {
                if (wobbly.size() < 3) wobbly.push_back(i);
            }
        }

        std::vector<DedupKey> probes{key};
        for (std::size_t dim : wobbly) {
            const std::size_t n = probes.size();
            for (std::size_t j = 0; j < n; ++j) {
                DedupKey up = probes[j];
                up.cells[dim] += 1;
                DedupKey down = probes[j];
                down.cells[dim] -= 1;
                probes.push_back(up);
                probes.push_back(down);
            }
        }

        for (const DedupKey& probe : probes) {
            auto it = buckets_.find(probe);
            if (it == buckets_.end()) continue;
            for (std::size_t idx : it->second) {
                if (matches(idx, entries, tol)) return false;
            }
        }
        const std::size_t idx = stored_.size();
        stored_.push_back(entries);
        buckets_[key].push_back(idx);
        return true;
    }

private:
    bool matches(std::size_t idx, const std::vector<double>& entries, double tol) const {
        const std::vector<double>& have = stored_[idx];
        if (have.size() != entries.size()) return false;
        for (std::size_t i = 0; i < entries.size(); ++i) {
            // Absolute below unit scale, relative above it: representations
            // of one element agree relatively once the entries are large.
            const double scale = std::max(1.0, std::abs(have[i]));
            if (std::abs(have[i] - entries[i]) > tol * scale) return false;
        }
        return true;
    }

    std::unordered_map<DedupKey, std::vector<std::size_t>, DedupKeyHash> buckets_;
    std::vector<std::vector<double>> stored_;
};

IsometryH2 matrix_from_json(const json& m) {
    if (!m.is_array() || m.size() != 2 || !m[0].is_array() || !m[1].is_array() ||
        m[0].size() != 2 || m[1].size() != 2) {
        raise(ErrorCode::SpecParse, "generator matrix must be a 2x2 row-major array");
    }
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            if (!m[i][j].is_number()) {
                raise(ErrorCode::SpecParse, "matrix entries must be JSON numbers");
            }
        }
    }
    try {
        return IsometryH2(m[0][0].get<double>(), m[0][1].get<double>(), m[1][0].get<double>(),
                          m[1][1].get<double>());
    } catch (const Error&) {
        raise(ErrorCode::SpecParse, "generator matrix must have determinant 1");
    }
}

}  // namespace

void GroupSpec::validate() const {
    if (r < 1) raise(ErrorCode::InvalidArgument, "group spec needs r >= 1");
    if (generators.empty()) raise(ErrorCode::InvalidArgument, "group spec needs a generator");
    if (generator_names.size() != generators.size()) {
        raise(ErrorCode::InvalidArgument, "generator names and matrices must pair up");
    }
    for (const auto& g : generators) {
        if (g.rank() != r) raise(ErrorCode::InvalidArgument, "generator has wrong factor count");
    }
    if (basepoint.rank() != r) raise(ErrorCode::InvalidArgument, "basepoint has wrong factor count");
    if (!(dedup_tolerance > 0.0)) raise(ErrorCode::InvalidArgument, "dedup tolerance must be positive");
}

GroupSpec GroupSpec::from_json_text(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& err) {
        raise(ErrorCode::SpecParse, err.what());
    }
    if (!root.is_object() || !root.contains("r") || !root.contains("generators")) {
        raise(ErrorCode::SpecParse, "spec must be an object with \"r\" and \"generators\"");
    }
    if (!root["r"].is_number_integer() || root["r"].get<long long>() < 1) {
        raise(ErrorCode::SpecParse, "\"r\" must be a positive integer");
    }

    GroupSpec spec;
    spec.r = root["r"].get<std::size_t>();

    const json& gens = root["generators"];
    if (!gens.is_object() || gens.empty()) {
        raise(ErrorCode::SpecParse, "\"generators\" must be a nonempty name -> matrices object");
    }
    for (auto it = gens.begin(); it != gens.end(); ++it) {
        const json& tuple = it.value();
        if (!tuple.is_array() || tuple.size() != spec.r) {
            raise(ErrorCode::SpecParse,
                  "generator \"" + it.key() + "\" must list r = " + std::to_string(spec.r) +
                      " matrices");
        }
        ProductIsometry g;
        for (const auto& m : tuple) g.components.push_back(matrix_from_json(m));
        spec.generator_names.push_back(it.key());
        spec.generators.push_back(std::move(g));
    }

    if (root.contains("basepoint")) {
        const json& bp = root["basepoint"];
        if (!bp.is_array() || bp.size() != spec.r) {
            raise(ErrorCode::SpecParse, "basepoint must list r coordinate pairs");
        }
        for (const auto& pair : bp) {
            if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number() ||
                !pair[1].is_number() || !(pair[1].get<double>() > 0.0)) {
                raise(ErrorCode::SpecParse, "basepoint entries must be [re, im] with im > 0");
            }
            spec.basepoint.components.emplace_back(pair[0].get<double>(), pair[1].get<double>());
        }
    } else {
        spec.basepoint.components.assign(spec.r, H2Point(0.0, 1.0));
    }

    if (root.contains("dedup_tolerance")) {
        if (!root["dedup_tolerance"].is_number() || !(root["dedup_tolerance"].get<double>() > 0.0)) {
            raise(ErrorCode::SpecParse, "dedup_tolerance must be a positive number");
        }
        spec.dedup_tolerance = root["dedup_tolerance"].get<double>();
    }

    spec.validate();
    return spec;
}

GroupSpec GroupSpec::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) raise(ErrorCode::SpecParse, "cannot open spec file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return from_json_text(buffer.str());
}

std::string GroupSpec::to_json_text() const {
    json gens = json::object();
    for (std::size_t i = 0; i < generators.size(); ++i) {
        json tuple = json::array();
        for (const auto& m : generators[i].components) {
            tuple.push_back(json::array({json::array({m.a, m.b}), json::array({m.c, m.d})}));
        }
        gens[generator_names[i]] = tuple;
    }
    json bp = json::array();
    for (const auto& z : basepoint.components) bp.push_back(json::array({z.re, z.im}));
    json root{{"r", r}, {"generators", gens}, {"basepoint", bp},
              {"dedup_tolerance", dedup_tolerance}};
    return root.dump(2);
}

std::string GroupElement::word(const GroupSpec& spec) const {
    if (letters.empty()) return "e";
    std::string out;
    for (std::size_t i = 0; i < letters.size(); ++i) {
        if (i > 0) out += '.';
        const int letter = letters[i];
        const std::size_t gen = static_cast<std::size_t>(std::abs(letter)) - 1;
        out += spec.generator_names[gen];
        if (letter < 0) out += "^-1";
    }
    return out;
}

std::vector<GroupElement> enumerate_ball(const GroupSpec& spec, int L, std::size_t cap) {
    spec.validate();
    if (L < 0) raise(ErrorCode::InvalidArgument, "ball radius must be nonnegative");

    std::vector<ProductIsometry> letters;     // generator then inverse, in order
    std::vector<int> letter_ids;
    for (std::size_t i = 0; i < spec.generators.size(); ++i) {
        letters.push_back(spec.generators[i]);
        letter_ids.push_back(static_cast<int>(i) + 1);
        letters.push_back(spec.generators[i].inverse());
        letter_ids.push_back(-(static_cast<int>(i) + 1));
    }

    MatrixDedup dedup;
    std::vector<GroupElement> ball;

    GroupElement identity;
    identity.matrix = ProductIsometry::identity(spec.r);
    identity.cartan = VectorR(spec.r, 0.0);
    dedup.insert(identity.matrix, spec.dedup_tolerance);
    ball.push_back(identity);

    std::size_t frontier_begin = 0;
    for (int length = 1; length <= L; ++length) {
        const std::size_t frontier_end = ball.size();
        for (std::size_t idx = frontier_begin; idx < frontier_end; ++idx) {
            for (std::size_t li = 0; li < letters.size(); ++li) {
                const int letter = letter_ids[li];
                // Reduced words only: never undo the previous letter.
                if (!ball[idx].letters.empty() && ball[idx].letters.back() == -letter) continue;
                ProductIsometry m = ball[idx].matrix * letters[li];
                if (!dedup.insert(m, spec.dedup_tolerance)) continue;
                if (ball.size() >= cap) {
                    raise(ErrorCode::BallTooLarge,
                          "ball exceeds cap " + std::to_string(cap) + " at length " +
                              std::to_string(length));
                }
                GroupElement e;
                e.letters = ball[idx].letters;
                e.letters.push_back(letter);
                e.cartan = kappa(spec.basepoint, m.apply(spec.basepoint));
                e.matrix = std::move(m);
                ball.push_back(std::move(e));
            }
        }
        frontier_begin = frontier_end;
        if (frontier_begin == ball.size()) break;  // finite group exhausted
    }
    return ball;
}

VectorR cartan_projection(const GroupElement& e) { return e.cartan; }

bool jointly_loxodromic(const ProductIsometry& g) {
    for (const auto& m : g.components) {
        if (classify_isometry(m) != IsometryType::Loxodromic) return false;
    }
    return true;
}

VectorR jordan_projection(const GroupElement& e) {
    std::string offending;
    VectorR out(e.matrix.rank(), 0.0);
    for (std::size_t i = 0; i < e.matrix.rank(); ++i) {
        const IsometryH2& m = e.matrix.components[i];
        if (classify_isometry(m) != IsometryType::Loxodromic) {
            if (!offending.empty()) offending += ",";
            offending += std::to_string(i);
            continue;
        }
        out[i] = 2.0 * std::acosh(std::abs(m.trace()) / 2.0);
    }
    if (!offending.empty()) {
        raise(ErrorCode::NotJointlyLoxodromic,
              "factors [" + offending + "] are not loxodromic");
    }
    return out;
}

ProductBoundaryPoint attracting_tuple(const ProductIsometry& g) {
    ProductBoundaryPoint out;
    out.components.reserve(g.rank());
    for (const auto& m : g.components) {
        out.components.push_back(translation_length_axis(m).attracting);
    }
    return out;
}

SpectrumSample length_spectrum(const GroupSpec& spec, int L, std::size_t cap) {
    if (L < 1) raise(ErrorCode::InvalidArgument, "length spectrum needs L >= 1");
    const std::vector<GroupElement> ball = enumerate_ball(spec, L, cap);
    std::vector<VectorR> vectors;
    for (const auto& e : ball) {
        if (e.letters.empty() || !jointly_loxodromic(e.matrix)) continue;
        vectors.push_back(jordan_projection(e));
    }
    std::sort(vectors.begin(), vectors.end());
    std::vector<VectorR> unique;
    for (const auto& v : vectors) {
        if (!unique.empty() && sup_norm(sub(v, unique.back())) <= 1e-9) continue;
        unique.push_back(v);
    }
    SpectrumSample out;
    out.vectors = std::move(unique);
    out.max_word_length = L;
    return out;
}

NonArithmeticityReport non_arithmeticity_report(const SpectrumSample& sample, double threshold,
                                                int depth) {
    if (sample.vectors.empty()) {
        raise(ErrorCode::InvalidArgument, "non-arithmeticity report needs a nonempty sample");
    }
    const std::size_t r = sample.vectors.front().size();

    std::vector<VectorR> pool;
    for (const auto& v : sample.vectors) {
        if (v.size() != r) raise(ErrorCode::DimensionMismatch, "mixed vector lengths in sample");
        if (l2_norm(v) > 1e-12) pool.push_back(v);
    }

    // Iterated pairwise Lagrange reduction; each sweep size-reduces every
    // vector against every other and drops the ones that collapse.
    for (int sweep = 0; sweep < depth; ++sweep) {
        std::sort(pool.begin(), pool.end(), [](const VectorR& a, const VectorR& b) {
            const double na = l2_norm(a), nb = l2_norm(b);
            if (na != nb) return na < nb;
            return a < b;
        });
        for (std::size_t i = 0; i < pool.size(); ++i) {
            for (std::size_t j = 0; j < pool.size(); ++j) {
                if (i == j) continue;
                const double denom = dot(pool[j], pool[j]);
                if (denom <= 1e-24) continue;
                const double m = std::round(dot(pool[i], pool[j]) / denom);
                if (m != 0.0) pool[i] = sub(pool[i], scale(pool[j], m));
            }
        }
        pool.erase(std::remove_if(pool.begin(), pool.end(),
                                  [](const VectorR& v) { return l2_norm(v) <= 1e-12; }),
                   pool.end());
        if (pool.empty()) break;
    }

    // Greedy Gram-Schmidt over the shortest vectors; the covolume of the
    // best rank-r sublattice is the product of the residual norms.
    std::sort(pool.begin(), pool.end(), [](const VectorR& a, const VectorR& b) {
        const double na = l2_norm(a), nb = l2_norm(b);
        if (na != nb) return na < nb;
        return a < b;
    });
    std::vector<VectorR> basis;
    double covolume = 1.0;
    for (const auto& v : pool) {
        if (basis.size() == r) break;
        VectorR residual = v;
        for (const auto& b : basis) {
            const double denom = dot(b, b);
            residual = sub(residual, scale(b, dot(residual, b) / denom));
        }
        const double norm = l2_norm(residual);
        if (norm > 1e-10 * std::max(1.0, l2_norm(v))) {
            basis.push_back(v);
            covolume *= norm;
        }
    }

    NonArithmeticityReport report;
    report.rank = basis.size();
    report.lattice_covolume =
        basis.size() == r ? covolume : std::numeric_limits<double>::infinity();
    report.dense_heuristic = basis.size() == r && report.lattice_covolume < threshold;
    return report;
}

std::vector<VectorR> limit_cone_sample(const GroupSpec& spec, int L, std::size_t cap) {
    if (L < 1) raise(ErrorCode::InvalidArgument, "limit cone sample needs L >= 1");
    std::vector<VectorR> out;
    for (const auto& e : enumerate_ball(spec, L, cap)) {
        if (e.letters.empty()) continue;
        const double norm = l2_norm(e.cartan);
        if (norm >= 1.0) out.push_back(scale(e.cartan, 1.0 / norm));
    }
    return out;
}

TransversalityReport transversality_check(const GroupSpec& spec, int L, double tol,
                                          std::size_t cap) {
    if (L < 2) raise(ErrorCode::InvalidArgument, "transversality check needs L >= 2");
    const std::vector<GroupElement> ball = enumerate_ball(spec, L, cap);

    TransversalityReport report;

    // Divergence proxy: bucket minima of the smallest factor displacement
    // must be nondecreasing and clear the growth floor. A generator that
    // fixes the basepoint in some factor already violates divergence (its
    // cyclic orbit has a frozen component), so the floor must be positive.
    double min_gen_disp = std::numeric_limits<double>::infinity();
    for (const auto& g : spec.generators) {
        const VectorR k = kappa(spec.basepoint, g.apply(spec.basepoint));
        for (double d : k) min_gen_disp = std::min(min_gen_disp, d);
    }
    report.growth_floor_rate = 0.2 * min_gen_disp;
    const bool floor_positive = min_gen_disp > 1e-9;

    report.bucket_minima.assign(static_cast<std::size_t>(L), std::numeric_limits<double>::infinity());
    for (const auto& e : ball) {
        if (e.letters.empty()) continue;
        double min_disp = std::numeric_limits<double>::infinity();
        for (double d : e.cartan) min_disp = std::min(min_disp, d);
        double& bucket = report.bucket_minima[e.word_length() - 1];
        bucket = std::min(bucket, min_disp);
    }
    report.divergent_ok = floor_positive;
    for (std::size_t len = 0; len < report.bucket_minima.size(); ++len) {
        const double m = report.bucket_minima[len];
        if (!std::isfinite(m)) continue;  // exhausted finite group bucket
        if (m < report.growth_floor_rate * static_cast<double>(len + 1)) {
            report.divergent_ok = false;
        }
        if (len > 0 && std::isfinite(report.bucket_minima[len - 1]) &&
            m < report.bucket_minima[len - 1] - 1e-12) {
            report.divergent_ok = false;
        }
    }

    // Antipodality: attracting tuples of jointly loxodromic elements must
    // either agree in every component or differ in every component. A sort
    // per factor finds the near-collisions without touching all pairs.
    struct Tuple {
        std::vector<double> angles;
        std::size_t element;
    };
    std::vector<Tuple> tuples;
    for (std::size_t idx = 0; idx < ball.size(); ++idx) {
        const auto& e = ball[idx];
        if (e.letters.empty() || !jointly_loxodromic(e.matrix)) continue;
        const ProductBoundaryPoint att = attracting_tuple(e.matrix);
        Tuple t;
        t.element = idx;
        for (const auto& b : att.components) t.angles.push_back(boundary_angle(b));
        tuples.push_back(std::move(t));
    }

    report.antipodal_ok = true;
    constexpr double kTwoPi = 2.0 * 3.14159265358979323846;
    auto angle_gap = [](double a, double b) {
        double d = std::abs(a - b);
        return std::min(d, kTwoPi - d);
    };
    // Chordal distance ~ angular distance for small separations. A sorted
    // sweep per factor (with a wrapped copy for pairs straddling +-pi)
    // finds the near-collisions without touching all pairs.
    for (std::size_t factor = 0; factor < spec.r && report.witnesses.size() < 100; ++factor) {
        const std::size_t n = tuples.size();
        std::vector<std::size_t> order(n);
        for (std::size_t i = 0; i < n; ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return tuples[a].angles[factor] < tuples[b].angles[factor];
        });
        auto sorted_angle = [&](std::size_t k) {
            return k < n ? tuples[order[k]].angles[factor]
                         : tuples[order[k - n]].angles[factor] + kTwoPi;
        };
        for (std::size_t oi = 0; oi < n; ++oi) {
            for (std::size_t oj = oi + 1; oj < oi + n && oj < 2 * n; ++oj) {
                if (sorted_angle(oj) - sorted_angle(oi) > tol) break;
                const Tuple& A = tuples[order[oi]];
                const Tuple& B = tuples[order[oj % n]];
                // Colliding in this factor: a genuine antipodality failure
                // keeps the collision while some other factor differs at a
                // macroscopic scale. Requiring three orders of magnitude
                // between the scales keeps fixed-point clusters of deep
                // words (which shrink together in every factor) from being
                // reported as violations.
                double max_gap = 0.0;
                for (std::size_t f = 0; f < spec.r; ++f) {
                    max_gap = std::max(max_gap, angle_gap(A.angles[f], B.angles[f]));
                }
                if (max_gap > 1000.0 * tol) {
                    report.antipodal_ok = false;
                    if (report.witnesses.size() < 100) {
                        report.witnesses.push_back(ball[A.element].word(spec) + " | " +
                                                   ball[B.element].word(spec) + " | factor " +
                                                   std::to_string(factor));
                    }
                }
            }
        }
    }
    return report;
}

std::vector<GroupElement> conical_witness(const ProductBoundaryPoint& xi, const GroupSpec& spec,
                                          int L, double R, std::size_t cap) {
    if (!(R > 0.0)) raise(ErrorCode::InvalidArgument, "conical witness needs R > 0");
    std::vector<GroupElement> out;
    for (const auto& e : enumerate_ball(spec, L, cap)) {
        if (e.letters.empty()) continue;
        if (product_shadow_contains(spec.basepoint, e.matrix.apply(spec.basepoint), R, xi)) {
            out.push_back(e);
        }
    }
    return out;
}

std::optional<GroupElement> guided_witness(const ProductBoundaryPoint& xi,
                                           const GroupElement& phi, double K, int n,
                                           const GroupSpec& spec, int L, std::size_t cap) {
    if (!jointly_loxodromic(phi.matrix)) {
        raise(ErrorCode::NotJointlyLoxodromic, "guided witness needs phi loxodromic everywhere");
    }
    if (n < 1) raise(ErrorCode::InvalidArgument, "guided witness needs n >= 1");
    const H2Point x0 = spec.basepoint.components[0];
    const IsometryH2 phi1n = power(phi.matrix.components[0], n);
    const H2Point far_point = phi1n.apply(x0);
    const BoundaryPointH2 xi1 = xi.components[0];

    for (const auto& h : enumerate_ball(spec, L, cap)) {
        const IsometryH2& h1 = h.matrix.components[0];
        const SegmentH2 seg(h1.apply(x0), h1.apply(far_point));
        if (seg.degenerate()) continue;
        if (is_aligned_triple(x0, seg, xi1, K)) return h;
    }
    return std::nullopt;
}

}  // namespace horo
