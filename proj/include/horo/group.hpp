#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "horo/product.hpp"

// Finitely generated subgroups of Isom(Z): word-ball enumeration with
// matrix deduplication, Cartan and Jordan projections, length spectra,
// limit cones, transversality diagnostics, and conical/guided witnesses.

namespace horo {

inline constexpr std::size_t kDefaultBallCap = 5'000'000;

struct GroupSpec {
    std::size_t r = 0;
    std::vector<std::string> generator_names;
    std::vector<ProductIsometry> generators;
    ProductPoint basepoint;           // defaults to i in every factor
    double dedup_tolerance = 1e-9;

    static GroupSpec from_json_text(const std::string& text);  // raises SpecParse
    static GroupSpec from_file(const std::string& path);
    std::string to_json_text() const;

    void validate() const;  // raises InvalidArgument on a malformed spec
};

struct GroupElement {
    // Reduced word over generator letters: index i >= 1 means generator
    // i - 1, negative means its inverse; empty word is the identity.
    std::vector<int> letters;
    ProductIsometry matrix;
    VectorR cartan;  // kappa(basepoint, matrix basepoint), cached

    std::size_t word_length() const { return letters.size(); }
    std::string word(const GroupSpec& spec) const;
};

struct SpectrumSample {
    std::vector<VectorR> vectors;
    int max_word_length = 0;
};

// All distinct elements with reduced words of length <= L, deduplicated
// up to sign per factor within spec.dedup_tolerance, identity included,
// ordered by (word length, letter order). Raises BallTooLarge past cap.
std::vector<GroupElement> enumerate_ball(const GroupSpec& spec, int L,
                                         std::size_t cap = kDefaultBallCap);

VectorR cartan_projection(const GroupElement& e);
// Per-factor translation lengths; raises NotJointlyLoxodromic with the
// offending factors listed when some component is not loxodromic.
VectorR jordan_projection(const GroupElement& e);
bool jointly_loxodromic(const ProductIsometry& g);

SpectrumSample length_spectrum(const GroupSpec& spec, int L,
                               std::size_t cap = kDefaultBallCap);

struct NonArithmeticityReport {
    bool dense_heuristic = false;
    double lattice_covolume = 0.0;  // +inf when no rank-r sublattice was found
    std::size_t rank = 0;
};
// Greedy integer reduction (iterated pairwise Lagrange sweeps) on the
// sample; heuristic evidence only, never a decision procedure.
NonArithmeticityReport non_arithmeticity_report(const SpectrumSample& sample, double threshold,
                                                int depth = 12);

// Normalized Cartan directions kappa(g)/|kappa(g)|_2 over the ball,
// restricted to |kappa(g)|_2 >= 1.
std::vector<VectorR> limit_cone_sample(const GroupSpec& spec, int L,
                                       std::size_t cap = kDefaultBallCap);

struct TransversalityReport {
    bool divergent_ok = false;
    bool antipodal_ok = false;
    // Failing pairs as "word | word | factor" strings, capped at 100.
    std::vector<std::string> witnesses;
    std::vector<double> bucket_minima;  // min_i d_i over each word-length bucket
    double growth_floor_rate = 0.0;     // 0.2 * min generator displacement
};
// Falsification-oriented finite-ball diagnostic: it can certify failure,
// only ever evidence success. An antipodality witness is a pair of
// attracting tuples colliding within tol in some factor while another
// factor differs by more than 1000 tol; the scale separation keeps the
// naturally shrinking fixed-point clusters of deep words out of the
// witness list.
TransversalityReport transversality_check(const GroupSpec& spec, int L, double tol = 1e-6,
                                          std::size_t cap = kDefaultBallCap);

// Non-identity ball elements whose product shadow at radius R contains xi.
std::vector<GroupElement> conical_witness(const ProductBoundaryPoint& xi, const GroupSpec& spec,
                                          int L, double R, std::size_t cap = kDefaultBallCap);

// First ball element h making (x0, h [x0, phi^n x0], xi) K-aligned in the
// first factor; empty when no witness exists in the ball.
std::optional<GroupElement> guided_witness(const ProductBoundaryPoint& xi,
                                           const GroupElement& phi, double K, int n,
                                           const GroupSpec& spec, int L,
                                           std::size_t cap = kDefaultBallCap);

// Attracting fixed tuple of a jointly loxodromic element.
ProductBoundaryPoint attracting_tuple(const ProductIsometry& g);

}  // namespace horo
