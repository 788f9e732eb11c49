#pragma once

#include <cmath>
#include <cstdint>

#include "horo/halfplane.hpp"

// Deterministic sampling for the randomized verifiers. Everything is built
// on SplitMix64 with hand-rolled uniform/normal conversions, so results are
// bit-reproducible across platforms for a fixed (seed, trial) pair.

namespace horo {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}
    // Independent stream for one trial of a seeded job.
    Rng(std::uint64_t seed, std::uint64_t trial)
        : state_(seed ^ (0x9e3779b97f4a7c15ULL + trial * 0xbf58476d1ce4e5b9ULL)) {
        next();
        next();
    }

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1).
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Standard normal via Box-Muller.
    double normal() {
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
    }

    bool coin(double p = 0.5) { return uniform() < p; }

    std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : next() % n; }

private:
    std::uint64_t state_;
};

// Gaussian point in half-plane coordinates, im clipped to [0.05, 20].
inline H2Point sample_point(Rng& rng) {
    const double re = 3.0 * rng.normal();
    const double im = std::min(20.0, std::max(0.05, std::abs(3.0 * rng.normal())));
    return H2Point(re, im);
}

// Random boundary point: uniform Cayley angle, with an explicit slice of
// exactly-infinite samples so the vertical-geodesic paths stay exercised.
inline BoundaryPointH2 sample_boundary(Rng& rng) {
    if (rng.coin(1.0 / 32.0)) return BoundaryPointH2::infinity();
    return boundary_from_angle(rng.uniform(-3.14159265358979323846, 3.14159265358979323846));
}

inline GeodesicH2 sample_geodesic(Rng& rng) {
    for (;;) {
        const BoundaryPointH2 u = sample_boundary(rng);
        const BoundaryPointH2 v = sample_boundary(rng);
        if (!boundary_equal(u, v, 1e-6)) return GeodesicH2(u, v);
    }
}

// Rotation about i by angle theta.
inline IsometryH2 rotation_about_i(double theta) {
    const double c = std::cos(theta / 2.0), s = std::sin(theta / 2.0);
    return IsometryH2(c, s, -s, c);
}

// Translation by t along the imaginary axis.
inline IsometryH2 axis_translation(double t) {
    return IsometryH2(std::exp(t / 2.0), 0.0, 0.0, std::exp(-t / 2.0));
}

// Random isometry displacing i by at most max_shift.
inline IsometryH2 sample_isometry_near_identity(Rng& rng, double max_shift) {
    const IsometryH2 rot = rotation_about_i(rng.uniform(0.0, 6.283185307179586));
    const IsometryH2 shift = axis_translation(rng.uniform(0.0, max_shift));
    const IsometryH2 rot2 = rotation_about_i(rng.uniform(0.0, 6.283185307179586));
    return rot2 * shift * rot;
}

// Loxodromic with translation length in [0.1, 3] whose axis passes within
// axis_offset of the basepoint i.
inline IsometryH2 sample_loxodromic(Rng& rng, double axis_offset = 0.3) {
    const double tau = std::min(3.0, 0.1 + std::abs(rng.normal()));
    const IsometryH2 h = sample_isometry_near_identity(rng, axis_offset);
    return h * axis_translation(tau) * h.inverse();
}

}  // namespace horo
