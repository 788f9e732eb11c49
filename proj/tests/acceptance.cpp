// Acceptance suite: one pass/fail line per criterion, every tolerance
// pinned in code. Run with no arguments for the full list or with
// --criterion <name> for a single one; the exit status is the number of
// failing criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <string>
#include <vector>

#include "horo/alignment.hpp"
#include "horo/measures.hpp"
#include "horo/rng.hpp"
#include "horo/verify.hpp"

using namespace horo;

namespace {

struct Criterion {
    const char* name;
    std::function<bool(std::string&)> run;
};

double seconds_since(const std::chrono::steady_clock::time_point& start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

bool check_appendix_constant(std::string& detail) {
    const auto start = std::chrono::steady_clock::now();
    // The pi/2-0-0 ideal triangle: vertex i, ideal vertices 1 and infinity;
    // measured distance from the vertex to the opposite side (1, infinity).
    const GeodesicH2 opposite(BoundaryPointH2(1.0), BoundaryPointH2::infinity());
    const double measured = dist_to_geodesic(opposite, H2Point(0.0, 1.0));
    const double pinned = 2.0 * std::atanh(1.0 - 1.0 / std::sqrt(2.0));
    const double wall = seconds_since(start);
    char buf[256];
    std::snprintf(buf, sizeof(buf),
                  "measured %.6f vs pinned 2*atanh(1-1/sqrt2) = %.6f (|diff| %.2e), %.3f s",
                  measured, pinned, std::abs(measured - pinned), wall);
    detail = buf;
    return std::abs(measured - pinned) <= 1e-4 && wall < 1.0;
}

bool run_suite(LemmaId id, long long trials, std::uint64_t seed, double budget_seconds,
               std::string& detail) {
    VerifyJob job;
    job.lemma = id;
    job.trials = trials;
    job.seed = seed;
    const Report report = run_verify(job);
    char buf[256];
    std::snprintf(buf, sizeof(buf), "%lld trials, %lld failures, worst %.6g, %.2f s",
                  report.trials, report.failures, report.worst_case, report.wall_seconds);
    detail = buf;
    return report.failures == 0 && report.wall_seconds < budget_seconds;
}

bool check_corollary_defect(std::string& detail) {
    return run_suite(LemmaId::ProjectionDefect, 100000, 1, 30.0, detail);
}

bool check_contracting(std::string& detail) {
    return run_suite(LemmaId::Contracting, 10000, 1, 60.0, detail);
}

bool check_shadow_alignment(std::string& detail) {
    std::string fwd, bwd;
    const bool ok_fwd = run_suite(LemmaId::ShadowAlignFwd, 10000, 1, 60.0, fwd);
    const bool ok_bwd = run_suite(LemmaId::ShadowAlignBwd, 10000, 1, 60.0, bwd);
    detail = "forward: " + fwd + " | backward: " + bwd;
    return ok_fwd && ok_bwd;
}

bool check_squeezing(std::string& detail) {
    const SqueezeEstimate est = squeeze_estimate(1.0, 10000, 1);
    char buf[256];
    std::snprintf(buf, sizeof(buf), "L = %.2f (cap %s), worst midpoint distance %.4f",
                  est.L, est.cap_reached ? "hit" : "clear", est.worst_midpoint_distance);
    detail = buf;
    return !est.cap_reached && est.L <= 64.0;
}

bool check_busemann(std::string& detail) {
    const auto start = std::chrono::steady_clock::now();
    const bool ok = run_suite(LemmaId::Cocycle, 1000, 7, 10.0, detail);
    return ok && seconds_since(start) < 10.0;
}

bool check_jordan(std::string& detail) {
    double worst_linear = 0.0;
    double worst_growth = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        Rng rng(77, static_cast<std::uint64_t>(trial));
        const IsometryH2 g = sample_loxodromic(rng);
        const double tau = translation_length_axis(g).translation_length;
        for (int k = 1; k <= 10; ++k) {
            const double tau_k = translation_length_axis(power(g, k)).translation_length;
            worst_linear = std::max(worst_linear, std::abs(tau_k - k * tau));
        }
        const H2Point o(0.0, 1.0);
        const double rate = dist(o, power(g, 200).apply(o)) / 200.0;
        worst_growth = std::max(worst_growth, std::abs(rate - tau));
    }
    char buf[256];
    std::snprintf(buf, sizeof(buf), "worst |tau_k - k tau| %.2e, worst growth gap %.2e",
                  worst_linear, worst_growth);
    detail = buf;
    return worst_linear <= 1e-9 && worst_growth <= 1e-3;
}

bool check_transverse_diagnostics(std::string& detail) {
    const TransversalityReport report = transversality_check(bundled_fixture(), 10);
    std::string shadow_detail;
    const bool shadow_ok = run_suite(LemmaId::SimultaneousShadow, 1, 1, 120.0, shadow_detail);
    detail = std::string("divergent ") + (report.divergent_ok ? "ok" : "FAILED") +
             ", antipodal " + (report.antipodal_ok ? "ok" : "FAILED") +
             " | componentwise shadows: " + shadow_detail;
    return report.divergent_ok && report.antipodal_ok && shadow_ok;
}

bool check_critical_exponent(std::string& detail) {
    const auto start = std::chrono::steady_clock::now();
    const GroupSpec spec = bundled_fixture();
    const LinearForm half(VectorR{0.5, 0.5});
    const CriticalExponentEstimate at10 = critical_exponent(spec, half, 10);
    const CriticalExponentEstimate at8 = critical_exponent(spec, half, 8);
    const CriticalExponentEstimate single =
        critical_exponent(bundled_single_factor(), LinearForm(VectorR{1.0}), 10);
    const double wall = seconds_since(start);
    char buf[256];
    std::snprintf(buf, sizeof(buf),
                  "delta(10) %.4f, delta(8) %.4f, single-factor %.4f, %.1f s",
                  at10.delta, at8.delta, single.delta, wall);
    detail = buf;
    return std::abs(at10.delta - at8.delta) <= 0.05 &&
           std::abs(at10.delta - single.delta) <= 0.05 && wall < 300.0;
}

bool check_conformality(std::string& detail) {
    const GroupSpec spec = bundled_fixture();
    const LinearForm half(VectorR{0.5, 0.5});
    const double s = critical_exponent(spec, half, 10).delta + 0.01;
    const auto ball = enumerate_ball(spec, 1);
    bool ok = true;
    detail.clear();
    for (const auto& e : ball) {
        if (e.word_length() != 1 || e.letters[0] < 0) continue;
        const ResidualReport at8 = conformality_residual(spec, half, s, 8, e, 64);
        const ResidualReport at10 = conformality_residual(spec, half, s, 10, e, 64);
        char buf[160];
        std::snprintf(buf, sizeof(buf), "%s%s: r(8) %.4f, r(10) %.4f",
                      detail.empty() ? "" : " | ", e.word(spec).c_str(), at8.max_residual,
                      at10.max_residual);
        detail += buf;
        ok = ok && std::isfinite(at8.max_residual) &&
             at10.max_residual <= at8.max_residual + 0.05;
    }
    return ok;
}

bool check_quasi_invariance(std::string& detail) {
    const GroupSpec spec = bundled_fixture();
    const LinearForm half(VectorR{0.5, 0.5});
    const double delta = critical_exponent(spec, half, 8).delta;
    const AtomicMeasure nu = ps_density(spec, half, delta + 0.01, 8);

    const auto ball = enumerate_ball(spec, 1);
    const GroupElement* phi = nullptr;
    for (const auto& e : ball) {
        if (e.word_length() == 1 && e.letters[0] == 1) phi = &e;
    }
    const VectorR tau = jordan_projection(*phi);

    BoxRegion region;
    region.boundary_cells = canonical_cells(2, 8);
    region.box = {Interval{0.0, 1.0}, Interval{0.0, 1.0}};
    const double base = br_box_measure(nu, delta, half, region);
    const double shifted = br_box_measure(nu, delta, half, translate_box(region, tau));
    const double expected = std::exp(delta * half(tau));
    const double rel_error = std::abs(shifted / base / expected - 1.0);
    char buf[200];
    std::snprintf(buf, sizeof(buf), "ratio %.12g vs e^{delta psi(tau)} %.12g, rel error %.2e",
                  shifted / base, expected, rel_error);
    detail = buf;
    return rel_error < 1e-9;
}

bool check_non_arithmeticity(std::string& detail) {
    SpectrumSample dense;
    dense.vectors = {{1.0, 0.0}, {0.0, 1.0}, {std::sqrt(2.0), std::sqrt(3.0)}};
    const auto dense_report = non_arithmeticity_report(dense, 1e-3, 12);

    SpectrumSample lattice;
    lattice.vectors = {{1.0, 0.0}, {0.0, 1.0}};
    const auto lattice_report = non_arithmeticity_report(lattice, 1e-3, 12);

    char buf[200];
    std::snprintf(buf, sizeof(buf),
                  "dense: heuristic %d covolume %.2e | lattice: heuristic %d covolume %.2f",
                  dense_report.dense_heuristic, dense_report.lattice_covolume,
                  lattice_report.dense_heuristic, lattice_report.lattice_covolume);
    detail = buf;
    return dense_report.dense_heuristic && !lattice_report.dense_heuristic;
}

}  // namespace

int main(int argc, char** argv) {
    std::string only;
    for (int i = 1; i + 1 < argc; ++i) {
        if (std::strcmp(argv[i], "--criterion") == 0) only = argv[i + 1];
    }

    const std::vector<Criterion> criteria{
        {"appendix_constant", check_appendix_constant},
        {"corollary_defect", check_corollary_defect},
        {"contracting_lemma", check_contracting},
        {"shadow_alignment", check_shadow_alignment},
        {"squeezing", check_squeezing},
        {"busemann", check_busemann},
        {"jordan", check_jordan},
        {"transverse_diagnostics", check_transverse_diagnostics},
        {"critical_exponent", check_critical_exponent},
        {"conformality", check_conformality},
        {"quasi_invariance", check_quasi_invariance},
        {"non_arithmeticity", check_non_arithmeticity},
    };

    int failures = 0;
    bool matched = false;
    for (const auto& criterion : criteria) {
        if (!only.empty() && only != criterion.name) continue;
        matched = true;
        std::string detail;
        bool ok = false;
        try {
            ok = criterion.run(detail);
        } catch (const std::exception& err) {
            detail = std::string("exception: ") + err.what();
        }
        std::printf("%s %s: %s\n", ok ? "PASS" : "FAIL", criterion.name, detail.c_str());
        std::fflush(stdout);
        if (!ok) ++failures;
    }
    if (!only.empty() && !matched) {
        std::fprintf(stderr, "unknown criterion: %s\n", only.c_str());
        return 64;
    }
    return failures;
}
